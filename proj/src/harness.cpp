#include "ellipt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "ellipt/detail/parallel.hpp"
#include "ellipt/errors.hpp"

namespace ellipt {

std::vector<int> default_n_grid() { return {8, 16, 24, 32, 40, 48, 56, 64}; }

std::vector<ConvergenceRecord> sweep_N(const ProblemSpec& spec_template,
                                       std::span<const int> n_values) {
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 4) throw InvalidSpec("sweep values of N must be at least 4");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw InvalidSpec("sweep values of N must be strictly increasing");
    }
  }
  std::vector<ConvergenceRecord> records(n_values.size());
  detail::parallel_for(n_values.size(), [&](std::size_t i) {
    ConvergenceRecord& rec = records[i];
    rec.n_charges = n_values[i];
    const auto start = std::chrono::steady_clock::now();
    try {
      ProblemSpec spec = spec_template;
      spec.n_charges = n_values[i];
      const MfsSolution sol = solve(spec);
      rec.epsilon = boundary_residual(sol);
      rec.condition_estimate = sol.condition_estimate;
    } catch (const Error& e) {
      rec.failure = e.what();
      rec.epsilon = std::numeric_limits<double>::quiet_NaN();
      rec.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    }
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return records;
}

DecayFit fit_decay_rate(std::span<const ConvergenceRecord> records, double floor) {
  std::vector<std::pair<int, double>> points;
  for (const auto& r : records) {
    if (r.ok() && std::isfinite(r.epsilon) && r.epsilon > floor) {
      points.emplace_back(r.n_charges, std::log(r.epsilon));
    }
  }
  // fixed summation order makes the fit independent of the input order
  std::sort(points.begin(), points.end());
  if (points.size() < 4) {
    throw InsufficientData("need at least 4 records above the floor, have " +
                           std::to_string(points.size()));
  }
  const double n = double(points.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (!(sxx > 0.0)) throw InsufficientData("records do not span more than one N");
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (intercept + slope * x);
    ss += r * r;
  }
  DecayFit fit;
  fit.rate = std::exp(slope);
  fit.prefactor = std::exp(intercept);
  fit.fit_range = {points.front().first, points.back().first};
  fit.rms_log_residual = std::sqrt(ss / n);
  fit.points = points.size();
  return fit;
}

double dilute_limit_check(double radius, double scale, double flow_speed, int n_charges,
                          double placement_ratio) {
  if (!(scale >= 10.0)) throw InvalidSpec("dilute limit check needs scale >= 10");
  const cplx omega1 = scale * radius;
  const cplx omega2 = cplx(0, scale * radius);
  const MfsSolution sol = solve(
      circle_problem(omega1, omega2, radius, flow_speed, n_charges, placement_ratio));
  double worst = 0.0;
  constexpr int kProbes = 64;
  for (int k = 0; k < kProbes; ++k) {
    const cplx z = std::polar(2.0 * radius, 2.0 * std::numbers::pi * k / kProbes);
    const cplx periodic = complex_velocity(sol, z);
    const cplx isolated = analytic_isolated_cylinder(z, flow_speed, radius);
    worst = std::max(worst, std::abs(periodic - isolated) / flow_speed);
  }
  return worst;
}

}  // namespace ellipt
