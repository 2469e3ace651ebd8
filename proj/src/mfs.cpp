#include "ellipt/mfs.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ellipt/detail/parallel.hpp"
#include "ellipt/errors.hpp"

namespace ellipt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fundamental solution coefficient of Q_j in psi at z.
double kernel(const EllipticContextd& ctx, cplx z, cplx charge_point) {
  const cplx linear = ctx.eta1() * charge_point * z / ctx.lattice().omega1();
  return (log_abs_sigma(z - charge_point, ctx) + linear.real()) / kTwoPi;
}

}  // namespace

void ProblemSpec::validate() const {
  if (!(flow_speed > 0.0) || !std::isfinite(flow_speed)) {
    throw InvalidSpec("flow speed U must be positive");
  }
  if (n_charges < 4) throw InvalidSpec("number of charges N must be at least 4");
  if (!(placement_ratio > 0.0 && placement_ratio < 1.0)) {
    throw InvalidSpec("placement ratio q must lie in (0, 1)");
  }
  if (!(2.0 * obstacle.max_radius() < lattice.min_distance())) {
    throw InvalidSpec("obstacle overlaps its lattice translates");
  }
}

ProblemSpec circle_problem(cplx omega1, cplx omega2, double radius, double flow_speed,
                           int n_charges, double placement_ratio) {
  ProblemSpec spec{Latticed(omega1, omega2), Obstacle::circle(radius), flow_speed, n_charges,
                   placement_ratio};
  spec.validate();
  return spec;
}

ChargeLayout build_layout(const ProblemSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.n_charges);
  const double q = spec.placement_ratio;
  const Obstacle& obstacle = spec.obstacle;
  const cplx centre = obstacle.centroid();
  ChargeLayout layout;
  layout.charge_points.reserve(n);
  layout.collocation_points.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (obstacle.is_circle()) {
      const double angle = kTwoPi * double(j) / double(n);
      layout.charge_points.push_back(centre + std::polar(q * obstacle.radius(), angle));
      layout.collocation_points.push_back(centre + std::polar(obstacle.radius(), angle));
    } else {
      const cplx z = obstacle.point(double(j) / double(n));
      const cplx zeta = centre + q * (z - centre);
      if (!obstacle.contains(zeta)) {
        throw InvalidSpec("charge point " + std::to_string(j + 1) +
                          " falls outside the obstacle");
      }
      layout.collocation_points.push_back(z);
      layout.charge_points.push_back(zeta);
    }
  }
  return layout;
}

LinearSystem assemble_system(const ChargeLayout& layout, const EllipticContextd& ctx,
                             const ProblemSpec& spec) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  if (layout.collocation_points.size() != layout.charge_points.size()) {
    throw InvalidSpec("layout has mismatched charge and collocation counts");
  }
  LinearSystem sys{Eigen::MatrixXd::Zero(n + 1, n + 1), Eigen::VectorXd::Zero(n + 1)};
  detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    const cplx zi = layout.collocation_points[row];
    for (Eigen::Index j = 0; j < n; ++j) {
      sys.matrix(i, j) = kernel(ctx, zi, layout.charge_points[static_cast<std::size_t>(j)]);
    }
    sys.matrix(i, n) = 1.0;
    sys.rhs(i) = spec.flow_speed * zi.imag();
  });
  sys.matrix.row(n).head(n).setOnes();
  return sys;
}

SolveResult solve_linear(const LinearSystem& system) {
  const auto& a = system.matrix;
  const auto& b = system.rhs;
  if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
    throw InvalidSpec("linear system must be square and match its right-hand side");
  }
  SolveResult result;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  result.condition_estimate =
      rcond > 0.0 ? std::max(1.0, 1.0 / rcond) : std::numeric_limits<double>::infinity();
  const double limit = 1.0 / std::sqrt(std::numeric_limits<double>::epsilon());
  if (result.condition_estimate <= limit) {
    result.solution = lu.solve(b);
    result.method = SolveMethod::PartialPivotLu;
  } else {
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    result.solution = cod.solve(b);
    result.method = SolveMethod::CompleteOrthogonal;
  }
  result.residual = (a * result.solution - b).lpNorm<Eigen::Infinity>();
  const double scale = b.lpNorm<Eigen::Infinity>();
  if (!result.solution.allFinite() || !(result.residual <= 1e-8 * scale)) {
    throw SolveFailure("residual " + std::to_string(result.residual) +
                       " exceeds 1e-8 * |rhs|");
  }
  return result;
}

MfsSolution make_solution(EllipticContextd ctx, ChargeLayout layout, Obstacle obstacle,
                          double flow_speed, double placement_ratio, std::vector<double> charges,
                          double stream_constant, double condition_estimate,
                          SolveMethod method) {
  if (charges.size() != layout.size()) {
    throw InvalidSpec("charge count does not match the layout");
  }
  cplx moment = 0.0;
  for (std::size_t j = 0; j < charges.size(); ++j) moment += charges[j] * layout.charge_points[j];
  const cplx a = flow_speed - cplx(0, 1) * ctx.eta1() * moment / (kTwoPi * ctx.lattice().omega1());
  return MfsSolution{std::move(ctx), std::move(layout), std::move(obstacle), flow_speed,
                     placement_ratio, std::move(charges), stream_constant, moment, a,
                     condition_estimate, method};
}

MfsSolution solve_system(const LinearSystem& system, ChargeLayout layout, EllipticContextd ctx,
                         const ProblemSpec& spec) {
  const std::size_t n = layout.size();
  if (static_cast<std::size_t>(system.rhs.size()) != n + 1) {
    throw InvalidSpec("system size does not match the layout");
  }
  const SolveResult solved = solve_linear(system);
  std::vector<double> charges(solved.solution.data(), solved.solution.data() + n);
  double total = 0.0, magnitude = 0.0;
  for (double qj : charges) {
    total += qj;
    magnitude += std::abs(qj);
  }
  if (std::abs(total) > 1e-12 * magnitude) {
    throw SolveFailure("charges violate the zero-sum constraint");
  }
  return make_solution(std::move(ctx), std::move(layout), spec.obstacle, spec.flow_speed,
                       spec.placement_ratio, std::move(charges),
                       solved.solution(static_cast<Eigen::Index>(n)), solved.condition_estimate,
                       solved.method);
}

MfsSolution solve(const ProblemSpec& spec) {
  ChargeLayout layout = build_layout(spec);
  EllipticContextd ctx(spec.lattice);
  const LinearSystem system = assemble_system(layout, ctx, spec);
  return solve_system(system, std::move(layout), std::move(ctx), spec);
}

double stream_function(const MfsSolution& sol, cplx z) {
  double sum = 0.0;
  for (std::size_t j = 0; j < sol.size(); ++j) {
    sum += sol.charges[j] * kernel(sol.context, z, sol.layout.charge_points[j]);
  }
  return sol.flow_speed * z.imag() - sum;
}

cplx complex_velocity(const MfsSolution& sol, cplx z) {
  cplx sum = 0.0;
  for (std::size_t j = 0; j < sol.size(); ++j) {
    sum += sol.charges[j] * weier_zeta(z - sol.layout.charge_points[j], sol.context);
  }
  return sol.linear_coefficient - cplx(0, 1) * sum / kTwoPi;
}

Velocity velocity(const MfsSolution& sol, cplx z) {
  const cplx w = complex_velocity(sol, z);
  return {w.real(), -w.imag()};
}

double boundary_residual(const MfsSolution& sol, int n_samples) {
  const auto n = static_cast<int>(sol.size());
  if (n_samples < 4 * n) {
    throw InvalidSpec("boundary_residual needs at least 4N samples");
  }
  const double offset = 0.5 / n;
  double worst = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    double t = offset + double(k) / n_samples;
    t -= std::floor(t);
    const cplx z = sol.obstacle.point(t);
    worst = std::max(worst, std::abs(stream_function(sol, z) - sol.stream_constant));
  }
  return worst / (sol.flow_speed * sol.obstacle.max_radius());
}

double boundary_residual(const MfsSolution& sol) {
  return boundary_residual(sol, 4 * static_cast<int>(sol.size()));
}

cplx analytic_isolated_cylinder(cplx z, double flow_speed, double radius) {
  if (std::abs(z) < radius) {
    throw InsideObstacle("point lies inside the cylinder");
  }
  return flow_speed * (1.0 - radius * radius / (z * z));
}

}  // namespace ellipt
