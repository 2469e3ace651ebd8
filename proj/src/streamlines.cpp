#include "ellipt/streamlines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include "ellipt/detail/parallel.hpp"
#include "ellipt/errors.hpp"

namespace ellipt {

namespace {

constexpr int kEdgeSamples = 1024;

// Unit vector along the flow as a complex number, or nullopt where the field
// cannot be evaluated.
std::optional<cplx> direction(const MfsSolution& sol, cplx z) {
  if (inside_obstacle(sol, z)) return std::nullopt;
  const cplx w = complex_velocity(sol, z);
  const double speed = std::abs(w);
  if (speed < 1e-12 * sol.flow_speed) throw StagnationStall("velocity vanishes near seed");
  return std::conj(w) / speed;
}

std::optional<cplx> rk4_step(const MfsSolution& sol, cplx z, double h) {
  const auto k1 = direction(sol, z);
  if (!k1) return std::nullopt;
  const auto k2 = direction(sol, z + 0.5 * h * *k1);
  if (!k2) return std::nullopt;
  const auto k3 = direction(sol, z + 0.5 * h * *k2);
  if (!k3) return std::nullopt;
  const auto k4 = direction(sol, z + h * *k3);
  if (!k4) return std::nullopt;
  return z + (h / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
}

// Newton step along grad psi = i * conj(f') towards the level set.
cplx project_to_level(const MfsSolution& sol, cplx z, double level) {
  for (int it = 0; it < 2; ++it) {
    const double miss = level - stream_function(sol, z);
    const cplx grad = cplx(0, 1) * std::conj(complex_velocity(sol, z));
    const double g2 = std::norm(grad);
    if (g2 == 0.0) break;
    z += (miss / g2) * grad;
  }
  return z;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::WindowBoundary: return "window";
    case Termination::Obstacle: return "obstacle";
    case Termination::MaxSteps: return "max_steps";
    case Termination::Stalled: return "stalled";
    case Termination::NoSeed: return "no_seed";
  }
  return "unknown";
}

Streamline trace_streamline(const MfsSolution& sol, cplx seed, const Window& window,
                            const TraceOptions& options) {
  const double r = sol.obstacle.max_radius();
  const double u_r = sol.flow_speed * r;
  const double drift_limit = options.drift_tolerance * u_r;
  const double margin = options.obstacle_margin * r;
  const double h_min = options.min_step * r;
  const double h_max = options.max_step * r;

  Streamline line;
  line.seed = seed;
  line.psi_level = stream_function(sol, seed);
  line.points.push_back(seed);
  if (!direction(sol, seed)) {
    line.termination = Termination::Obstacle;
    return line;
  }

  cplx z = seed;
  double psi = line.psi_level;
  double h = options.initial_step * r;
  for (int step = 0; step < options.max_steps; ++step) {
    std::optional<cplx> next;
    double next_psi = psi;
    while (true) {
      next = rk4_step(sol, z, h);
      if (next) {
        next_psi = stream_function(sol, *next);
        if (std::abs(next_psi - psi) <= drift_limit || h <= h_min) break;
      } else if (h <= h_min) {
        break;
      }
      h = std::max(0.5 * h, h_min);
    }
    if (!next) {
      line.termination = Termination::Obstacle;
      return line;
    }
    const bool calm = std::abs(next_psi - psi) < 0.1 * drift_limit;
    cplx projected = project_to_level(sol, *next, line.psi_level);
    if (inside_obstacle(sol, projected)) projected = *next;
    z = projected;
    psi = stream_function(sol, z);
    if (!window.contains(z)) {
      line.termination = Termination::WindowBoundary;
      return line;
    }
    line.points.push_back(z);
    if (distance_to_obstacle(sol, z) < margin) {
      line.termination = Termination::Obstacle;
      return line;
    }
    // never step further than the current clearance allows
    const double clearance = distance_to_obstacle(sol, z);
    if (calm) h = std::min(1.25 * h, h_max);
    h = std::max(std::min(h, clearance), h_min);
  }
  line.termination = Termination::MaxSteps;
  return line;
}

std::vector<Streamline> trace_streamlines(const MfsSolution& sol, const Window& window,
                                          int n_lines, const TraceOptions& options) {
  if (n_lines < 1) throw InvalidSpec("need at least one streamline");
  if (!(window.xmax > window.xmin) || !(window.ymax > window.ymin)) {
    throw InvalidSpec("window must have positive extent");
  }
  // psi along the left edge, free points only
  std::vector<double> ys(kEdgeSamples), psis(kEdgeSamples);
  std::vector<bool> free(kEdgeSamples);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kEdgeSamples; ++k) {
    ys[k] = window.ymin + (window.ymax - window.ymin) * k / (kEdgeSamples - 1);
    const cplx z(window.xmin, ys[k]);
    free[k] = !inside_obstacle(sol, z) && distance_to_obstacle(sol, z) > 1e-3 * sol.obstacle.max_radius();
    if (free[k]) {
      psis[k] = stream_function(sol, z);
      lo = std::min(lo, psis[k]);
      hi = std::max(hi, psis[k]);
    }
  }

  std::vector<Streamline> lines(static_cast<std::size_t>(n_lines));
  detail::parallel_for(lines.size(), [&](std::size_t i) {
    Streamline& line = lines[i];
    line.termination = Termination::NoSeed;
    if (!(hi > lo)) return;
    const double level = lo + (hi - lo) * (double(i) + 0.5) / n_lines;
    line.psi_level = level;
    std::optional<cplx> seed;
    for (int k = 0; k + 1 < kEdgeSamples && !seed; ++k) {
      if (!free[k] || !free[k + 1]) continue;
      if ((psis[k] - level) * (psis[k + 1] - level) > 0.0) continue;
      double a = ys[k], b = ys[k + 1];
      double fa = psis[k] - level;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = stream_function(sol, cplx(window.xmin, m)) - level;
        if ((fa <= 0.0) == (fm <= 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      seed = cplx(window.xmin, 0.5 * (a + b));
    }
    if (!seed) return;
    line.seed = *seed;
    try {
      line = trace_streamline(sol, *seed, window, options);
    } catch (const StagnationStall&) {
      line.points.clear();
      line.termination = Termination::Stalled;
    }
  });
  return lines;
}

void write_streamlines(std::span<const Streamline> lines, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  std::ofstream index(directory / "streamlines.csv", std::ios::binary);
  if (!index) throw IoFailure("cannot write " + (directory / "streamlines.csv").string());
  index << "index,file,seed_x,seed_y,psi_level,points,termination\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof name, "streamline_%03zu.csv", i);
    std::ofstream out(directory / name, std::ios::binary);
    if (!out) throw IoFailure("cannot write " + (directory / name).string());
    out << "x,y\n";
    for (const cplx p : lines[i].points) {
      out << format_double(p.real()) << ',' << format_double(p.imag()) << '\n';
    }
    if (!out) throw IoFailure("write failed for " + (directory / name).string());
    index << i << ',' << name << ',' << format_double(lines[i].seed.real()) << ','
          << format_double(lines[i].seed.imag()) << ',' << format_double(lines[i].psi_level)
          << ',' << lines[i].points.size() << ',' << to_string(lines[i].termination) << '\n';
  }
  if (!index) throw IoFailure("write failed for streamlines.csv");
}

}  // namespace ellipt
