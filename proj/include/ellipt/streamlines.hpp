#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ellipt/field_io.hpp"
#include "ellipt/mfs.hpp"

namespace ellipt {

enum class Termination { WindowBoundary, Obstacle, MaxSteps, Stalled, NoSeed };

const char* to_string(Termination t);

struct Streamline {
  cplx seed;
  std::vector<cplx> points;
  double psi_level = 0.0;
  Termination termination = Termination::WindowBoundary;
};

/// Lengths are in units of the obstacle radius, psi tolerances in units of U*r.
struct TraceOptions {
  double initial_step = 2e-2;
  double max_step = 5e-2;
  double min_step = 1e-7;
  double drift_tolerance = 1e-8;
  double obstacle_margin = 1e-3;
  int max_steps = 100000;
};

/// Advects `seed` along the unit-speed velocity field with adaptive RK4, each
/// accepted step projected back onto the seed's psi level. Throws
/// StagnationStall when the speed drops below 1e-12 U.
Streamline trace_streamline(const MfsSolution& sol, cplx seed, const Window& window,
                            const TraceOptions& options = {});

/// Seeds n_lines points on the window's left edge at equal psi increments and
/// traces each. Stalled or unseedable lines are kept with an empty path.
std::vector<Streamline> trace_streamlines(const MfsSolution& sol, const Window& window,
                                          int n_lines, const TraceOptions& options = {});

/// One "x,y" CSV per line (streamline_000.csv, ...) plus streamlines.csv
/// indexing them.
void write_streamlines(std::span<const Streamline> lines, const std::filesystem::path& directory);

}  // namespace ellipt
