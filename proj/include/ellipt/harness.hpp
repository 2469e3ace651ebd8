#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ellipt/mfs.hpp"

namespace ellipt {

/// One row of a convergence sweep. A failed solve keeps its N and carries the
/// reason in `failure`; epsilon and condition_estimate are NaN in that case.
struct ConvergenceRecord {
  int n_charges = 0;
  double epsilon = 0.0;
  double condition_estimate = 1.0;
  double wall_time = 0.0;  // seconds
  std::string failure;

  bool ok() const { return failure.empty(); }
};

/// epsilon_N ~ prefactor * rate^N, fitted in log space.
struct DecayFit {
  double rate = 0.0;
  double prefactor = 0.0;
  std::pair<int, int> fit_range;
  double rms_log_residual = 0.0;
  std::size_t points = 0;
};

inline constexpr double kDefaultFitFloor = 1e-12;

/// N = 8, 16, ..., 64.
std::vector<int> default_n_grid();

/// Solves spec_template for every N and records epsilon_N with 4N boundary
/// samples. Per-N failures are recorded rather than thrown.
std::vector<ConvergenceRecord> sweep_N(const ProblemSpec& spec_template,
                                       std::span<const int> n_values);

/// Least-squares line through (N, log epsilon_N) over successful records with
/// epsilon above `floor`. Needs at least four such records.
DecayFit fit_decay_rate(std::span<const ConvergenceRecord> records,
                        double floor = kDefaultFitFloor);

/// Max over 64 points on |z| = 2r of |f_N'(z) - U(1 - r^2/z^2)| / U for the
/// square lattice (scale*r, scale*r*i).
double dilute_limit_check(double radius, double scale, double flow_speed, int n_charges,
                          double placement_ratio = 0.7);

}  // namespace ellipt
