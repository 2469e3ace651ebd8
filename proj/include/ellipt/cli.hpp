#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ellipt/field_io.hpp"
#include "ellipt/mfs.hpp"

namespace ellipt::cli {

/// Parameters of one run. Lengths (periods, window) are in units of the
/// obstacle radius.
struct RunConfig {
  cplx omega1{4.0, 0.0};
  cplx omega2{0.0, 4.0};
  double radius = 1.0;
  double flow_speed = 1.0;
  double q = 0.7;
  std::vector<int> n_values{64};
  std::filesystem::path output_dir = ".";
  int grid_nx = 101;
  int grid_ny = 101;
  std::optional<Window> window;  // default: derived from the periods
  int streamlines = 20;

  /// Periods and window scaled by the radius.
  cplx scaled_omega1() const { return omega1 * radius; }
  cplx scaled_omega2() const { return omega2 * radius; }
  Window scaled_window() const;

  /// Problem for the largest configured N.
  ProblemSpec problem() const;
  ProblemSpec problem(int n_charges) const;
};

/// Applies one "key = value" assignment. Throws ConfigError naming the key.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" text, '#' starts a comment. Unknown keys are rejected.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Cross-key checks (q in (0,1), positive radius, ...). Throws ConfigError.
void validate(const RunConfig& config);

/// Canonical "key = value" rendering, parseable by parse_config.
std::string render(const RunConfig& config);

/// Entry point behind the ellipt-flow executable. args excludes argv[0].
/// Returns 0 on success, 1 on configuration errors, 2 on numerical failures.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ellipt::cli
