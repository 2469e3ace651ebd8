#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ellipt/harness.hpp"
#include "ellipt/mfs.hpp"

namespace ellipt {

/// Axis-aligned rectangle in the physical plane.
struct Window {
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;

  bool contains(cplx z) const {
    return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
  }
};

struct FieldSample {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
  double psi = 0.0;
  bool inside_obstacle = false;
};

/// True when z lies in a lattice translate of the obstacle, or so close to a
/// charge translate that the kernels cannot be evaluated.
bool inside_obstacle(const MfsSolution& sol, cplx z);

/// Distance from z to the nearest lattice translate of the obstacle boundary.
double distance_to_obstacle(const MfsSolution& sol, cplx z);

/// nx*ny samples in row-major order (y outer, x inner), endpoints included.
std::vector<FieldSample> sample_grid(const MfsSolution& sol, const Window& window, int nx,
                                     int ny);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

inline constexpr const char* kFieldCsvHeader = "x,y,u,v,psi,inside";
inline constexpr const char* kConvergenceCsvHeader = "N,epsilon,cond,seconds";
inline constexpr const char* kSolutionMagic = "ellipt-flow-solution v1";

void write_field_csv(std::span<const FieldSample> samples, std::ostream& out);
void write_field_csv(std::span<const FieldSample> samples, const std::filesystem::path& path);

void write_convergence_csv(std::span<const ConvergenceRecord> records, std::ostream& out);
void write_convergence_csv(std::span<const ConvergenceRecord> records,
                           const std::filesystem::path& path);

/// Versioned text format holding omega1, omega2, U, r, q, N, C, the charge
/// and collocation points and the charges, all at 17 significant digits.
/// Only circular obstacles can be serialized.
void write_solution(const MfsSolution& sol, std::ostream& out);
void write_solution(const MfsSolution& sol, const std::filesystem::path& path);

MfsSolution read_solution(std::istream& in);
MfsSolution read_solution(const std::filesystem::path& path);

}  // namespace ellipt
