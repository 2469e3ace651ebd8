#pragma once

// Method of fundamental solutions for potential flow past a doubly-periodic
// array of obstacles. The complex potential is approximated by
//
//   f_N(z) = A z - (i / 2 pi) sum_j Q_j log sigma(z - zeta_j),
//   A      = U - i eta1 S / (2 pi omega1),   S = sum_j Q_j zeta_j,
//
// with real charges Q_j summing to zero. Only the single-valued pieces are
// exposed: the stream function psi = Im f_N (through log|sigma|) and the
// complex velocity f_N' (through the Weierstrass zeta function).

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ellipt/elliptic.hpp"
#include "ellipt/lattice.hpp"
#include "ellipt/obstacle.hpp"

namespace ellipt {

using cplx = std::complex<double>;

struct ProblemSpec {
  Latticed lattice;
  Obstacle obstacle;
  double flow_speed = 1.0;  // U, along the real axis
  int n_charges = 0;        // N
  double placement_ratio = 0.7;  // q in (0, 1)

  /// Throws InvalidSpec on any violated invariant.
  void validate() const;
};

/// Circular obstacle of the given radius centred at the origin.
ProblemSpec circle_problem(cplx omega1, cplx omega2, double radius, double flow_speed,
                           int n_charges, double placement_ratio);

struct ChargeLayout {
  std::vector<cplx> charge_points;
  std::vector<cplx> collocation_points;

  std::size_t size() const { return charge_points.size(); }
};

/// Unknowns are (Q_1, ..., Q_N, C).
struct LinearSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

enum class SolveMethod { PartialPivotLu, CompleteOrthogonal };

struct SolveResult {
  Eigen::VectorXd solution;
  double condition_estimate = 1.0;
  SolveMethod method = SolveMethod::PartialPivotLu;
  double residual = 0.0;  // max-norm of matrix*x - rhs
};

struct MfsSolution {
  EllipticContextd context;
  ChargeLayout layout;
  Obstacle obstacle;
  double flow_speed = 1.0;
  double placement_ratio = 0.7;
  std::vector<double> charges;
  double stream_constant = 0.0;   // C
  cplx charge_moment;             // S
  cplx linear_coefficient;        // A
  double condition_estimate = 1.0;
  SolveMethod method = SolveMethod::PartialPivotLu;

  std::size_t size() const { return charges.size(); }
  const Latticed& lattice() const { return context.lattice(); }
};

struct Velocity {
  double u = 0.0;
  double v = 0.0;
};

/// Charge points on the obstacle boundary shrunk by q towards the centroid,
/// collocation points at gamma((j-1)/N).
ChargeLayout build_layout(const ProblemSpec& spec);

LinearSystem assemble_system(const ChargeLayout& layout, const EllipticContextd& ctx,
                             const ProblemSpec& spec);

/// Pivoted LU with a condition estimate; switches to a complete orthogonal
/// decomposition (minimum-norm solution) once cond > 1/sqrt(eps).
SolveResult solve_linear(const LinearSystem& system);

MfsSolution solve_system(const LinearSystem& system, ChargeLayout layout, EllipticContextd ctx,
                         const ProblemSpec& spec);

/// build_layout + assemble_system + solve_system.
MfsSolution solve(const ProblemSpec& spec);

/// Assembles a solution from known charges; S and A are derived.
MfsSolution make_solution(EllipticContextd ctx, ChargeLayout layout, Obstacle obstacle,
                          double flow_speed, double placement_ratio, std::vector<double> charges,
                          double stream_constant, double condition_estimate = 1.0,
                          SolveMethod method = SolveMethod::PartialPivotLu);

/// psi_N(z) = U Im z - (1/2pi) sum_j Q_j [log|sigma(z - zeta_j)| + Re(eta1 zeta_j z / omega1)]
double stream_function(const MfsSolution& sol, cplx z);

/// f_N'(z) = u - i v.
cplx complex_velocity(const MfsSolution& sol, cplx z);

Velocity velocity(const MfsSolution& sol, cplx z);

/// epsilon_N: max |psi_N - C| / (U r) over n_samples boundary points placed
/// half a collocation gap after each collocation parameter.
double boundary_residual(const MfsSolution& sol, int n_samples);
double boundary_residual(const MfsSolution& sol);

/// U (1 - r^2 / z^2) for a single cylinder in uniform flow.
cplx analytic_isolated_cylinder(cplx z, double flow_speed, double radius);

}  // namespace ellipt
