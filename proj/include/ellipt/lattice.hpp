#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

#include "ellipt/errors.hpp"

namespace ellipt {

template <typename Real>
bool is_finite(const std::complex<Real>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Integer 2x2 matrix with determinant +1 acting on a pair of periods.
using Unimodular = std::array<std::array<std::int64_t, 2>, 2>;

/// A period lattice {m*omega1 + n*omega2}.
///
/// The caller-facing pair (omega1, omega2) is kept as given. A Gauss-reduced
/// basis (a, b) of the same lattice, with |a| <= |b| and |Re(b/a)| <= 1/2, is
/// stored alongside it; series evaluations use the reduced basis because it
/// maximizes Im(b/a) and so minimizes the modulus of the nome.
template <typename Real>
class Lattice {
 public:
  using real_type = Real;
  using complex_type = std::complex<Real>;

  /// z = point + m*a + n*b with (a, b) the reduced basis.
  struct Folded {
    complex_type point;
    std::int64_t m = 0;
    std::int64_t n = 0;
  };

  Lattice(complex_type omega1, complex_type omega2)
      : omega1_(omega1), omega2_(omega2) {
    if (!is_finite(omega1) || !is_finite(omega2)) {
      throw DegenerateLattice("periods must be finite");
    }
    if (omega1 == complex_type(0) || omega2 == complex_type(0)) {
      throw DegenerateLattice("periods must be nonzero");
    }
    tau_ = omega2 / omega1;
    if (!(tau_.imag() > Real(0))) {
      throw DegenerateLattice("Im(omega2/omega1) must be positive");
    }
    nome_ = std::exp(complex_type(0, std::numbers::pi_v<Real>) * tau_);
    reduce();
  }

  complex_type omega1() const { return omega1_; }
  complex_type omega2() const { return omega2_; }
  complex_type tau() const { return tau_; }
  complex_type nome() const { return nome_; }

  std::array<complex_type, 2> reduced_basis() const { return {a_, b_}; }
  complex_type reduced_tau() const { return b_ / a_; }
  complex_type reduced_nome() const {
    return std::exp(complex_type(0, std::numbers::pi_v<Real>) * reduced_tau());
  }

  /// Rows give the reduced periods as integer combinations of (omega1, omega2).
  const Unimodular& change_of_basis() const { return change_; }

  /// Length of the shortest nonzero lattice vector.
  Real min_distance() const { return std::abs(a_); }

  complex_type point(std::int64_t m, std::int64_t n) const {
    return Real(m) * omega1_ + Real(n) * omega2_;
  }

  /// Real coordinates (alpha, beta) with z = alpha*omega1 + beta*omega2.
  std::pair<Real, Real> coordinates(complex_type z) const {
    return solve_coordinates(z, omega1_, omega2_);
  }

  /// Translates z into the reduced cell centred on the origin, whose
  /// reduced-basis coordinates lie in [-1/2, 1/2).
  Folded fold(complex_type z) const {
    const auto [alpha, beta] = solve_coordinates(z, a_, b_);
    const auto m = static_cast<std::int64_t>(std::floor(alpha + Real(0.5)));
    const auto n = static_cast<std::int64_t>(std::floor(beta + Real(0.5)));
    return {z - Real(m) * a_ - Real(n) * b_, m, n};
  }

  /// Maps quasi-period constants of the reduced basis back onto the caller's
  /// basis. Quasi-periods are additive over lattice vectors, so they follow
  /// the inverse of the change of basis.
  std::pair<complex_type, complex_type> to_caller_basis(complex_type eta_a,
                                                        complex_type eta_b) const {
    // inverse of [[p, q], [r, s]] with det 1 is [[s, -q], [-r, p]]
    const auto& c = change_;
    const complex_type eta1 = Real(c[1][1]) * eta_a - Real(c[0][1]) * eta_b;
    const complex_type eta2 = -Real(c[1][0]) * eta_a + Real(c[0][0]) * eta_b;
    return {eta1, eta2};
  }

 private:
  static std::pair<Real, Real> solve_coordinates(complex_type z, complex_type p,
                                                 complex_type q) {
    const complex_type zr = z / p;
    const complex_type t = q / p;
    const Real beta = zr.imag() / t.imag();
    const Real alpha = zr.real() - beta * t.real();
    return {alpha, beta};
  }

  // Lagrange-Gauss reduction; every step is unimodular and orientation
  // preserving, (a, b) -> (a, b - k a) or (a, b) -> (b, -a).
  void reduce() {
    a_ = omega1_;
    b_ = omega2_;
    change_ = {{{1, 0}, {0, 1}}};
    for (int iter = 0; iter < 10000; ++iter) {
      const Real shift = std::round((b_ / a_).real());
      if (shift != Real(0)) {
        const auto k = static_cast<std::int64_t>(shift);
        b_ -= shift * a_;
        change_[1][0] -= k * change_[0][0];
        change_[1][1] -= k * change_[0][1];
      }
      if (std::abs(b_) < std::abs(a_)) {
        const complex_type old_a = a_;
        a_ = b_;
        b_ = -old_a;
        const auto row0 = change_[0];
        change_[0] = change_[1];
        change_[1] = {-row0[0], -row0[1]};
        continue;
      }
      // Recompute from the integer matrix so rounding does not accumulate.
      a_ = Real(change_[0][0]) * omega1_ + Real(change_[0][1]) * omega2_;
      b_ = Real(change_[1][0]) * omega1_ + Real(change_[1][1]) * omega2_;
      return;
    }
    throw DegenerateLattice("basis reduction did not terminate");
  }

  complex_type omega1_;
  complex_type omega2_;
  complex_type tau_;
  complex_type nome_;
  complex_type a_;
  complex_type b_;
  Unimodular change_{};
};

template <typename Real>
Lattice<Real> make_lattice(std::complex<Real> omega1, std::complex<Real> omega2) {
  return Lattice<Real>(omega1, omega2);
}

using Latticed = Lattice<double>;

}  // namespace ellipt
