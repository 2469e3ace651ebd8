#pragma once

// Weierstrass sigma and zeta functions on a period lattice, evaluated through
// the Jacobi theta_1 q-series of the reduced basis.
//
// Period convention: omega1 and omega2 are full periods, sigma vanishes at
// m*omega1 + n*omega2, and the quasi-period constants are defined by
//
//   sigma(z + omega_k) = -exp(eta_k (z + omega_k/2)) sigma(z),
//   zeta(z + omega_k)  = zeta(z) + eta_k,
//
// so that eta_k = 2 zeta(omega_k / 2) and eta1*omega2 - eta2*omega1 = 2 pi i.
// For a reduced basis (a, b), tau = b/a, q = exp(i pi tau):
//
//   sigma(z) = (a/pi) exp(eta_a z^2 / (2a)) theta1(pi z/a) / theta1'(0),
//   eta_a    = -pi^2 theta1'''(0) / (3 a theta1'(0)).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>

#include "ellipt/errors.hpp"
#include "ellipt/lattice.hpp"

namespace ellipt {

inline constexpr std::size_t kMaxThetaTerms = 64;

template <typename Real>
Real default_tolerance() {
  return std::max(Real(1e-14), Real(16) * std::numeric_limits<Real>::epsilon());
}

namespace detail {

template <typename Real>
struct ThetaValue {
  std::complex<Real> value;       // theta1(v)
  std::complex<Real> derivative;  // theta1'(v)
  std::size_t terms = 0;
};

// c_n = (-1)^n q^{(n+1/2)^2}, evaluated from tau so the quarter power of q
// never needs a branch choice.
template <typename Real>
std::array<std::complex<Real>, kMaxThetaTerms> theta_coefficients(
    std::complex<Real> tau) {
  using C = std::complex<Real>;
  std::array<C, kMaxThetaTerms> c{};
  const C i_pi_tau = C(0, std::numbers::pi_v<Real>) * tau;
  for (std::size_t n = 0; n < kMaxThetaTerms; ++n) {
    const Real h = Real(n) + Real(0.5);
    const C e = i_pi_tau * (h * h);
    // exp underflows cleanly once Re(e) is very negative
    c[n] = (e.real() < Real(-745)) ? C(0) : std::exp(e);
    if (n % 2 == 1) c[n] = -c[n];
  }
  return c;
}

// theta1 and its derivative together. The odd harmonics are advanced by the
// rotation recurrence sin((k+2)v) = sin(kv)cos(2v) + cos(kv)sin(2v), which
// keeps full relative accuracy for small v.
template <typename Real>
ThetaValue<Real> theta_series(std::complex<Real> v,
                              const std::array<std::complex<Real>, kMaxThetaTerms>& c,
                              Real tolerance) {
  using C = std::complex<Real>;
  const C s2 = std::sin(Real(2) * v);
  const C c2 = std::cos(Real(2) * v);
  C s = std::sin(v);
  C co = std::cos(v);
  C value(0), deriv(0);
  std::size_t n = 0;
  for (; n < kMaxThetaTerms; ++n) {
    const Real k = Real(2 * n + 1);
    const C tv = c[n] * s;
    const C td = c[n] * k * co;
    value += tv;
    deriv += td;
    if (n >= 1 && std::abs(tv) <= tolerance * std::abs(value) &&
        std::abs(td) <= tolerance * std::abs(deriv)) {
      ++n;
      break;
    }
    const C s_next = s * c2 + co * s2;
    co = co * c2 - s * s2;
    s = s_next;
  }
  return {Real(2) * value, Real(2) * deriv, n};
}

}  // namespace detail

/// Precomputed state for evaluating sigma, zeta and theta_1 on one lattice.
/// Immutable once built and safe to share between threads.
template <typename Real>
class EllipticContext {
 public:
  using real_type = Real;
  using complex_type = std::complex<Real>;

  explicit EllipticContext(Lattice<Real> lattice,
                           Real tolerance = default_tolerance<Real>());

  const Lattice<Real>& lattice() const { return lattice_; }
  complex_type eta1() const { return eta1_; }
  complex_type eta2() const { return eta2_; }
  Real tolerance() const { return tolerance_; }

  /// Theta terms needed at the worst point of the reduced cell.
  std::size_t series_terms() const { return series_terms_; }

  // Reduced-basis data used by the evaluation functions.
  complex_type reduced_period() const { return lattice_.reduced_basis()[0]; }
  complex_type eta_a() const { return eta_a_; }
  complex_type eta_b() const { return eta_b_; }
  const std::array<complex_type, kMaxThetaTerms>& coefficients() const {
    return coeffs_;
  }
  complex_type theta1_prime_zero() const { return theta_d1_; }
  complex_type theta1_third_zero() const { return theta_d3_; }

  /// Quasi-period increment across the lattice vector m*a + n*b.
  complex_type eta_of(std::int64_t m, std::int64_t n) const {
    return Real(m) * eta_a_ + Real(n) * eta_b_;
  }

  /// Radius around lattice points inside which log|sigma| and zeta refuse to
  /// evaluate.
  Real singular_radius() const { return tolerance_ * std::abs(lattice_.omega1()); }

  Real legendre_residual() const;

 private:
  Lattice<Real> lattice_;
  Real tolerance_;
  std::array<complex_type, kMaxThetaTerms> coeffs_{};
  complex_type theta_d1_;
  complex_type theta_d3_;
  complex_type eta_a_;
  complex_type eta_b_;
  complex_type eta1_;
  complex_type eta2_;
  std::size_t series_terms_ = 0;
};

using EllipticContextd = EllipticContext<double>;

/// theta_1(v) for the nome of the context's reduced basis.
template <typename Real>
std::complex<Real> theta1(std::complex<Real> v, const EllipticContext<Real>& ctx) {
  if (!is_finite(v)) throw InputError("theta1: non-finite argument");
  return detail::theta_series(v, ctx.coefficients(), ctx.tolerance()).value;
}

template <typename Real>
std::complex<Real> theta1_prime(std::complex<Real> v, const EllipticContext<Real>& ctx) {
  if (!is_finite(v)) throw InputError("theta1_prime: non-finite argument");
  return detail::theta_series(v, ctx.coefficients(), ctx.tolerance()).derivative;
}

template <typename Real>
std::complex<Real> theta1_prime_zero(const EllipticContext<Real>& ctx) {
  return ctx.theta1_prime_zero();
}

template <typename Real>
std::complex<Real> theta1_third_zero(const EllipticContext<Real>& ctx) {
  return ctx.theta1_third_zero();
}

namespace detail {

// Everything needed for sigma(z) in log form:
//   log sigma(z) = log_scale + exponent + log theta1(v) + i*pi*parity
template <typename Real>
struct SigmaParts {
  std::complex<Real> folded;
  std::complex<Real> exponent;
  ThetaValue<Real> theta;
  bool negate = false;
};

template <typename Real>
SigmaParts<Real> sigma_parts(std::complex<Real> z, const EllipticContext<Real>& ctx) {
  using C = std::complex<Real>;
  const auto f = ctx.lattice().fold(z);
  const C a = ctx.reduced_period();
  const auto [ra, rb] = ctx.lattice().reduced_basis();
  const C w = Real(f.m) * ra + Real(f.n) * rb;
  const C eta_w = ctx.eta_of(f.m, f.n);
  const C z0 = f.point;
  // Translation factor: sigma(z0 + w) = (-1)^{m+n+mn} exp(eta_w (z0 + w/2)) sigma(z0)
  const C exponent = ctx.eta_a() * z0 * z0 / (Real(2) * a) + eta_w * (z0 + w / Real(2));
  const C v = std::numbers::pi_v<Real> * z0 / a;
  const auto parity = (f.m + f.n + f.m * f.n) & 1;
  return {z0, exponent, theta_series(v, ctx.coefficients(), ctx.tolerance()),
          parity != 0};
}

}  // namespace detail

/// Weierstrass sigma function. Throws Overflow when the Gaussian factor leaves
/// the floating-point range; log_abs_sigma handles those arguments.
template <typename Real>
std::complex<Real> sigma(std::complex<Real> z, const EllipticContext<Real>& ctx) {
  using C = std::complex<Real>;
  if (!is_finite(z)) throw InputError("sigma: non-finite argument");
  const auto parts = detail::sigma_parts(z, ctx);
  const C scale = ctx.reduced_period() / (std::numbers::pi_v<Real> * ctx.theta1_prime_zero());
  const Real log_limit = std::log(std::numeric_limits<Real>::max()) - Real(1);
  const Real log_mag = parts.exponent.real() + std::log(std::abs(scale)) +
                       std::log(std::max(std::abs(parts.theta.value),
                                         std::numeric_limits<Real>::min()));
  if (log_mag > log_limit) {
    throw Overflow("|sigma(z)| exceeds the floating-point range");
  }
  C result = scale * parts.theta.value * std::exp(parts.exponent);
  return parts.negate ? -result : result;
}

/// log|sigma(z)|, accumulated in log space so it never overflows.
template <typename Real>
Real log_abs_sigma(std::complex<Real> z, const EllipticContext<Real>& ctx) {
  if (!is_finite(z)) throw InputError("log_abs_sigma: non-finite argument");
  const auto parts = detail::sigma_parts(z, ctx);
  if (std::abs(parts.folded) <= ctx.singular_radius()) {
    throw SingularPoint("log|sigma| evaluated at a lattice point");
  }
  const Real log_scale =
      std::log(std::abs(ctx.reduced_period())) - std::log(std::numbers::pi_v<Real>) -
      std::log(std::abs(ctx.theta1_prime_zero()));
  return log_scale + parts.exponent.real() + std::log(std::abs(parts.theta.value));
}

/// Weierstrass zeta function, sigma'(z)/sigma(z).
template <typename Real>
std::complex<Real> weier_zeta(std::complex<Real> z, const EllipticContext<Real>& ctx) {
  using C = std::complex<Real>;
  if (!is_finite(z)) throw InputError("weier_zeta: non-finite argument");
  const auto f = ctx.lattice().fold(z);
  if (std::abs(f.point) <= ctx.singular_radius()) {
    throw SingularPoint("zeta evaluated at a lattice point");
  }
  const C a = ctx.reduced_period();
  const C v = std::numbers::pi_v<Real> * f.point / a;
  const auto th = detail::theta_series(v, ctx.coefficients(), ctx.tolerance());
  return ctx.eta_a() * f.point / a + (std::numbers::pi_v<Real> / a) * th.derivative / th.value +
         ctx.eta_of(f.m, f.n);
}

/// (eta1, eta2) for the caller's basis of the lattice.
template <typename Real>
std::pair<std::complex<Real>, std::complex<Real>> quasi_period_constants(
    const Lattice<Real>& lattice) {
  const EllipticContext<Real> ctx(lattice);
  return {ctx.eta1(), ctx.eta2()};
}

template <typename Real>
EllipticContext<Real>::EllipticContext(Lattice<Real> lattice, Real tolerance)
    : lattice_(std::move(lattice)), tolerance_(tolerance) {
  using C = complex_type;
  constexpr Real pi = std::numbers::pi_v<Real>;
  if (!(tolerance > Real(0)) || !std::isfinite(tolerance)) {
    throw InputError("EllipticContext: tolerance must be positive");
  }
  const auto [a, b] = lattice_.reduced_basis();
  coeffs_ = detail::theta_coefficients(b / a);

  C d1(0), d3(0);
  for (std::size_t n = 0; n < kMaxThetaTerms; ++n) {
    const Real k = Real(2 * n + 1);
    d1 += coeffs_[n] * k;
    d3 -= coeffs_[n] * (k * k * k);
  }
  theta_d1_ = Real(2) * d1;
  theta_d3_ = Real(2) * d3;

  eta_a_ = -pi * pi * theta_d3_ / (Real(3) * a * theta_d1_);
  // Legendre relation on the reduced basis, which is positively oriented.
  eta_b_ = (eta_a_ * b - C(0, 2 * pi)) / a;
  std::tie(eta1_, eta2_) = lattice_.to_caller_basis(eta_a_, eta_b_);

  const C corner = pi * (a + b) / (Real(2) * a);
  series_terms_ = detail::theta_series(corner, coeffs_, tolerance_).terms;

  if (legendre_residual() > Real(1e3) * std::numeric_limits<Real>::epsilon()) {
    throw NumericalError("EllipticContext: Legendre relation self-check failed");
  }
  // Quasi-periodicity self-check at two interior points of the caller's cell.
  const C w1 = lattice_.omega1();
  const C w2 = lattice_.omega2();
  for (const C probe : {Real(0.23) * w1 + Real(0.31) * w2, Real(-0.37) * w1 + Real(0.12) * w2}) {
    for (const auto& [w, eta] : {std::pair{w1, eta1_}, std::pair{w2, eta2_}}) {
      const Real lhs = log_abs_sigma(probe + w, *this);
      const Real rhs = log_abs_sigma(probe, *this) + (eta * (probe + w / Real(2))).real();
      if (std::abs(lhs - rhs) > Real(1e4) * tolerance_ * (Real(1) + std::abs(lhs))) {
        throw NumericalError("EllipticContext: quasi-periodicity self-check failed");
      }
    }
  }
}

template <typename Real>
Real EllipticContext<Real>::legendre_residual() const {
  const complex_type w1 = lattice_.omega1();
  const complex_type w2 = lattice_.omega2();
  const complex_type two_pi_i(0, 2 * std::numbers::pi_v<Real>);
  const Real scale = std::abs(eta1_ * w2) + std::abs(eta2_ * w1) + 2 * std::numbers::pi_v<Real>;
  return std::abs(eta1_ * w2 - eta2_ * w1 - two_pi_i) / scale;
}

}  // namespace ellipt
