#pragma once

// Independent reference computations used only by the tests. Nothing here
// touches the theta-series code path.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Weierstrass zeta from its Mittag-Leffler series, summed over the symmetric
// box |m|, |n| <= M. Odd powers of the tail cancel in a symmetric box, so the
// truncation error is dominated by z^3 * sum_{outside} w^-4.
inline cplx lattice_sum_zeta(cplx z, cplx w1, cplx w2, int M = 200) {
  cplx sum = 1.0 / z;
  for (int m = -M; m <= M; ++m) {
    for (int n = -M; n <= M; ++n) {
      if (m == 0 && n == 0) continue;
      const cplx w = double(m) * w1 + double(n) * w2;
      sum += 1.0 / (z - w) + 1.0 / w + z / (w * w);
    }
  }
  return sum;
}

// log|sigma(z)| from the Weierstrass product over the same symmetric box.
inline double lattice_product_log_abs_sigma(cplx z, cplx w1, cplx w2, int M = 200) {
  double sum = std::log(std::abs(z));
  for (int m = -M; m <= M; ++m) {
    for (int n = -M; n <= M; ++n) {
      if (m == 0 && n == 0) continue;
      const cplx w = double(m) * w1 + double(n) * w2;
      const cplx t = z / w;
      sum += std::log(std::abs(1.0 - t)) + (t + 0.5 * t * t).real();
    }
  }
  return sum;
}

// Both sums have a truncation tail proportional to 1/M^2; one Richardson
// step between M and M/2 removes it.
inline cplx extrapolated_zeta(cplx z, cplx w1, cplx w2, int M = 200) {
  return (4.0 * lattice_sum_zeta(z, w1, w2, M) - lattice_sum_zeta(z, w1, w2, M / 2)) / 3.0;
}

inline double extrapolated_log_abs_sigma(cplx z, cplx w1, cplx w2, int M = 200) {
  return (4.0 * lattice_product_log_abs_sigma(z, w1, w2, M) -
          lattice_product_log_abs_sigma(z, w1, w2, M / 2)) /
         3.0;
}

// theta_1 partial sum with a fixed number of terms, powers of q taken from tau.
inline cplx theta1_partial_sum(cplx v, cplx tau, int terms) {
  cplx sum = 0;
  for (int n = 0; n < terms; ++n) {
    const double h = n + 0.5;
    const cplx qpow = std::exp(cplx(0, pi) * tau * (h * h));
    sum += (n % 2 == 0 ? 1.0 : -1.0) * qpow * std::sin(double(2 * n + 1) * v);
  }
  return 2.0 * sum;
}

struct ReferenceLattice {
  std::string name;
  cplx omega1;
  cplx omega2;
};

// The four period pairs of the numerical examples, in units of r = 1.
inline std::vector<ReferenceLattice> reference_lattices() {
  const cplx i(0, 1);
  return {
      {"(4r,4ri)", 4.0, 4.0 * i},
      {"(4r,4re^{i pi/3})", 4.0, 4.0 * std::exp(i * pi / 3.0)},
      {"(4re^{i pi/6},4ri)", 4.0 * std::exp(i * pi / 6.0), 4.0 * i},
      {"(4r,4re^{i pi/4})", 4.0, 4.0 * std::exp(i * pi / 4.0)},
  };
}

// Uniform point in the parallelogram alpha*w1 + beta*w2, alpha, beta in [lo, hi).
inline cplx random_cell_point(std::mt19937_64& rng, cplx w1, cplx w2,
                              double lo = -0.5, double hi = 0.5) {
  std::uniform_real_distribution<double> d(lo, hi);
  const double a = d(rng);
  const double b = d(rng);
  return a * w1 + b * w2;
}

inline double rel_err(cplx a, cplx b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle
