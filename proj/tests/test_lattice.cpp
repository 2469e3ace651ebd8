#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ellipt/lattice.hpp"
#include "oracles.hpp"

using ellipt::Latticed;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

TEST_CASE("square lattice nome") {
  const auto lat = ellipt::make_lattice<double>(4.0, 4.0 * I);
  CHECK(std::abs(lat.tau() - I) < 1e-15);
  CHECK(std::abs(lat.nome() - std::exp(-pi)) < 1e-16);
  CHECK(lat.nome().real() == doctest::Approx(0.0432139).epsilon(1e-6));
}

TEST_CASE("hexagonal lattice tau") {
  const auto lat = ellipt::make_lattice<double>(4.0, 4.0 * std::exp(I * pi / 3.0));
  CHECK(std::abs(lat.tau() - std::exp(I * pi / 3.0)) < 1e-15);
  CHECK(lat.tau().imag() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("degenerate lattices are rejected") {
  CHECK_THROWS_AS(ellipt::make_lattice<double>(4.0, -4.0 * I), ellipt::DegenerateLattice);
  CHECK_THROWS_AS(ellipt::make_lattice<double>(4.0, 8.0), ellipt::DegenerateLattice);
  CHECK_THROWS_AS(ellipt::make_lattice<double>(0.0, 4.0 * I), ellipt::DegenerateLattice);
  CHECK_THROWS_AS(ellipt::make_lattice<double>(4.0, cplx(0, NAN)),
                  ellipt::DegenerateLattice);
  CHECK_THROWS_AS(ellipt::make_lattice<double>(cplx(INFINITY, 0), I),
                  ellipt::DegenerateLattice);
}

TEST_CASE("reduced basis is a unimodular image of the caller basis") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> k(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    // start from a reduced-ish pair and skew it with random unimodular moves
    cplx w1 = cplx(1.0 + std::abs(u(rng)), u(rng));
    cplx w2 = w1 * cplx(u(rng) / 6.0, 0.3 + std::abs(u(rng)));
    for (int s = 0; s < 3; ++s) w2 += double(k(rng)) * w1;
    const Latticed lat(w1, w2);
    const auto& c = lat.change_of_basis();
    CHECK(c[0][0] * c[1][1] - c[0][1] * c[1][0] == 1);
    const auto [a, b] = lat.reduced_basis();
    CHECK(std::abs(a - lat.point(c[0][0], c[0][1])) <= 1e-12 * std::abs(w2));
    CHECK(std::abs(b - lat.point(c[1][0], c[1][1])) <= 1e-12 * std::abs(w2));
    const cplx t = lat.reduced_tau();
    CHECK(t.imag() > 0.0);
    CHECK(std::abs(t.real()) <= 0.5 + 1e-12);
    CHECK(std::abs(t) >= 1.0 - 1e-12);
    CHECK(t.imag() >= lat.tau().imag() - 1e-12);
    CHECK(std::abs(lat.reduced_nome()) <= std::exp(-pi * std::sqrt(3.0) / 2.0) + 1e-12);
  }
}

TEST_CASE("skewed reference lattice reduces to the hexagonal modulus") {
  const Latticed lat(4.0 * std::exp(I * pi / 6.0), 4.0 * I);
  CHECK(lat.reduced_tau().imag() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(lat.min_distance() == doctest::Approx(4.0));
}

TEST_CASE("folding is idempotent and lands in the reduced cell") {
  std::mt19937_64 rng(11);
  for (const auto& pl : oracle::reference_lattices()) {
    const Latticed lat(pl.omega1, pl.omega2);
    for (int i = 0; i < 200; ++i) {
      const cplx z = oracle::random_cell_point(rng, pl.omega1, pl.omega2, -5.0, 5.0);
      const auto f = lat.fold(z);
      const auto [a, b] = lat.reduced_basis();
      CHECK(std::abs(z - (f.point + double(f.m) * a + double(f.n) * b)) <= 1e-13 * std::abs(z));
      const auto g = lat.fold(f.point);
      CHECK(g.m == 0);
      CHECK(g.n == 0);
      CHECK(std::abs(g.point - f.point) <= 1e-13 * std::max(1.0, std::abs(f.point)));
    }
  }
}

TEST_CASE("coordinates recover the caller basis expansion") {
  const Latticed lat(4.0, 4.0 * std::exp(I * pi / 4.0));
  const cplx z = 0.3 * lat.omega1() - 1.7 * lat.omega2();
  const auto [alpha, beta] = lat.coordinates(z);
  CHECK(alpha == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(beta == doctest::Approx(-1.7).epsilon(1e-14));
}
