#include "latharm/symbol.hpp"

#include "latharm/fourier.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

using namespace latharm;
using namespace latharm::symbols;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("riesz symbol closed form in d=1") {
  const Symbol psi = riesz(1, 1);
  // psi(xi) = exp(-i pi xi) sin(pi xi) / (2 |sin(pi xi)|)
  for (double xi : {0.1, 0.3, 0.5}) {
    const Complex expected = std::exp(Complex(0, -kPi * xi)) * 0.5;
    CHECK(std::abs(psi(xi_point(xi)) - expected) <= 1e-14);
  }
  for (double xi : {-0.1, -0.45}) {
    const Complex expected = -std::exp(Complex(0, -kPi * xi)) * 0.5;
    CHECK(std::abs(psi(xi_point(xi)) - expected) <= 1e-14);
  }
  // |psi| = 1/2 off the origin, 0 at the origin (assigned value)
  CHECK(std::abs(psi(xi_point(0.237))) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(psi(xi_point(0.0)) == Complex(0, 0));
  REQUIRE(psi.singular_points().size() == 1);
  CHECK(psi.singular_points()[0].value == Complex(0, 0));
}

TEST_CASE("riesz symbols square-sum to 1/4") {
  for (int d = 1; d <= 3; ++d) {
    RVector xi(d);
    for (int j = 0; j < d; ++j) xi[j] = 0.05 + 0.11 * (j + 1);
    double total = 0.0;
    for (int j = 1; j <= d; ++j) total += std::norm(riesz(j, d)(xi));
    CHECK(total == doctest::Approx(0.25).epsilon(1e-13));
  }
}

TEST_CASE("laplacian symbol and periodicity") {
  const Symbol m = laplacian(1);
  CHECK(std::abs(m(xi_point(0.5)) - Complex(-4, 0)) <= 1e-14);
  CHECK(std::abs(m(xi_point(0.25)) - Complex(-2, 0)) <= 1e-14);
  CHECK(std::abs(m(xi_point(1.25)) - m(xi_point(0.25))) <= 1e-14);
  const Symbol m3 = laplacian(3);
  const RVector xi = xi_point(0.1, 0.2, 0.3);
  double expected = 0.0;
  for (int j = 0; j < 3; ++j) expected -= 4.0 * std::pow(std::sin(kPi * xi[j]), 2);
  CHECK(std::abs(m3(xi) - Complex(expected, 0)) <= 1e-13);
}

TEST_CASE("exponential symbol is the lattice character") {
  const Symbol m = exponential(point(3, -2));
  const RVector xi = xi_point(0.15, 0.4);
  const double phase = 2.0 * kPi * (3 * 0.15 + (-2) * 0.4);
  CHECK(std::abs(m(xi) - std::exp(Complex(0, phase))) <= 1e-14);
}

TEST_CASE("imaginary_power is unimodular with value 1 at the origin") {
  const Symbol m = imaginary_power(0.7, 2);
  CHECK(m(xi_point(0.0, 0.0)) == Complex(1, 0));
  for (double x : {0.1, 0.33, 0.5}) {
    CHECK(std::abs(std::abs(m(xi_point(x, -x))) - 1.0) <= 1e-13);
  }
  // (4 sum sin^2)^(it) at a point where the base is 1: xi = (1/6, 1/6) gives
  // 4(1/4 + 1/4) = 2, so m = 2^(0.7 i) = exp(0.7 i ln 2).
  const Complex expected = std::exp(Complex(0, 0.7 * std::log(2.0)));
  CHECK(std::abs(m(xi_point(1.0 / 6.0, 1.0 / 6.0)) - expected) <= 1e-13);
}

TEST_CASE("wave symbols: values at the origin and the circle identity") {
  const double t = 1.7;
  CHECK(std::abs(wave_cos(t, 2)(xi_point(0, 0)) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(wave_sinc(t, 2)(xi_point(0, 0)) - Complex(t, 0)) <= 1e-14);
  CHECK(wave_sin_phi(t, 2)(xi_point(0, 0)) == Complex(0, 0));
  // cos^2(t phi) + (phi sin(t phi)) * (sin(t phi)/phi) = 1 for phi != 0
  const RVector xi = xi_point(0.21, -0.34);
  const Complex c = wave_cos(t, 2)(xi);
  const Complex s1 = wave_sinc(t, 2)(xi);
  const Complex s2 = wave_sin_phi(t, 2)(xi);
  CHECK(std::abs(c * c + s1 * s2 - Complex(1, 0)) <= 1e-13);
}

TEST_CASE("negative_power magnitude and assigned origin value") {
  const Symbol m = negative_power(1.5, 2);
  CHECK(m(xi_point(0, 0)) == Complex(0, 0));
  const RVector xi = xi_point(0.3, -0.4);  // |xi| = 0.5
  CHECK(std::abs(m(xi) - Complex(std::pow(0.5, -1.5), 0)) <= 1e-12);
}

TEST_CASE("interval_indicator is half-open in u = xi mod 1") {
  const Symbol m = interval_indicator(0.25, 0.75);
  CHECK(m(xi_point(0.25)) == Complex(1, 0));   // left endpoint included
  CHECK(m(xi_point(0.5)) == Complex(1, 0));
  CHECK(m(xi_point(-0.25)) == Complex(0, 0));  // u = 0.75: right endpoint out
  CHECK(m(xi_point(-0.3)) == Complex(1, 0));   // u = 0.7
  CHECK(m(xi_point(0.0)) == Complex(0, 0));
  CHECK(m(xi_point(1.3)) == m(xi_point(0.3)));
  CHECK_THROWS_AS(interval_indicator(0.7, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(interval_indicator(-0.1, 0.5), std::invalid_argument);
}

TEST_CASE("rescaled_interval composes the inner symbol with the chart") {
  const Symbol inner = laplacian(1);
  const Symbol m = rescaled_interval(0.25, 0.75, inner);
  // at u = 0.5 the chart reads inner(0.25 + 0.5*0.5) = inner(0.5) = -4
  CHECK(std::abs(m(xi_point(0.5)) - Complex(-4, 0)) <= 1e-13);
  // at u = 0.25: inner(0.375)
  CHECK(std::abs(m(xi_point(0.25)) - inner(xi_point(0.375))) <= 1e-13);
}

TEST_CASE("notch vanishes on its slot and is 1 outside twice the slot") {
  const Symbol m = notch(0.5, 0.1);
  CHECK(m(xi_point(0.5)) == Complex(0, 0));
  CHECK(m(xi_point(0.42)) == Complex(0, 0));   // |u - a| <= eps
  CHECK(m(xi_point(0.3)) == Complex(1, 0));    // |u - a| >= 2 eps
  CHECK(m(xi_point(0.7)) == Complex(1, 0));
  const Complex mid = m(xi_point(0.35));       // halfway up the shoulder
  CHECK(mid.real() > 0.0);
  CHECK(mid.real() < 1.0);
  CHECK(mid.imag() == 0.0);
  CHECK(m(xi_point(0.65)) == mid);             // even around the center
}

TEST_CASE("dyadic_shell and low_pass cutoffs") {
  // low_pass = chi(16 |xi|): 1 where 16|xi| <= 1/2, 0 where 16|xi| >= 1
  const Symbol lp = low_pass(1);
  CHECK(lp(xi_point(0.01)) == Complex(1, 0));
  CHECK(lp(xi_point(0.2)) == Complex(0, 0));
  // shell j: supported where 2^j |xi| lies in the open annulus (1/2, 2)
  const Symbol sh = dyadic_shell(3, 1);
  CHECK(std::abs(sh(xi_point(0.1))) > 0.0);
  CHECK(sh(xi_point(1.0 / 8.0)) == Complex(1, 0));
  CHECK(std::abs(sh(xi_point(1.0 / 16.0))) == 0.0);
  CHECK(std::abs(sh(xi_point(0.5))) == 0.0);
  CHECK(std::abs(sh(xi_point(0.001))) == 0.0);
}

TEST_CASE("sum and product combinators") {
  const Symbol a = exponential(point(1));
  const Symbol b = exponential(point(-1));
  const Symbol s = sum(a, b);
  const Symbol p = product(a, b);
  const RVector xi = xi_point(0.3);
  CHECK(std::abs(s(xi) - Complex(2.0 * std::cos(2.0 * kPi * 0.3), 0)) <= 1e-13);
  CHECK(std::abs(p(xi) - Complex(1, 0)) <= 1e-13);
  CHECK_THROWS_AS(sum(exponential(point(1)), exponential(point(1, 1))), std::invalid_argument);
}

TEST_CASE("hermitian flags track real kernels") {
  CHECK(laplacian(2).is_hermitian());
  CHECK(wave_cos(1.0, 1).is_hermitian());
  CHECK(negative_power(1.0, 2).is_hermitian());
  CHECK_FALSE(riesz(1, 1).is_hermitian());
  CHECK(exponential(point(2)).is_hermitian());  // its kernel delta_2 is real
  CHECK(sum(laplacian(1), wave_cos(1.0, 1)).is_hermitian());
  CHECK_FALSE(sum(laplacian(1), riesz(1, 1)).is_hermitian());
}

TEST_CASE("sampled_table reproduces its samples at grid points") {
  const TorusGrid grid = TorusGrid::uniform(1, 64);
  const TorusSamples samples = sample_symbol(wave_cos(1.0, 1), grid);
  const Symbol table = sampled_table(samples, "wavecos-table");
  CHECK(table.tag() == "wavecos-table");
  RVector xi(1);
  for (Index i = 0; i < grid.cardinality(); ++i) {
    grid.point_at(i, xi);
    CHECK(std::abs(table(xi) - samples.values()[i]) <= 1e-14);
  }
}

TEST_CASE("sample_symbol lays values out in grid order") {
  const TorusGrid grid = TorusGrid::uniform(2, 6);
  const TorusSamples s = sample_symbol(laplacian(2), grid);
  RVector xi(2);
  for (Index i = 0; i < grid.cardinality(); i += 7) {
    grid.point_at(i, xi);
    CHECK(std::abs(s.values()[i] - laplacian(2)(xi)) <= 1e-14);
  }
}

TEST_CASE("subdivision_partition returns a partition of unity") {
  const std::vector<Symbol> pieces = subdivision_partition({0.3, 0.7}, 0.05);
  REQUIRE(pieces.size() == 3);
  for (double u : {0.05, 0.28, 0.3, 0.33, 0.5, 0.68, 0.72, 0.95}) {
    Complex total(0, 0);
    for (const Symbol& piece : pieces) total += piece(xi_point(u));
    CHECK(std::abs(total - Complex(1, 0)) <= 1e-13);
  }
  // at a cut point the average piece reads (J-1)/J and the local piece takes
  // the rest; local pieces vanish at the other cut points
  CHECK(std::abs(pieces[0](xi_point(0.3)) - Complex(0.5, 0)) <= 1e-13);
  CHECK(std::abs(pieces[1](xi_point(0.3)) - Complex(0.5, 0)) <= 1e-13);
  CHECK(std::abs(pieces[1](xi_point(0.7))) <= 1e-15);
  CHECK(std::abs(pieces[2](xi_point(0.7)) - Complex(0.5, 0)) <= 1e-13);
  CHECK(std::abs(pieces[0](xi_point(0.5)) - Complex(1.0, 0)) <= 1e-13);

  CHECK_THROWS_AS(subdivision_partition({0.7, 0.3}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(subdivision_partition({0.05}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(subdivision_partition({0.3, 0.32}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(subdivision_partition({}, 0.05), std::invalid_argument);
}

TEST_CASE("symbols reduce their argument to the fundamental domain") {
  const Symbol m = riesz(1, 2);
  const RVector a = xi_point(0.3, -0.4);
  const RVector b = xi_point(1.3, 0.6);  // same point on the torus
  CHECK(std::abs(m(a) - m(b)) <= 1e-13);
}

TEST_CASE("symbol dimension mismatches are rejected") {
  CHECK_THROWS_AS(riesz(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(riesz(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(laplacian(4), std::invalid_argument);
  const Symbol m = laplacian(2);
  CHECK_THROWS_AS(m(xi_point(0.3)), std::invalid_argument);
}
