#include "latharm/lattice.hpp"

#include "latharm/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

using namespace latharm;

namespace {

GridFunction random_function(detail::Rng& rng, const LatticeBox& box) {
  CVector v(box.cardinality());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
  return GridFunction(box, std::move(v));
}

}  // namespace

TEST_CASE("Lp validates and exposes exponents") {
  CHECK(Lp(1.0).value() == 1.0);
  CHECK(Lp(2.5).value() == 2.5);
  CHECK(Lp::infinity().is_infinite());
  CHECK_FALSE(Lp(3.0).is_infinite());
  CHECK_THROWS_AS(Lp(0.5), std::invalid_argument);
  CHECK_THROWS_AS(Lp(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Lp(-2.0), std::invalid_argument);
  CHECK_THROWS_AS(Lp(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(Lp::infinity().value(), std::logic_error);
}

TEST_CASE("Lp conjugate pairs") {
  CHECK(Lp(2.0).conjugate() == Lp(2.0));
  CHECK(Lp(1.0).conjugate() == Lp::infinity());
  CHECK(Lp::infinity().conjugate() == Lp(1.0));
  CHECK(Lp(4.0 / 3.0).conjugate().value() == doctest::Approx(4.0).epsilon(1e-14));
  // conjugation is an involution
  CHECK(Lp(1.7).conjugate().conjugate().value() == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("LatticeBox enumeration is row-major with axis 0 slowest") {
  const LatticeBox box(point(0, -1), point(1, 1));
  REQUIRE(box.cardinality() == 6);
  const int expected[6][2] = {{0, -1}, {0, 0}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};
  for (Index i = 0; i < 6; ++i) {
    const IVector n = box.point_at(i);
    CHECK(n[0] == expected[i][0]);
    CHECK(n[1] == expected[i][1]);
    CHECK(box.index_of(n) == i);
  }
}

TEST_CASE("LatticeBox index round trip in d=3") {
  const LatticeBox box(point(-2, 0, 1), point(1, 2, 3));
  IVector n(3);
  for (Index i = 0; i < box.cardinality(); ++i) {
    box.point_at(i, n);
    CHECK(box.contains(n));
    CHECK(box.index_of(n) == i);
  }
}

TEST_CASE("LatticeBox geometry helpers") {
  const LatticeBox box(point(-2, 1), point(3, 4));
  CHECK(box.dim() == 2);
  CHECK(box.extent(0) == 6);
  CHECK(box.extent(1) == 4);
  CHECK_FALSE(box.is_centered());
  CHECK(box.max_radius() == 4);

  const LatticeBox moved = box.shifted(point(1, -1));
  CHECK(moved.lo(0) == -1);
  CHECK(moved.hi(1) == 3);

  const LatticeBox grown = box.dilated(2);
  CHECK(grown.lo(0) == -4);
  CHECK(grown.hi(0) == 5);

  const LatticeBox other(point(0, -5), point(0, 0));
  const LatticeBox h = LatticeBox::hull(box, other);
  CHECK(h.lo(0) == -2);
  CHECK(h.hi(0) == 3);
  CHECK(h.lo(1) == -5);
  CHECK(h.hi(1) == 4);

  const LatticeBox c = LatticeBox::centered(2, 3);
  CHECK(c.is_centered());
  CHECK(c.radius(0) == 3);
  CHECK(c.cardinality() == 49);
}

TEST_CASE("LatticeBox rejects malformed corners") {
  CHECK_THROWS_AS(LatticeBox(point(1), point(0)), std::invalid_argument);
  IVector lo(2), hi(3);
  lo << 0, 0;
  hi << 1, 1, 1;
  CHECK_THROWS_AS(LatticeBox(lo, hi), std::invalid_argument);
}

TEST_CASE("GridFunction construction and value access") {
  const LatticeBox box(point(-1), point(1));
  CVector v(3);
  v << Complex(1, 0), Complex(0, 2), Complex(-3, 1);
  const GridFunction f(box, v);
  CHECK(f.value_at(point(-1)) == Complex(1, 0));
  CHECK(f.value_at(point(0)) == Complex(0, 2));
  CHECK(f.value_at(point(5)) == Complex(0, 0));  // off the box
  CHECK(f[2] == Complex(-3, 1));

  CVector bad(3);
  bad << Complex(1, 0), Complex(std::numeric_limits<double>::infinity(), 0), Complex(0, 0);
  CHECK_THROWS_AS(GridFunction(box, bad), std::invalid_argument);
  CVector wrong_size(2);
  wrong_size << Complex(1, 0), Complex(2, 0);
  CHECK_THROWS_AS(GridFunction(box, wrong_size), std::invalid_argument);
}

TEST_CASE("delta functions") {
  const GridFunction d2 = GridFunction::delta(2);
  CHECK(d2.box().cardinality() == 1);
  CHECK(d2.value_at(point(0, 0)) == Complex(1, 0));

  const GridFunction shifted = GridFunction::delta_at(point(2, -3));
  CHECK(shifted.value_at(point(2, -3)) == Complex(1, 0));
  CHECK(shifted.value_at(point(0, 0)) == Complex(0, 0));
}

TEST_CASE("lp_norm closed forms") {
  const LatticeBox box(point(0), point(1));
  CVector v(2);
  v << Complex(3, 0), Complex(0, 4);
  const GridFunction f(box, v);
  CHECK(lp_norm(f, Lp(2.0)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(lp_norm(f, Lp(1.0)) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(lp_norm(f, Lp::infinity()) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lp_norm(f, Lp(3.0)) == doctest::Approx(std::cbrt(27.0 + 64.0)).epsilon(1e-15));
}

TEST_CASE("translate shifts support and preserves values") {
  detail::Rng rng(7);
  const GridFunction f = random_function(rng, LatticeBox(point(-2, 0), point(1, 2)));
  const IVector by = point(3, -4);
  const GridFunction g = translate(f, by);
  CHECK(g.box().lo(0) == 1);
  CHECK(g.box().hi(1) == -2);
  IVector n(2);
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    f.box().point_at(i, n);
    CHECK(g.value_at((n + by).eval()) == f[i]);
  }
}

TEST_CASE("combine is the pointwise linear combination on the hull") {
  detail::Rng rng(8);
  const GridFunction f = random_function(rng, LatticeBox(point(-2), point(0)));
  const GridFunction g = random_function(rng, LatticeBox(point(1), point(3)));
  const Complex a(2.0, -1.0), b(0.5, 0.5);
  const GridFunction h = combine(a, f, b, g);
  CHECK(h.box().lo(0) == -2);
  CHECK(h.box().hi(0) == 3);
  for (int n = -3; n <= 4; ++n) {
    const Complex expected = a * f.value_at(point(n)) + b * g.value_at(point(n));
    CHECK(std::abs(h.value_at(point(n)) - expected) <= 1e-15);
  }
  CHECK_THROWS_AS(combine(a, f, b, GridFunction::delta(2)), std::invalid_argument);
}

TEST_CASE("restrict_to clips and zero-fills") {
  detail::Rng rng(9);
  const GridFunction f = random_function(rng, LatticeBox::centered(1, 2));
  const GridFunction r = restrict_to(f, LatticeBox(point(1), point(4)));
  CHECK(r.value_at(point(1)) == f.value_at(point(1)));
  CHECK(r.value_at(point(2)) == f.value_at(point(2)));
  CHECK(r.value_at(point(3)) == Complex(0, 0));
  CHECK(r.value_at(point(4)) == Complex(0, 0));
  CHECK(r.box().lo(0) == 1);
}

TEST_CASE("modulate multiplies by a unit character") {
  detail::Rng rng(10);
  const GridFunction f = random_function(rng, LatticeBox::centered(1, 3));
  const RVector alpha = xi_point(0.3);
  const GridFunction g = modulate(f, alpha);
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    const long n = f.box().point_at(i)[0];
    const double phase = 2.0 * std::numbers::pi * 0.3 * static_cast<double>(n);
    const Complex expected = f[i] * Complex(std::cos(phase), std::sin(phase));
    CHECK(std::abs(g[i] - expected) <= 1e-14);
  }
  // integer characters are trivial
  const GridFunction same = modulate(f, xi_point(1.0));
  CHECK(max_abs_difference(same, f) <= 1e-14);
}

TEST_CASE("inner_product and max_abs_difference") {
  const LatticeBox box(point(0), point(1));
  CVector v(2), w(2);
  v << Complex(1, 1), Complex(2, 0);
  w << Complex(0, 1), Complex(1, -1);
  const GridFunction f(box, v), g(box, w);
  // <f, g> = sum f conj(g) = (1+i)(-i) + 2(1+i) = (1 - i) + (2 + 2i)
  const Complex ip = inner_product(f, g);
  CHECK(std::abs(ip - Complex(3.0, 1.0)) <= 1e-15);

  const GridFunction h = GridFunction::delta_at(point(0));
  CHECK(max_abs_difference(f, f) == 0.0);
  CHECK(max_abs_difference(h, GridFunction::zero(LatticeBox::centered(1, 1))) == 1.0);
}

TEST_CASE("inner product against lp_norm") {
  detail::Rng rng(11);
  const GridFunction f = random_function(rng, LatticeBox::centered(2, 2));
  const double n2 = lp_norm(f, Lp(2.0));
  CHECK(std::sqrt(inner_product(f, f).real()) == doctest::Approx(n2).epsilon(1e-13));
  CHECK(std::abs(inner_product(f, f).imag()) <= 1e-13 * n2 * n2);
}
