#include "latharm/fourier.hpp"

#include "latharm/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

using namespace latharm;

namespace {

GridFunction random_function(detail::Rng& rng, const LatticeBox& box) {
  CVector v(box.cardinality());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
  return GridFunction(box, std::move(v));
}

}  // namespace

TEST_CASE("round_up_size lands on 2^k or 3*2^k") {
  CHECK(TorusGrid::round_up_size(1) == 2);  // 2 is the smallest admissible size
  CHECK(TorusGrid::round_up_size(2) == 2);
  CHECK(TorusGrid::round_up_size(3) == 4);  // odd 3 is not itself admissible
  CHECK(TorusGrid::round_up_size(5) == 6);
  CHECK(TorusGrid::round_up_size(7) == 8);
  CHECK(TorusGrid::round_up_size(9) == 12);
  CHECK(TorusGrid::round_up_size(13) == 16);
  CHECK(TorusGrid::round_up_size(17) == 24);
  CHECK(TorusGrid::round_up_size(25) == 32);
  CHECK(TorusGrid::round_up_size(97) == 128);
  CHECK(TorusGrid::round_up_size(129) == 192);
  CHECK(TorusGrid::round_up_size(192) == 192);
  CHECK(TorusGrid::round_up_size(193) == 256);
}

TEST_CASE("fundamental_coordinate reduces to (-1/2, 1/2]") {
  CHECK(fundamental_coordinate(0.3) == doctest::Approx(0.3));
  CHECK(fundamental_coordinate(0.5) == doctest::Approx(0.5));
  CHECK(fundamental_coordinate(-0.5) == doctest::Approx(0.5));
  CHECK(fundamental_coordinate(0.75) == doctest::Approx(-0.25));
  CHECK(fundamental_coordinate(2.25) == doctest::Approx(0.25));
  CHECK(fundamental_coordinate(-1.1) == doctest::Approx(-0.1));
}

TEST_CASE("TorusGrid coordinates live in the fundamental domain") {
  const TorusGrid grid = TorusGrid::uniform(1, 8);
  // frequencies k/8 reduced: 0, 1/8, 1/4, 3/8, 1/2, -3/8, -1/4, -1/8
  const double expected[8] = {0.0, 0.125, 0.25, 0.375, 0.5, -0.375, -0.25, -0.125};
  for (int k = 0; k < 8; ++k) CHECK(grid.coord(0, k) == doctest::Approx(expected[k]));

  const TorusGrid g2 = TorusGrid::uniform(2, 4);
  CHECK(g2.cardinality() == 16);
  IVector k(2);
  RVector xi(2);
  for (Index i = 0; i < 16; ++i) {
    g2.indices_at(i, k);
    g2.point_at(i, xi);
    CHECK(xi[0] == doctest::Approx(g2.coord(0, k[0])));
    CHECK(xi[1] == doctest::Approx(g2.coord(1, k[1])));
    CHECK(xi[0] > -0.5);
    CHECK(xi[0] <= 0.5);
  }
}

TEST_CASE("transform_at uses the plus-sign character and is 1-periodic") {
  const GridFunction f = GridFunction::delta_at(point(1));
  // F f(xi) = exp(+2 pi i xi)
  const Complex at_quarter = transform_at(f, xi_point(0.25));
  CHECK(std::abs(at_quarter - Complex(0.0, 1.0)) <= 1e-15);
  const Complex shifted = transform_at(f, xi_point(1.25));
  CHECK(std::abs(shifted - at_quarter) <= 1e-12);
}

TEST_CASE("forward_dft matches direct summation") {
  detail::Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3;
    IVector lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
      lo[j] = static_cast<int>(rng.uniform_int(-3, 0));
      hi[j] = lo[j] + static_cast<int>(rng.uniform_int(0, 3));
    }
    const GridFunction f = random_function(rng, LatticeBox(lo, hi));
    long n = 1;
    for (int j = 0; j < d; ++j) n = std::max<long>(n, f.box().extent(j));
    const TorusGrid grid = TorusGrid::uniform(d, TorusGrid::round_up_size(n));
    const TorusSamples u = forward_dft(f, grid);
    RVector xi(d);
    double worst = 0.0;
    for (Index i = 0; i < grid.cardinality(); ++i) {
      grid.point_at(i, xi);
      worst = std::max(worst, std::abs(u.values()[i] - transform_at(f, xi)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("forward_dft rejects grids smaller than the support") {
  const GridFunction f = GridFunction::zero(LatticeBox::centered(2, 3));  // extent 7
  CHECK_THROWS_WITH_AS(static_cast<void>(forward_dft(f, TorusGrid::uniform(2, 4))),
                       doctest::Contains("axis"), std::invalid_argument);
}

TEST_CASE("inverse_dft recovers the function and zero-fills beyond it") {
  detail::Rng rng(22);
  const GridFunction f = random_function(rng, LatticeBox::centered(1, 3));
  const TorusSamples u = forward_dft(f, TorusGrid::uniform(1, 16));
  const GridFunction wide = inverse_dft(u, LatticeBox::centered(1, 6));
  CHECK(max_abs_difference(wide, f) <= 1e-13);
  CHECK(std::abs(wide.value_at(point(5))) <= 1e-13);
  CHECK_THROWS_AS(static_cast<void>(inverse_dft(u, LatticeBox::centered(1, 10))),
                  std::invalid_argument);
}

TEST_CASE("torus_lp_norm uses the normalized quadrature measure") {
  // F delta = 1, so every Lp norm is 1; delta_at(k) has |F| = 1 too.
  const TorusGrid grid = TorusGrid::uniform(1, 12);
  const TorusSamples u = forward_dft(GridFunction::delta(1), grid);
  CHECK(torus_lp_norm(u, Lp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(torus_lp_norm(u, Lp(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(torus_lp_norm(u, Lp::infinity()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("convolution of deltas adds their positions") {
  const GridFunction a = GridFunction::delta_at(point(2, -1));
  const GridFunction b = GridFunction::delta_at(point(-3, 4));
  const GridFunction c = convolve(a, b);
  CHECK(std::abs(c.value_at(point(-1, 3)) - Complex(1, 0)) <= 1e-13);
  CHECK(lp_norm(c, Lp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convolve agrees with the direct-summation oracle") {
  detail::Rng rng(23);
  for (int trial = 0; trial < 9; ++trial) {
    const int d = 1 + trial % 3;
    IVector lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
      lo[j] = static_cast<int>(rng.uniform_int(-2, 1));
      hi[j] = lo[j] + static_cast<int>(rng.uniform_int(0, 2));
    }
    const GridFunction f = random_function(rng, LatticeBox(lo, hi));
    const GridFunction g = random_function(rng, LatticeBox::centered(d, 2));
    const GridFunction fast = convolve(f, g);
    const GridFunction slow = convolve_direct(f, g);
    CHECK(fast.box() == slow.box());
    CHECK(max_abs_difference(fast, slow) <= 1e-12);
  }
}

TEST_CASE("convolution support is the Minkowski sum") {
  const GridFunction f = GridFunction::zero(LatticeBox(point(-1, 0), point(2, 1)));
  const GridFunction g = GridFunction::zero(LatticeBox(point(0, -2), point(1, 0)));
  const GridFunction h = convolve(f, g);
  CHECK(h.box().lo(0) == -1);
  CHECK(h.box().hi(0) == 3);
  CHECK(h.box().lo(1) == -2);
  CHECK(h.box().hi(1) == 1);
}

TEST_CASE("dft_nd matches a hand d=2 coefficient") {
  // data f(n0, n1) on a 2x2 block; check one output bin of the +sign DFT.
  CVector data(4);
  data << Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(2, 2);
  IVector sizes(2);
  sizes << 2, 2;
  CVector copy = data;
  detail::dft_nd(copy, sizes, +1);
  // bin (k0,k1)=(1,1): sum f(n) * exp(+pi i (n0+n1)) = f00 - f01 - f10 + f11
  const Complex expected = data[0] - data[1] - data[2] + data[3];
  CHECK(std::abs(copy[3] - expected) <= 1e-13);
}

TEST_CASE("forward and inverse dft are mutually inverse across grid sizes") {
  detail::Rng rng(24);
  const GridFunction f = random_function(rng, LatticeBox(point(-4), point(3)));
  for (long n : {8L, 12L, 64L}) {
    const GridFunction back = inverse_dft(forward_dft(f, TorusGrid::uniform(1, n)), f.box());
    CHECK(max_abs_difference(back, f) <= 1e-12);
  }
}
