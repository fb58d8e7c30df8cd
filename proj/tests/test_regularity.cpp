#include "latharm/regularity.hpp"

#include "latharm/fourier.hpp"
#include "latharm/rng.hpp"

#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

using namespace latharm;
using namespace latharm::symbols;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("distribution_function of a constant symbol is a step") {
  const Symbol m = constant(Complex(2, 0), 1);
  CHECK(distribution_function(m, 1.0, 64) == doctest::Approx(1.0));
  CHECK(distribution_function(m, 2.0, 64) == doctest::Approx(0.0));  // strict inequality
  CHECK(distribution_function(m, 3.0, 64) == doctest::Approx(0.0));
  CHECK_THROWS_AS(distribution_function(m, -1.0, 64), std::invalid_argument);
}

TEST_CASE("weak-Lorentz constant of 1/|xi| in d=1 is the interval length coefficient") {
  // |{ |xi|^{-1} > s }| = 2/s for s > 2, so s * d(s) = 2 on the ladder top.
  const WeakLorentzReport rep = weak_lorentz_report(negative_power(1.0, 1), 1.0, 512);
  CHECK(rep.constant == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep.constant_refined == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep.grid == 512);
  CHECK(rep.alpha == 1.0);
  REQUIRE(rep.s_ladder.size() == rep.distribution.size());
  // the distribution function is non-increasing along the ladder
  for (std::size_t i = 1; i < rep.distribution.size(); ++i) {
    CHECK(rep.distribution[i] <= rep.distribution[i - 1] + 1e-15);
  }
}

TEST_CASE("mikhlin constants of the d=1 Riesz symbol") {
  // psi(u) = exp(-i pi u)/2 on (0,1), so |psi^(k)| = pi^k / 2 and the weighted
  // sup approaches (pi/2)^k / 2 at the seam (small exclusion margin).
  const std::vector<double> c = mikhlin_constants(riesz(1, 1), 3, 512,
                                                  DerivativeScheme::analytic);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-12));
  for (int k = 1; k <= 3; ++k) {
    CHECK(c[k] == doctest::Approx(0.5 * std::pow(kPi / 2.0, k)).epsilon(0.06));
    CHECK(c[k] <= 0.5 * std::pow(kPi / 2.0, k) * (1.0 + 1e-12));  // sup from below
  }
}

TEST_CASE("finite-difference scheme reproduces the analytic constants") {
  const std::vector<double> a = mikhlin_constants(riesz(1, 1), 2, 256,
                                                  DerivativeScheme::analytic);
  const std::vector<double> fd = mikhlin_constants(riesz(1, 1), 2, 256,
                                                   DerivativeScheme::finite_difference);
  REQUIRE(a.size() == fd.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(fd[k] == doctest::Approx(a[k]).epsilon(1e-6));
  }
}

TEST_CASE("mikhlin_report carries both grids and the exclusion count") {
  const MikhlinReport rep = mikhlin_report(riesz(1, 2), 2, 64, DerivativeScheme::analytic);
  CHECK(rep.grid == 64);
  CHECK(rep.max_order == 2);
  REQUIRE(rep.constants.size() == 3);
  REQUIRE(rep.constants_refined.size() == 3);
  CHECK(rep.excluded > 0);  // the singular origin and the seam
  CHECK(rep.constants[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("interval-weight constants of the d=1 Riesz symbol are exact") {
  // weight (u(1-u))^k peaks at u = 1/2 with value 4^{-k}; |psi^(k)| = pi^k/2.
  const std::vector<double> c = mikhlin_interval_constants(riesz(1, 1), 3, 512);
  REQUIRE(c.size() == 4);
  for (int k = 0; k <= 3; ++k) {
    CHECK(c[k] == doctest::Approx(0.5 * std::pow(kPi / 4.0, k)).epsilon(1e-10));
  }
}

TEST_CASE("derivative paths agree for smooth symbols") {
  std::vector<RVector> pts;
  for (double x : {0.31, -0.27, 0.11, 0.44}) pts.push_back(xi_point(x));
  CHECK(derivative_paths_gap(laplacian(1), 4, pts) <= 1e-6);
  CHECK(derivative_paths_gap(wave_cos(1.0, 1), 4, pts) <= 1e-6);
  CHECK(derivative_paths_gap(imaginary_power(0.5, 1), 4, pts) <= 1e-6);
}

TEST_CASE("hormander sums of a shifted delta kernel by enumeration") {
  // kernel of exp(k=3) is delta_3: differences contribute at r = s+3 and r = 3
  // whenever those radii clear the 2|s| cutoff.
  const KernelTable k = synthesize_kernel(exponential(point(3)), LatticeBox::centered(1, 72), 1e-12);
  CHECK(hormander_sum(k, point(1), 64) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(hormander_sum(k, point(2), 64) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(hormander_sum(k, point(-4), 64) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(hormander_constant(k, 8, 64) == doctest::Approx(2.0).epsilon(1e-10));
  // the kernel box must cover radius R + |s|
  CHECK_THROWS_AS(static_cast<void>(hormander_sum(k, point(1), 128)), std::invalid_argument);
}

TEST_CASE("hormander sum in d=2 with a vector shift") {
  const KernelTable k =
      synthesize_kernel(exponential(point(3, 0)), LatticeBox::centered(2, 24), 1e-12);
  IVector s(2);
  s << 1, 1;
  CHECK(hormander_sum(k, s, 16) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("decay constants of a shifted delta kernel") {
  const KernelTable k = synthesize_kernel(exponential(point(3)), LatticeBox::centered(1, 10), 1e-12);
  const DecayConstants c = decay_constants(k);
  CHECK(c.c0 == doctest::Approx(4.0).epsilon(1e-9));   // |K(3)| (1+3)^1
  CHECK(c.c1 == doctest::Approx(16.0).epsilon(1e-9));  // |K(4)-K(3)| (1+3)^2
}

TEST_CASE("operator_norm_l2 is the grid max of |m|") {
  CHECK(operator_norm_l2(interval_indicator(0.2, 0.7), 512) == doctest::Approx(1.0));
  CHECK(operator_norm_l2(laplacian(1), 512) == doctest::Approx(4.0));
  CHECK(operator_norm_l2(riesz(1, 1), 512) == doctest::Approx(0.5));
  CHECK(operator_norm_l2(constant(Complex(2, 1), 2), 64) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("l2 norm search matches the compressed-operator eigenvalue") {
  // Compress T_m to functions on a 7-point box; the exact squared norm is the
  // top eigenvalue of B[j,l] = sum_r conj(K(r-j)) K(r-l).
  const Symbol m = wave_cos(1.0, 1);
  const KernelTable k = synthesize_kernel(m, LatticeBox::centered(1, 44), 1e-12);
  const int radius = 3;
  const int n = 2 * radius + 1;
  Eigen::MatrixXcd b(n, n);
  for (int j = -radius; j <= radius; ++j) {
    for (int l = -radius; l <= radius; ++l) {
      Complex acc(0, 0);
      for (int r = -40; r <= 40; ++r) {
        acc += std::conj(k.value_at(point(r - j))) * k.value_at(point(r - l));
      }
      b(j + radius, l + radius) = acc;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(b);
  const double sigma = std::sqrt(eig.eigenvalues().maxCoeff());

  NormSearchOptions opts;
  opts.seed = 901;
  const NormEstimate est = operator_norm_lower_bound(m, Lp(2.0), Lp(2.0),
                                                     LatticeBox::centered(1, radius), 8, opts);
  CHECK(est.spectral);
  CHECK(est.lower_bound == doctest::Approx(sigma).epsilon(1e-3));
}

TEST_CASE("norm estimates can be recomputed from their witness") {
  NormSearchOptions opts;
  opts.seed = 902;
  opts.tol = 1e-3;
  const Symbol m = negative_power(0.5, 1);
  const NormEstimate est = operator_norm_lower_bound(m, Lp(4.0 / 3.0), Lp(4.0),
                                                     LatticeBox::centered(1, 4), 12, opts);
  CHECK(est.lower_bound > 0.0);
  CHECK_FALSE(est.spectral);
  CHECK(norm_estimate_ratio(m, est) == doctest::Approx(est.lower_bound).epsilon(1e-12));

  const NormEstimate spectral_est = operator_norm_lower_bound(
      riesz(1, 1), Lp(2.0), Lp(2.0), LatticeBox::centered(1, 4), 8, opts);
  CHECK(spectral_est.spectral);
  CHECK(norm_estimate_ratio(riesz(1, 1), spectral_est) ==
        doctest::Approx(spectral_est.lower_bound).epsilon(1e-12));
}

TEST_CASE("norm search is deterministic for a fixed seed") {
  NormSearchOptions opts;
  opts.seed = 903;
  opts.tol = 1e-3;
  const Symbol m = negative_power(1.0, 1);
  const NormEstimate a = operator_norm_lower_bound(m, Lp(4.0 / 3.0), Lp(4.0),
                                                   LatticeBox::centered(1, 6), 16, opts);
  const NormEstimate b = operator_norm_lower_bound(m, Lp(4.0 / 3.0), Lp(4.0),
                                                   LatticeBox::centered(1, 6), 16, opts);
  CHECK(a.lower_bound == b.lower_bound);
  CHECK(max_abs_difference(a.witness, b.witness) == 0.0);
  CHECK(a.method == b.method);
}
