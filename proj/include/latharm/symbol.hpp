#pragma once

#include "latharm/fourier.hpp"
#include "latharm/jet.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace latharm {

/// Removable ambiguity of a symbol formula at an isolated point of the torus,
/// together with the value the library assigns there. Certifiers exclude these
/// points from derivative sweeps.
struct SingularPoint {
  RVector xi;
  Complex value;
};

/// A Fourier multiplier symbol m: T^d -> C. Evaluation reduces the argument to
/// the fundamental domain (-1/2, 1/2]^d, so symbols are 1-periodic by
/// construction. Immutable value type; copies share the payload.
class Symbol {
 public:
  using Eval = std::function<Complex(const RVector&)>;
  using DerivEval = std::function<Jet(const RVector&, int)>;

  Symbol(std::string tag, int dim, bool hermitian, Eval eval, DerivEval derivs,
         std::vector<SingularPoint> singular);

  int dim() const;
  const std::string& tag() const;
  // True when conj(m(-xi)) == m(xi), i.e. the kernel is real.
  bool is_hermitian() const;
  bool has_derivatives() const;
  const std::vector<SingularPoint>& singular_points() const;

  Complex operator()(const RVector& xi) const;

  // Taylor jet of m at xi up to total degree `order` (<= 4). Requires
  // has_derivatives(); the caller must keep xi away from singular_points()
  // and from the seam of the fundamental domain.
  Jet derivatives(const RVector& xi, int order) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

namespace symbols {

Symbol constant(Complex c, int dim);
// exp(2 pi i k.xi); its kernel is the unit mass at k.
Symbol exponential(const IVector& k);
// psi_j(xi) = exp(-i pi xi_j) sin(pi xi_j) / (2 sqrt(sum_k sin^2(pi xi_k))),
// j 1-based. Value 0 at xi = 0.
Symbol riesz(int j, int dim);
// -4 sum_j sin^2(pi xi_j), the symbol of the discrete Laplacian.
Symbol laplacian(int dim);
// (4 sum_j sin^2(pi xi_j))^(i t). Value 1 at xi = 0.
Symbol imaginary_power(double t, int dim);
// cos(t phi) with phi = 2 sqrt(sum sin^2(pi xi_j)). Value 1 at xi = 0.
Symbol wave_cos(double t, int dim);
// sin(t phi)/phi. Value t at xi = 0.
Symbol wave_sinc(double t, int dim);
// phi sin(t phi). Value 0 at xi = 0.
Symbol wave_sin_phi(double t, int dim);
// |xi|^(-r) with |.| the Euclidean norm on the fundamental domain, r > 0.
// Value 0 at xi = 0.
Symbol negative_power(double r, int dim);
// d=1 indicator of [a, b) in the coordinate u = xi mod 1 in [0, 1).
Symbol interval_indicator(double a, double b);
// d=1: m~(xi) = inner(a + (b-a) u), u = xi mod 1 in [0, 1).
Symbol rescaled_interval(double a, double b, const Symbol& inner);
// Nearest-sample interpolant of a sampled symbol; derivative queries use
// central differences with step equal to the table's grid spacing.
Symbol sampled_table(const TorusSamples& samples, std::string tag = "");
Symbol sum(const Symbol& a, const Symbol& b);
Symbol product(const Symbol& a, const Symbol& b);
// d=1 smooth cutoff vanishing on (a-eps, a+eps), identically 1 outside
// (a-2eps, a+2eps), in the coordinate u = xi mod 1.
Symbol notch(double a, double eps);
// phi(2^j |xi|) where phi(t) = chi(t) - chi(2t) is supported in [1/2, 2];
// the piece lives on the annulus 2^(-j-1) <= |xi| <= 2^(-j+1).
Symbol dyadic_shell(int j, int dim);
// chi(16 |xi|): 1 on |xi| <= 1/16, 0 on |xi| >= 1/8.
Symbol low_pass(int dim);

}  // namespace symbols

// C-infinity step: 0 for x <= 0, 1 for x >= 1, strictly increasing between.
double smooth_step(double x);

// Smooth partition of unity splitting the circle at interior points
// a_1 < ... < a_J of (0,1): J+1 pieces summing to exactly 1. Piece 0 is the
// average of the notches (equal to 1 away from every slot) and piece j is
// concentrated in the 2eps-slot around a_j. Requires eps > 0 and pairwise
// disjoint 2eps-intervals contained in (0,1).
std::vector<Symbol> subdivision_partition(const std::vector<double>& points, double eps);

// m sampled on `grid`.
TorusSamples sample_symbol(const Symbol& m, const TorusGrid& grid);

// Samples of the dyadic pieces m(xi) phi(2^j |xi|), j = 3..j_max.
std::vector<TorusSamples> dyadic_components(const Symbol& m, int j_max, const TorusGrid& grid);

}  // namespace latharm
