#pragma once

#include "latharm/multiplier.hpp"

#include <cstdint>
#include <optional>

namespace latharm {

// Normalized distribution function d_m(s) = |{xi on the N-grid : |m(xi)| > s}|
// with the product quadrature measure.
double distribution_function(const Symbol& m, double s, long N);

/// Weak-type certificate: constant = max over a log-spaced ladder of
/// s^alpha * d_m(s). The ladder tops out where the grid still resolves the
/// super-level set (at least 256 samples above the cutoff), and the whole
/// measurement is repeated at 2N so drift is visible.
struct WeakLorentzReport {
  std::string symbol_tag;
  int dim = 0;
  double alpha = 0.0;
  long grid = 0;
  std::vector<double> s_ladder;
  std::vector<double> distribution;
  double constant = 0.0;
  double constant_refined = 0.0;  // same ladder evaluated on the 2N grid
};

WeakLorentzReport weak_lorentz_report(const Symbol& m, double alpha, long N);
double weak_lorentz_constant(const Symbol& m, double alpha, long N);

enum class DerivativeScheme { analytic, finite_difference };

/// Mikhlin-type certificate: constants[k] = sup over the sound part of the
/// grid of |xi|^k max_{|a|=k} |d^a m(xi)|, k = 0..max_order. Grid points
/// within stencil reach of a singular point or of the seam of the fundamental
/// domain are excluded and counted.
struct MikhlinReport {
  std::string symbol_tag;
  int dim = 0;
  int max_order = 0;
  long grid = 0;
  DerivativeScheme scheme = DerivativeScheme::analytic;
  std::vector<double> constants;
  std::vector<double> constants_refined;  // the 2N grid
  long excluded = 0;
};

std::vector<double> mikhlin_constants(const Symbol& m, int max_order, long N,
                                      DerivativeScheme scheme, long* excluded = nullptr);
MikhlinReport mikhlin_report(const Symbol& m, int max_order, long N, DerivativeScheme scheme);

// d=1 variant with the interval weight: sup (u(1-u))^k |m^(k)(u)| over the
// grid on (0,1), u = xi mod 1. Analytic derivative path.
std::vector<double> mikhlin_interval_constants(const Symbol& m, int max_order, long N);

// Max over the given points and all multi-indices 1 <= |a| <= max_order of
// the relative gap between analytic and finite-difference derivatives
// (fourth-order stencils, step scaled to the point). Points must stay off the
// singular set and away from the seam.
double derivative_paths_gap(const Symbol& m, int max_order, const std::vector<RVector>& points);

// sum over 2|s| <= |r| <= R of |K(r-s) - K(r)|, Euclidean norms. The kernel
// box must contain the ball of radius R + |s|.
double hormander_sum(const KernelTable& kernel, const IVector& s, int R);

// max of hormander_sum over 1 <= |s| <= shift_cap.
double hormander_constant(const KernelTable& kernel, int shift_cap, int R);

/// Pointwise decay certificate from a synthesized kernel:
/// c0 = max |K(n)| (1+|n|)^d, c1 = max |K(n+e_j) - K(n)| (1+|n|)^(d+1).
struct DecayConstants {
  double c0 = 0.0;
  double c1 = 0.0;
};

DecayConstants decay_constants(const KernelTable& kernel);

// Exact l2 -> l2 operator norm up to grid resolution: the grid max of |m|
// (values at listed singular points follow the symbol's conventions).
double operator_norm_l2(const Symbol& m, long N);

struct NormSearchOptions {
  std::uint64_t seed = 0x1a77a25eedULL;
  double tol = 1e-6;          // grid calibration tolerance (delta-probe drift)
  int power_iterations = 40;  // p = q = 2 refinement
  int ascent_sweeps = 2;      // coordinate ascent (boxes up to 256 points)
  long grid_cap = 0;          // 0 = default_quadrature_cap(dim)
};

/// Certified lower bound for ||T_m||_{p->q} from concrete test functions:
/// the ratio ||T_m f||_q(window) / ||f||_p is reported together with the
/// witness f that attained it, so the bound can be recomputed. For p = q = 2
/// the ratio is evaluated spectrally (no window truncation).
struct NormEstimate {
  NormEstimate(GridFunction witness, LatticeBox window)
      : witness(std::move(witness)), window(std::move(window)) {}

  std::string symbol_tag;
  std::string p, q;
  double lower_bound = 0.0;
  std::string method;  // which probe won: delta / random / ascent / power-iteration
  GridFunction witness;
  LatticeBox window;
  IVector grid_sizes;
  bool spectral = false;
  int trials = 0;
  std::uint64_t seed = 0;
};

NormEstimate operator_norm_lower_bound(const Symbol& m, const Lp& p, const Lp& q,
                                       const LatticeBox& box, int trials,
                                       const NormSearchOptions& opts = {});

// Recompute the ratio of an estimate's witness on its stored grid and window.
double norm_estimate_ratio(const Symbol& m, const NormEstimate& estimate);

}  // namespace latharm
