#pragma once

#include "latharm/symbol.hpp"

namespace latharm {

/// Thrown when quadrature doubling hits the size cap before the requested
/// tolerance; carries what was achieved so callers can decide to accept.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, double achieved, double tol, long grid_size)
      : std::runtime_error(what), achieved(achieved), tol(tol), grid_size(grid_size) {}
  double achieved;
  double tol;
  long grid_size;
};

struct QuadratureOptions {
  long initial_size = 0;      // 0 = derived from the operand extents
  long cap = 0;               // 0 = default_quadrature_cap(dim)
  bool accept_at_cap = false; // return the cap iterate instead of throwing
};

// Largest per-axis quadrature size the doubling driver will try.
long default_quadrature_cap(int dim);

/// Truncated kernel K = F^{-1} m on a box, synthesized by rectangle-rule
/// quadrature with grid doubling. aliasing_estimate is the last doubling
/// difference (max over the box); doubling_deltas records the whole sequence.
struct KernelTable {
  KernelTable(std::string symbol_tag, LatticeBox box, double tol)
      : symbol_tag(std::move(symbol_tag)), box(std::move(box)), tol(tol) {}

  std::string symbol_tag;
  LatticeBox box;
  CVector values;
  long quadrature_size = 0;
  double aliasing_estimate = 0.0;
  double tol = 0.0;
  bool converged = true;
  std::vector<double> doubling_deltas;

  Complex value_at(const IVector& n) const;
  GridFunction as_grid_function() const;
};

KernelTable synthesize_kernel(const Symbol& m, const LatticeBox& box, double tol,
                              const QuadratureOptions& opts = {});

// T_m f on `window`, quadrature-doubled until the windowed sup change is
// within tol (or the cap is hit, per opts).
GridFunction apply_multiplier(const Symbol& m, const GridFunction& f, const LatticeBox& window,
                              double tol, const QuadratureOptions& opts = {});

// One-shot spectral application with fixed, already-sampled symbol values; no
// convergence control. Building block for norm searches and oracles.
GridFunction apply_sampled(const TorusSamples& m_samples, const GridFunction& f,
                           const LatticeBox& window);

// Truncated-kernel application K * f, exact on the full Minkowski sum box.
GridFunction apply_kernel(const KernelTable& kernel, const GridFunction& f);

// ||T_m f||_2 via Parseval on doubling grids (value-convergence within
// tol * max(1, value)).
double multiplier_l2_norm(const Symbol& m, const GridFunction& f, double tol,
                          const QuadratureOptions& opts = {});

}  // namespace latharm
