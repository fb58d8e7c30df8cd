#include "latharm/multiplier.hpp"

#include <cmath>

namespace latharm {

long default_quadrature_cap(int dim) {
  switch (dim) {
    case 1: return 1L << 20;
    case 2: return 1L << 12;
    case 3: return 1L << 8;
    default: throw std::invalid_argument("default_quadrature_cap: dimension must be 1, 2 or 3");
  }
}

Complex KernelTable::value_at(const IVector& n) const {
  if (!box.contains(n)) return Complex(0.0, 0.0);
  return values[box.index_of(n)];
}

GridFunction KernelTable::as_grid_function() const { return GridFunction(box, values); }

namespace {

// Per-axis grid for the current doubling step: level 0 covers the operand
// extents (or the requested initial size), level k doubles everything k times.
TorusGrid doubling_grid(int dim, const IVector& needed, long initial, int level) {
  IVector sizes(dim);
  for (int i = 0; i < dim; ++i) {
    long base = TorusGrid::round_up_size(std::max<long>({needed[i], initial, 16}));
    sizes[i] = static_cast<int>(base << level);
  }
  return TorusGrid(dim, sizes);
}

long max_size(const TorusGrid& g) {
  long mx = 0;
  for (int i = 0; i < g.dim(); ++i) mx = std::max<long>(mx, g.size(i));
  return mx;
}

}  // namespace

KernelTable synthesize_kernel(const Symbol& m, const LatticeBox& box, double tol,
                              const QuadratureOptions& opts) {
  if (box.dim() != m.dim()) throw std::invalid_argument("synthesize_kernel: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("synthesize_kernel: tol must be positive");
  const int dim = m.dim();
  const long cap = opts.cap > 0 ? opts.cap : default_quadrature_cap(dim);

  IVector needed(dim);
  for (int i = 0; i < dim; ++i) needed[i] = box.extent(i);
  if (max_size(doubling_grid(dim, needed, opts.initial_size, 1)) > cap)
    throw std::invalid_argument(
        "synthesize_kernel: cap leaves no room for a doubling step; raise the cap");

  KernelTable table(m.tag(), box, tol);

  TorusGrid grid = doubling_grid(dim, needed, opts.initial_size, 0);
  GridFunction prev = inverse_dft(sample_symbol(m, grid), box);
  for (int level = 1;; ++level) {
    grid = doubling_grid(dim, needed, opts.initial_size, level);
    const GridFunction cur = inverse_dft(sample_symbol(m, grid), box);
    const double delta = (cur.values() - prev.values()).cwiseAbs().maxCoeff();
    table.doubling_deltas.push_back(delta);
    table.values = cur.values();
    table.quadrature_size = max_size(grid);
    table.aliasing_estimate = delta;
    if (delta <= tol) {
      table.converged = true;
      return table;
    }
    prev = cur;
    if (max_size(doubling_grid(dim, needed, opts.initial_size, level + 1)) > cap) {
      table.converged = false;
      if (opts.accept_at_cap) return table;
      throw ConvergenceFailure("synthesize_kernel: '" + m.tag() + "' did not reach tol " +
                                   std::to_string(tol) + " at cap " + std::to_string(cap) +
                                   " (achieved " + std::to_string(delta) + ")",
                               delta, tol, table.quadrature_size);
    }
  }
}

GridFunction apply_sampled(const TorusSamples& m_samples, const GridFunction& f,
                           const LatticeBox& window) {
  TorusSamples F = forward_dft(f, m_samples.grid());
  F.values().array() *= m_samples.values().array();
  return inverse_dft(F, window);
}

GridFunction apply_multiplier(const Symbol& m, const GridFunction& f, const LatticeBox& window,
                              double tol, const QuadratureOptions& opts) {
  if (f.dim() != m.dim() || window.dim() != m.dim())
    throw std::invalid_argument("apply_multiplier: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("apply_multiplier: tol must be positive");
  const int dim = m.dim();
  const long cap = opts.cap > 0 ? opts.cap : default_quadrature_cap(dim);

  IVector needed(dim);
  for (int i = 0; i < dim; ++i) needed[i] = std::max(f.box().extent(i), window.extent(i));
  if (max_size(doubling_grid(dim, needed, opts.initial_size, 1)) > cap)
    throw std::invalid_argument(
        "apply_multiplier: cap leaves no room for a doubling step; raise the cap");

  TorusGrid grid = doubling_grid(dim, needed, opts.initial_size, 0);
  GridFunction prev = apply_sampled(sample_symbol(m, grid), f, window);
  for (int level = 1;; ++level) {
    grid = doubling_grid(dim, needed, opts.initial_size, level);
    const GridFunction cur = apply_sampled(sample_symbol(m, grid), f, window);
    const double delta = (cur.values() - prev.values()).cwiseAbs().maxCoeff();
    if (delta <= tol) return cur;
    prev = cur;
    if (max_size(doubling_grid(dim, needed, opts.initial_size, level + 1)) > cap) {
      if (opts.accept_at_cap) return cur;
      throw ConvergenceFailure("apply_multiplier: '" + m.tag() + "' did not reach tol " +
                                   std::to_string(tol) + " at cap " + std::to_string(cap) +
                                   " (achieved " + std::to_string(delta) + ")",
                               delta, tol, max_size(grid));
    }
  }
}

GridFunction apply_kernel(const KernelTable& kernel, const GridFunction& f) {
  return convolve(kernel.as_grid_function(), f);
}

double multiplier_l2_norm(const Symbol& m, const GridFunction& f, double tol,
                          const QuadratureOptions& opts) {
  if (f.dim() != m.dim()) throw std::invalid_argument("multiplier_l2_norm: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("multiplier_l2_norm: tol must be positive");
  const int dim = m.dim();
  const long cap = opts.cap > 0 ? opts.cap : default_quadrature_cap(dim);

  IVector needed(dim);
  for (int i = 0; i < dim; ++i) needed[i] = f.box().extent(i);

  auto value_at = [&](const TorusGrid& grid) {
    TorusSamples F = forward_dft(f, grid);
    F.values().array() *= sample_symbol(m, grid).values().array();
    return torus_lp_norm(F, Lp(2.0));
  };

  TorusGrid grid = doubling_grid(dim, needed, opts.initial_size, 0);
  double prev = value_at(grid);
  for (int level = 1;; ++level) {
    grid = doubling_grid(dim, needed, opts.initial_size, level);
    const double cur = value_at(grid);
    const double delta = std::abs(cur - prev);
    if (delta <= tol * std::max(1.0, cur)) return cur;
    prev = cur;
    if (max_size(doubling_grid(dim, needed, opts.initial_size, level + 1)) > cap) {
      if (opts.accept_at_cap) return cur;
      throw ConvergenceFailure("multiplier_l2_norm: '" + m.tag() + "' did not reach tol " +
                                   std::to_string(tol) + " at cap " + std::to_string(cap) +
                                   " (achieved " + std::to_string(delta) + ")",
                               delta, tol, max_size(grid));
    }
  }
}

}  // namespace latharm
