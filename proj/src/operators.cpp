#include "latharm/operators.hpp"

namespace latharm {

namespace {

IVector unit(int dim, int j) {
  if (j < 1 || j > dim) throw std::invalid_argument("difference: axis j must be in 1..dim");
  IVector e = IVector::Zero(dim);
  e[j - 1] = 1;
  return e;
}

}  // namespace

GridFunction difference(const GridFunction& f, int j) {
  const IVector e = unit(f.dim(), j);
  return combine(1.0, translate(f, -e), -1.0, f);
}

GridFunction adjoint_difference(const GridFunction& f, int j) {
  const IVector e = unit(f.dim(), j);
  return combine(1.0, translate(f, e), -1.0, f);
}

GridFunction laplacian_stencil(const GridFunction& f) {
  GridFunction acc = combine(-2.0 * f.dim(), f, 0.0, f);
  for (int j = 1; j <= f.dim(); ++j) {
    const IVector e = unit(f.dim(), j);
    acc = combine(1.0, acc, 1.0, translate(f, e));
    acc = combine(1.0, acc, 1.0, translate(f, -e));
  }
  return acc;
}

GridFunction riesz_transform(int j, const GridFunction& f, const LatticeBox& window, double tol,
                             const QuadratureOptions& opts) {
  return apply_multiplier(symbols::riesz(j, f.dim()), f, window, tol, opts);
}

GridFunction imaginary_power_apply(double t, const GridFunction& f, const LatticeBox& window,
                                   double tol, const QuadratureOptions& opts) {
  return apply_multiplier(symbols::imaginary_power(t, f.dim()), f, window, tol, opts);
}

}  // namespace latharm
