#pragma once

#include "latharm/multiplier.hpp"

namespace latharm {

// (difference(f, j))(n) = f(n + e_j) - f(n); its Fourier symbol is
// exp(-2 pi i xi_j) - 1. Axis j is 1-based, matching psi_j.
GridFunction difference(const GridFunction& f, int j);

// (adjoint_difference(f, j))(n) = f(n - e_j) - f(n).
GridFunction adjoint_difference(const GridFunction& f, int j);

// Five/seven/nine-point discrete Laplacian: sum_j (f(n+e_j) + f(n-e_j)) - 2d f(n).
// Equals -sum_j adjoint_difference(difference(f, j), j) exactly.
GridFunction laplacian_stencil(const GridFunction& f);

// Discrete Riesz transform R_j = T_{psi_j} on a window.
GridFunction riesz_transform(int j, const GridFunction& f, const LatticeBox& window, double tol,
                             const QuadratureOptions& opts = {});

// (-Delta)^{it} f = T_{(4 sum sin^2)^{it}} f on a window.
GridFunction imaginary_power_apply(double t, const GridFunction& f, const LatticeBox& window,
                                   double tol, const QuadratureOptions& opts = {});

}  // namespace latharm
