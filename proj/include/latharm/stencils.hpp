#pragma once

#include "latharm/lattice.hpp"

#include <array>
#include <functional>

namespace latharm::detail {

/// Central finite-difference stencil for d^k/dx^k: weights at integer offsets
/// -reach..reach, to be divided by h^k. accuracy is the order of the
/// truncation error (2, 4, or 6).
struct Stencil {
  int reach;
  std::vector<double> weights;  // size 2*reach+1
};

const Stencil& central_stencil(int derivative, int accuracy);

// Mixed partial d^alpha f at a base point via tensor-product central stencils.
// sample(shift) must return f(base + h*shift) with shift.size() == dim.
Complex fd_partial(const std::function<Complex(const IVector&)>& sample,
                   const std::array<int, 3>& alpha, int dim, int accuracy, double h);

// Largest per-axis offset fd_partial will request for the given multi-index.
int fd_reach(const std::array<int, 3>& alpha, int accuracy);

}  // namespace latharm::detail
