#include "latharm/stencils.hpp"

#include <cmath>

namespace latharm::detail {

const Stencil& central_stencil(int derivative, int accuracy) {
  // Classical central-difference weights (Fornberg tables).
  static const Stencil o2[] = {
      {0, {1.0}},
      {1, {-0.5, 0.0, 0.5}},
      {1, {1.0, -2.0, 1.0}},
      {2, {-0.5, 1.0, 0.0, -1.0, 0.5}},
      {2, {1.0, -4.0, 6.0, -4.0, 1.0}},
  };
  static const Stencil o4[] = {
      {0, {1.0}},
      {2, {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12}},
      {2, {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12}},
      {3, {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8}},
      {3, {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6}},
  };
  static const Stencil o6[] = {
      {0, {1.0}},
      {3, {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60}},
      {3, {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90}},
      {4, {-7.0 / 240, 3.0 / 10, -169.0 / 120, 61.0 / 30, 0.0, -61.0 / 30, 169.0 / 120,
           -3.0 / 10, 7.0 / 240}},
      {4, {7.0 / 240, -2.0 / 5, 169.0 / 60, -122.0 / 15, 91.0 / 8, -122.0 / 15, 169.0 / 60,
           -2.0 / 5, 7.0 / 240}},
  };
  if (derivative < 0 || derivative > 4)
    throw std::invalid_argument("central_stencil: derivative order must be 0..4");
  if (accuracy == 2) return o2[derivative];
  if (accuracy == 4) return o4[derivative];
  if (accuracy == 6) return o6[derivative];
  throw std::invalid_argument("central_stencil: accuracy must be 2, 4, or 6");
}

Complex fd_partial(const std::function<Complex(const IVector&)>& sample,
                   const std::array<int, 3>& alpha, int dim, int accuracy, double h) {
  std::array<const Stencil*, 3> st{};
  int total = 0;
  for (int i = 0; i < dim; ++i) {
    st[i] = &central_stencil(alpha[i], accuracy);
    total += alpha[i];
  }
  IVector shift = IVector::Zero(dim);
  Complex acc(0.0, 0.0);
  // Tensor product over the (at most three) axis stencils.
  const int r0 = st[0]->reach;
  for (int s0 = -r0; s0 <= r0; ++s0) {
    const double w0 = st[0]->weights[s0 + r0];
    if (w0 == 0.0) continue;
    shift[0] = s0;
    if (dim == 1) {
      acc += w0 * sample(shift);
      continue;
    }
    const int r1 = st[1]->reach;
    for (int s1 = -r1; s1 <= r1; ++s1) {
      const double w1 = st[1]->weights[s1 + r1];
      if (w1 == 0.0) continue;
      shift[1] = s1;
      if (dim == 2) {
        acc += w0 * w1 * sample(shift);
        continue;
      }
      const int r2 = st[2]->reach;
      for (int s2 = -r2; s2 <= r2; ++s2) {
        const double w2 = st[2]->weights[s2 + r2];
        if (w2 == 0.0) continue;
        shift[2] = s2;
        acc += w0 * w1 * w2 * sample(shift);
      }
    }
  }
  return acc / std::pow(h, total);
}

int fd_reach(const std::array<int, 3>& alpha, int accuracy) {
  int r = 0;
  for (int a : alpha) r = std::max(r, central_stencil(a, accuracy).reach);
  return r;
}

}  // namespace latharm::detail
