#include "latharm/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

#include "latharm/parallel.hpp"

namespace latharm {

double fundamental_coordinate(double x) { return x - std::ceil(x - 0.5); }

TorusGrid::TorusGrid(int dim, const IVector& sizes) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("TorusGrid: dimension must be 1, 2 or 3");
  if (sizes.size() != dim) throw std::invalid_argument("TorusGrid: size count != dim");
  sizes_.resize(dim);
  for (int i = 0; i < dim; ++i) {
    if (sizes[i] < 1) throw std::invalid_argument("TorusGrid: size must be positive");
    sizes_[i] = static_cast<int>(round_up_size(sizes[i]));
  }
}

TorusGrid TorusGrid::uniform(int dim, long n) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("TorusGrid: dimension must be 1, 2 or 3");
  return TorusGrid(dim, IVector::Constant(dim, static_cast<int>(round_up_size(n))));
}

long TorusGrid::round_up_size(long n) {
  if (n < 2) return 2;
  if (n > (1L << 30)) throw std::invalid_argument("TorusGrid: size too large");
  long p = 2;
  while (p < n) p *= 2;
  // The family {2^k, 3*2^k} sorted is 2, 4, 6, 8, 12, 16, ...; the only
  // candidate between p/2 and p is 3*(p/4).
  if (p >= 8 && 3 * (p / 4) >= n) return 3 * (p / 4);
  return p;
}

Index TorusGrid::cardinality() const {
  Index card = 1;
  for (int i = 0; i < dim(); ++i) card *= sizes_[i];
  return card;
}

double TorusGrid::coord(int axis, int k) const {
  const int n = sizes_[axis];
  return 2 * k <= n ? static_cast<double>(k) / n : static_cast<double>(k) / n - 1.0;
}

void TorusGrid::indices_at(Index flat, IVector& k) const {
  k.resize(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    k[i] = static_cast<int>(flat % sizes_[i]);
    flat /= sizes_[i];
  }
}

void TorusGrid::point_at(Index flat, RVector& xi) const {
  xi.resize(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    xi[i] = coord(i, static_cast<int>(flat % sizes_[i]));
    flat /= sizes_[i];
  }
}

TorusSamples::TorusSamples(TorusGrid grid, CVector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.cardinality())
    throw std::invalid_argument("TorusSamples: value count does not match grid");
  if (!values_.allFinite()) throw std::invalid_argument("TorusSamples: non-finite entry");
}

Complex transform_at(const GridFunction& f, const RVector& xi) {
  if (xi.size() != f.dim()) throw std::invalid_argument("transform_at: dimension mismatch");
  Complex acc(0.0, 0.0);
  IVector n;
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    f.box().point_at(i, n);
    const double phase = 2.0 * std::numbers::pi * n.cast<double>().dot(xi);
    acc += f.values()[i] * std::polar(1.0, phase);
  }
  return acc;
}

namespace detail {

namespace {

// Unnormalized negative-sign DFT along one axis of a row-major array.
void dft_axis(CVector& data, const IVector& sizes, int axis) {
  const int n = sizes[axis];
  if (n == 1) return;
  Index stride = 1;
  for (int i = axis + 1; i < sizes.size(); ++i) stride *= sizes[i];
  const Index block = stride * n;
  const Index lines = data.size() / n;

  parallel_chunks(lines, [&](Index lb, Index le) {
    Eigen::FFT<double> fft;
    CVector in(n), out(n);
    for (Index line = lb; line < le; ++line) {
      const Index outer = line / stride;
      const Index inner = line % stride;
      const Index base = outer * block + inner;
      if (stride == 1) {
        fft.fwd(out.data(), data.data() + base, n);
        std::copy(out.data(), out.data() + n, data.data() + base);
      } else {
        for (int t = 0; t < n; ++t) in[t] = data[base + t * stride];
        fft.fwd(out.data(), in.data(), n);
        for (int t = 0; t < n; ++t) data[base + t * stride] = out[t];
      }
    }
  });
}

}  // namespace

void dft_nd(CVector& data, const IVector& sizes, int sign) {
  Index card = 1;
  for (int i = 0; i < sizes.size(); ++i) card *= sizes[i];
  if (data.size() != card) throw std::invalid_argument("dft_nd: size mismatch");
  if (sign == 1) data = data.conjugate();
  for (int axis = 0; axis < sizes.size(); ++axis) dft_axis(data, sizes, axis);
  if (sign == 1) data = data.conjugate();
}

}  // namespace detail

TorusSamples forward_dft(const GridFunction& f, const TorusGrid& grid) {
  if (grid.dim() != f.dim()) throw std::invalid_argument("forward_dft: dimension mismatch");
  for (int i = 0; i < f.dim(); ++i) {
    if (grid.size(i) < f.box().extent(i))
      throw std::invalid_argument("forward_dft: grid size " + std::to_string(grid.size(i)) +
                                  " too small for support extent " +
                                  std::to_string(f.box().extent(i)) + " on axis " +
                                  std::to_string(i + 1));
  }
  // Wrap the support onto the grid (n -> n mod N per axis), then DFT with the
  // positive sign so sample k reads F f(k/N).
  CVector data = CVector::Zero(grid.cardinality());
  IVector n;
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    f.box().point_at(i, n);
    Index flat = 0;
    for (int a = 0; a < f.dim(); ++a) {
      const int N = grid.size(a);
      int r = n[a] % N;
      if (r < 0) r += N;
      flat = flat * N + r;
    }
    data[flat] += f.values()[i];
  }
  detail::dft_nd(data, grid.sizes(), +1);
  return TorusSamples(grid, std::move(data));
}

GridFunction inverse_dft(const TorusSamples& u, const LatticeBox& window) {
  if (window.dim() != u.dim()) throw std::invalid_argument("inverse_dft: dimension mismatch");
  for (int i = 0; i < u.dim(); ++i) {
    if (window.extent(i) > u.grid().size(i))
      throw std::invalid_argument("inverse_dft: window extent " +
                                  std::to_string(window.extent(i)) + " exceeds grid size " +
                                  std::to_string(u.grid().size(i)) + " on axis " +
                                  std::to_string(i + 1));
  }
  CVector data = u.values();
  detail::dft_nd(data, u.grid().sizes(), -1);
  const double scale = 1.0 / static_cast<double>(u.grid().cardinality());
  CVector out(window.cardinality());
  IVector n;
  for (Index i = 0; i < window.cardinality(); ++i) {
    window.point_at(i, n);
    Index flat = 0;
    for (int a = 0; a < u.dim(); ++a) {
      const int N = u.grid().size(a);
      int r = n[a] % N;
      if (r < 0) r += N;
      flat = flat * N + r;
    }
    out[i] = data[flat] * scale;
  }
  return GridFunction(window, std::move(out));
}

namespace {

LatticeBox sum_box(const LatticeBox& a, const LatticeBox& b) {
  IVector lo(a.dim()), hi(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = a.lo(i) + b.lo(i);
    hi[i] = a.hi(i) + b.hi(i);
  }
  return LatticeBox(lo, hi);
}

}  // namespace

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("convolve: dimension mismatch");
  const LatticeBox out_box = sum_box(f.box(), g.box());
  IVector sizes(f.dim());
  for (int i = 0; i < f.dim(); ++i)
    sizes[i] = static_cast<int>(TorusGrid::round_up_size(out_box.extent(i)));
  const TorusGrid grid(f.dim(), sizes);
  TorusSamples F = forward_dft(f, grid);
  const TorusSamples G = forward_dft(g, grid);
  F.values().array() *= G.values().array();
  return inverse_dft(F, out_box);
}

GridFunction convolve_direct(const GridFunction& f, const GridFunction& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("convolve_direct: dimension mismatch");
  const LatticeBox out_box = sum_box(f.box(), g.box());
  CVector out = CVector::Zero(out_box.cardinality());
  IVector n, m;
  for (Index i = 0; i < out_box.cardinality(); ++i) {
    out_box.point_at(i, n);
    Complex acc(0.0, 0.0);
    for (Index j = 0; j < g.box().cardinality(); ++j) {
      g.box().point_at(j, m);
      acc += f.value_at(n - m) * g.values()[j];
    }
    out[i] = acc;
  }
  return GridFunction(out_box, std::move(out));
}

double torus_lp_norm(const TorusSamples& u, const Lp& p) {
  const auto mags = u.values().array().abs();
  const double mx = u.values().size() == 0 ? 0.0 : mags.maxCoeff();
  if (p.is_infinite() || mx == 0.0) return mx;
  const double pe = p.value();
  const double measure = 1.0 / static_cast<double>(u.grid().cardinality());
  if (pe == 2.0) return std::sqrt(mags.square().sum() * measure);
  return mx * std::pow((mags / mx).pow(pe).sum() * measure, 1.0 / pe);
}

}  // namespace latharm
