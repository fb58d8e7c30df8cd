#pragma once

#include "latharm/lattice.hpp"

namespace latharm {

// Reduce a real number to the fundamental domain (-1/2, 1/2] of the torus.
double fundamental_coordinate(double x);

/// Uniform sampling grid on the torus T^d: axis i carries size(i) points
/// k/size(i), k = 0..size(i)-1, reduced to (-1/2, 1/2]. Sizes are rounded up
/// to the nearest FFT-friendly even value in {2^k, 3*2^k}; the actual sizes
/// are what the grid reports. Sample enumeration is row-major, axis 0 slowest.
class TorusGrid {
 public:
  TorusGrid(int dim, const IVector& sizes);
  static TorusGrid uniform(int dim, long n);
  static long round_up_size(long n);

  int dim() const { return static_cast<int>(sizes_.size()); }
  int size(int axis) const { return sizes_[axis]; }
  const IVector& sizes() const { return sizes_; }
  Index cardinality() const;

  double coord(int axis, int k) const;
  void indices_at(Index flat, IVector& k) const;
  void point_at(Index flat, RVector& xi) const;

  bool operator==(const TorusGrid& o) const { return sizes_ == o.sizes_; }

 private:
  IVector sizes_;
};

/// Function samples on a TorusGrid, e.g. a DFT or a sampled symbol.
class TorusSamples {
 public:
  TorusSamples(TorusGrid grid, CVector values);

  const TorusGrid& grid() const { return grid_; }
  const CVector& values() const { return values_; }
  CVector& values() { return values_; }
  int dim() const { return grid_.dim(); }

 private:
  TorusGrid grid_;
  CVector values_;
};

// F f(xi) = sum_n f(n) exp(+2 pi i n.xi), evaluated by direct summation.
Complex transform_at(const GridFunction& f, const RVector& xi);

// F f sampled on `grid` via the FFT. Requires grid.size(i) >= f extent on
// every axis; violations name the offending axis.
TorusSamples forward_dft(const GridFunction& f, const TorusGrid& grid);

// f(n) = (1/prod N_i) sum_k u(xi_k) exp(-2 pi i xi_k . n) for n in `window`.
// The window must fit in the grid on every axis.
GridFunction inverse_dft(const TorusSamples& u, const LatticeBox& window);

// Convolution on Z^d, exact (FFT with a wrap-free grid). Support box is the
// Minkowski sum of the operand boxes.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

// Direct-summation convolution oracle; same contract as convolve.
GridFunction convolve_direct(const GridFunction& f, const GridFunction& g);

// L^p norm of u over the torus with the product quadrature measure 1/prod N_i.
double torus_lp_norm(const TorusSamples& u, const Lp& p);

namespace detail {
// In-place unnormalized d-dimensional DFT of data laid out row-major
// (axis 0 slowest) with the given axis sizes. sign=+1 uses exp(+2 pi i .),
// sign=-1 uses exp(-2 pi i .).
void dft_nd(CVector& data, const IVector& sizes, int sign);
}  // namespace detail

}  // namespace latharm
