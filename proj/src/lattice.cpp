#include "latharm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace latharm {

namespace {

void check_dim(int d, const char* where) {
  if (d < 1 || d > kMaxDim)
    throw std::invalid_argument(std::string(where) + ": dimension must be 1, 2 or 3, got " +
                                std::to_string(d));
}

void check_same_dim(int a, int b, const char* where) {
  if (a != b)
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
}

}  // namespace

IVector point(int a) { return IVector::Constant(1, a); }
IVector point(int a, int b) {
  IVector n(2);
  n << a, b;
  return n;
}
IVector point(int a, int b, int c) {
  IVector n(3);
  n << a, b, c;
  return n;
}
RVector xi_point(double a) { return RVector::Constant(1, a); }
RVector xi_point(double a, double b) {
  RVector x(2);
  x << a, b;
  return x;
}
RVector xi_point(double a, double b, double c) {
  RVector x(3);
  x << a, b, c;
  return x;
}

Lp::Lp(double p) : p_(p), infinite_(false) {
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("Lp: exponent must be finite and >= 1, got " + std::to_string(p));
}

Lp Lp::infinity() { return Lp(); }

double Lp::value() const {
  if (infinite_) throw std::logic_error("Lp::value: exponent is infinite");
  return p_;
}

std::string Lp::str() const {
  if (infinite_) return "inf";
  // Trim trailing zeros for readability in reports.
  std::string s = std::to_string(p_);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

Lp Lp::conjugate() const {
  if (infinite_) return Lp(1.0);
  if (p_ == 1.0) return Lp::infinity();
  return Lp(p_ / (p_ - 1.0));
}

bool Lp::operator==(const Lp& o) const {
  if (infinite_ || o.infinite_) return infinite_ == o.infinite_;
  return p_ == o.p_;
}

LatticeBox::LatticeBox(IVector lo, IVector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  check_dim(static_cast<int>(lo_.size()), "LatticeBox");
  check_same_dim(static_cast<int>(lo_.size()), static_cast<int>(hi_.size()), "LatticeBox");
  for (int i = 0; i < dim(); ++i) {
    if (lo_[i] > hi_[i])
      throw std::invalid_argument("LatticeBox: empty range on axis " + std::to_string(i + 1));
  }
}

LatticeBox LatticeBox::centered(int dim, int radius) {
  check_dim(dim, "LatticeBox::centered");
  if (radius < 0) throw std::invalid_argument("LatticeBox::centered: negative radius");
  return LatticeBox(IVector::Constant(dim, -radius), IVector::Constant(dim, radius));
}

LatticeBox LatticeBox::centered(const IVector& radii) {
  check_dim(static_cast<int>(radii.size()), "LatticeBox::centered");
  if ((radii.array() < 0).any())
    throw std::invalid_argument("LatticeBox::centered: negative radius");
  return LatticeBox(-radii, radii);
}

Index LatticeBox::cardinality() const {
  Index card = 1;
  for (int i = 0; i < dim(); ++i) card *= extent(i);
  return card;
}

bool LatticeBox::contains(const IVector& n) const {
  if (n.size() != lo_.size()) return false;
  for (int i = 0; i < dim(); ++i)
    if (n[i] < lo_[i] || n[i] > hi_[i]) return false;
  return true;
}

Index LatticeBox::index_of(const IVector& n) const {
  Index idx = 0;
  for (int i = 0; i < dim(); ++i) idx = idx * extent(i) + (n[i] - lo_[i]);
  return idx;
}

void LatticeBox::point_at(Index flat, IVector& n) const {
  n.resize(lo_.size());
  for (int i = dim() - 1; i >= 0; --i) {
    const Index len = extent(i);
    n[i] = lo_[i] + static_cast<int>(flat % len);
    flat /= len;
  }
}

IVector LatticeBox::point_at(Index flat) const {
  IVector n;
  point_at(flat, n);
  return n;
}

LatticeBox LatticeBox::shifted(const IVector& by) const {
  check_same_dim(dim(), static_cast<int>(by.size()), "LatticeBox::shifted");
  return LatticeBox(lo_ + by, hi_ + by);
}

LatticeBox LatticeBox::dilated(int cells) const {
  return LatticeBox(lo_.array() - cells, hi_.array() + cells);
}

LatticeBox LatticeBox::hull(const LatticeBox& a, const LatticeBox& b) {
  check_same_dim(a.dim(), b.dim(), "LatticeBox::hull");
  return LatticeBox(a.lo_.cwiseMin(b.lo_), a.hi_.cwiseMax(b.hi_));
}

bool LatticeBox::is_centered() const { return lo_ == -hi_; }

int LatticeBox::radius(int axis) const {
  if (!is_centered()) throw std::logic_error("LatticeBox::radius: box is not centered");
  return hi_[axis];
}

int LatticeBox::max_radius() const {
  int r = 0;
  for (int i = 0; i < dim(); ++i) r = std::max({r, std::abs(lo_[i]), std::abs(hi_[i])});
  return r;
}

bool LatticeBox::operator==(const LatticeBox& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

GridFunction::GridFunction(LatticeBox box, CVector values)
    : box_(std::move(box)), values_(std::move(values)) {
  if (values_.size() != box_.cardinality())
    throw std::invalid_argument("GridFunction: value count " + std::to_string(values_.size()) +
                                " does not match box cardinality " +
                                std::to_string(box_.cardinality()));
  if (!values_.allFinite()) throw std::invalid_argument("GridFunction: non-finite entry");
}

GridFunction GridFunction::zero(const LatticeBox& box) {
  return GridFunction(box, CVector::Zero(box.cardinality()));
}

GridFunction GridFunction::delta(int dim) {
  return GridFunction(LatticeBox::centered(dim, 0), CVector::Ones(1));
}

GridFunction GridFunction::delta_at(const IVector& n) {
  return GridFunction(LatticeBox(n, n), CVector::Ones(1));
}

Complex GridFunction::value_at(const IVector& n) const {
  if (!box_.contains(n)) return Complex(0.0, 0.0);
  return values_[box_.index_of(n)];
}

double lp_norm(const GridFunction& f, const Lp& p) {
  const auto mags = f.values().array().abs();
  const double mx = f.values().size() == 0 ? 0.0 : mags.maxCoeff();
  if (p.is_infinite() || mx == 0.0) return mx;
  const double pe = p.value();
  if (pe == 1.0) return mags.sum();
  if (pe == 2.0) return std::sqrt(mags.square().sum());
  // Scale by the max so large exponents cannot overflow.
  return mx * std::pow((mags / mx).pow(pe).sum(), 1.0 / pe);
}

GridFunction translate(const GridFunction& f, const IVector& m) {
  check_same_dim(f.dim(), static_cast<int>(m.size()), "translate");
  return GridFunction(f.box().shifted(m), f.values());
}

GridFunction combine(Complex a, const GridFunction& f, Complex b, const GridFunction& g) {
  check_same_dim(f.dim(), g.dim(), "combine");
  const LatticeBox box = LatticeBox::hull(f.box(), g.box());
  CVector out = CVector::Zero(box.cardinality());
  IVector n;
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    f.box().point_at(i, n);
    out[box.index_of(n)] += a * f.values()[i];
  }
  for (Index i = 0; i < g.box().cardinality(); ++i) {
    g.box().point_at(i, n);
    out[box.index_of(n)] += b * g.values()[i];
  }
  return GridFunction(box, std::move(out));
}

GridFunction restrict_to(const GridFunction& f, const LatticeBox& box) {
  check_same_dim(f.dim(), box.dim(), "restrict_to");
  CVector out(box.cardinality());
  IVector n;
  for (Index i = 0; i < box.cardinality(); ++i) {
    box.point_at(i, n);
    out[i] = f.value_at(n);
  }
  return GridFunction(box, std::move(out));
}

GridFunction modulate(const GridFunction& f, const RVector& alpha) {
  check_same_dim(f.dim(), static_cast<int>(alpha.size()), "modulate");
  CVector out(f.values().size());
  IVector n;
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    f.box().point_at(i, n);
    const double phase = 2.0 * std::numbers::pi * n.cast<double>().dot(alpha);
    out[i] = std::polar(1.0, phase) * f.values()[i];
  }
  return GridFunction(f.box(), std::move(out));
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
  check_same_dim(f.dim(), g.dim(), "inner_product");
  if (f.box() == g.box()) return g.values().dot(f.values());  // Eigen dot conjugates its receiver
  Complex acc(0.0, 0.0);
  IVector n;
  for (Index i = 0; i < f.box().cardinality(); ++i) {
    f.box().point_at(i, n);
    acc += f.values()[i] * std::conj(g.value_at(n));
  }
  return acc;
}

double max_abs_difference(const GridFunction& f, const GridFunction& g) {
  check_same_dim(f.dim(), g.dim(), "max_abs_difference");
  const LatticeBox box = LatticeBox::hull(f.box(), g.box());
  double mx = 0.0;
  IVector n;
  for (Index i = 0; i < box.cardinality(); ++i) {
    box.point_at(i, n);
    mx = std::max(mx, std::abs(f.value_at(n) - g.value_at(n)));
  }
  return mx;
}

}  // namespace latharm
