#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace latharm {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using IVector = Eigen::VectorXi;
using Index = Eigen::Index;

inline constexpr int kMaxDim = 3;

// Convenience constructors for lattice points n in Z^d and torus points xi.
IVector point(int a);
IVector point(int a, int b);
IVector point(int a, int b, int c);
RVector xi_point(double a);
RVector xi_point(double a, double b);
RVector xi_point(double a, double b, double c);

/// Lebesgue exponent p in [1, infinity]. Construction rejects anything else,
/// so an Lp value is always usable without re-validation.
class Lp {
 public:
  explicit Lp(double p);
  static Lp infinity();

  bool is_infinite() const { return infinite_; }
  double value() const;  // finite exponent; throws std::logic_error when infinite
  std::string str() const;

  // Conjugate exponent p' with 1/p + 1/p' = 1.
  Lp conjugate() const;

  bool operator==(const Lp& o) const;

 private:
  Lp() : p_(0.0), infinite_(true) {}
  double p_;
  bool infinite_;
};

/// Axis-aligned finite box in Z^d (1 <= d <= 3), the support carrier for grid
/// functions. Points are enumerated row-major with axis 0 slowest.
class LatticeBox {
 public:
  LatticeBox(IVector lo, IVector hi);
  static LatticeBox centered(int dim, int radius);
  static LatticeBox centered(const IVector& radii);

  int dim() const { return static_cast<int>(lo_.size()); }
  int lo(int axis) const { return lo_[axis]; }
  int hi(int axis) const { return hi_[axis]; }
  int extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }
  Index cardinality() const;

  bool contains(const IVector& n) const;
  Index index_of(const IVector& n) const;  // pre: contains(n)
  void point_at(Index flat, IVector& n) const;
  IVector point_at(Index flat) const;

  LatticeBox shifted(const IVector& by) const;
  LatticeBox dilated(int cells) const;  // grow by `cells` on every side
  static LatticeBox hull(const LatticeBox& a, const LatticeBox& b);

  bool is_centered() const;
  int radius(int axis) const;  // pre: is_centered()
  int max_radius() const;      // max over axes of max(|lo|, |hi|)

  bool operator==(const LatticeBox& o) const;

 private:
  IVector lo_, hi_;
};

/// Finitely supported f: Z^d -> C, stored densely on its box. Entries are
/// validated to be finite at construction; f is implicitly zero off the box.
class GridFunction {
 public:
  GridFunction(LatticeBox box, CVector values);
  static GridFunction zero(const LatticeBox& box);
  static GridFunction delta(int dim);               // unit mass at the origin
  static GridFunction delta_at(const IVector& n);

  const LatticeBox& box() const { return box_; }
  const CVector& values() const { return values_; }
  int dim() const { return box_.dim(); }

  Complex value_at(const IVector& n) const;  // 0 outside the box
  Complex operator[](Index flat) const { return values_[flat]; }

 private:
  LatticeBox box_;
  CVector values_;
};

// ell^p norm of f over Z^d (the entire support, not just a window).
double lp_norm(const GridFunction& f, const Lp& p);

// (translate(f, m))(n) = f(n - m). Support box shifts by m.
GridFunction translate(const GridFunction& f, const IVector& m);

// a*f + b*g on the hull of the two boxes. Dimensions must match.
GridFunction combine(Complex a, const GridFunction& f, Complex b, const GridFunction& g);

// Restriction to a box (entries outside f's box read as zero).
GridFunction restrict_to(const GridFunction& f, const LatticeBox& box);

// (modulate(f, alpha))(n) = exp(2*pi*i n.alpha) f(n).
GridFunction modulate(const GridFunction& f, const RVector& alpha);

// <f, g> = sum f(n) conj(g(n)).
Complex inner_product(const GridFunction& f, const GridFunction& g);

double max_abs_difference(const GridFunction& f, const GridFunction& g);

}  // namespace latharm
