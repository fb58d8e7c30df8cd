#pragma once

#include "latharm/lattice.hpp"

#include <array>

namespace latharm {

/// Truncated multivariate Taylor expansion (complex coefficients) in up to
/// three variables, total degree <= order <= 4. Arithmetic on jets propagates
/// derivatives exactly through rational and elementary operations, giving an
/// analytic-derivative path that needs no symbolic machinery.
class Jet {
 public:
  static constexpr int kMaxOrder = 4;

  static Jet constant(Complex v, int dim, int order);
  // Coordinate jet: value v, d/dx_axis = seed, higher derivatives zero.
  static Jet variable(Complex v, int axis, int dim, int order, double seed = 1.0);

  int dim() const { return dim_; }
  int order() const { return order_; }
  Complex value() const { return c_[0]; }

  // Taylor coefficient and partial derivative for the multi-index (a0,a1,a2);
  // exponents beyond dim() must be zero.
  Complex coefficient(int a0, int a1 = 0, int a2 = 0) const;
  Complex partial(int a0, int a1 = 0, int a2 = 0) const;

  const CVector& coefficients() const { return c_; }

  // Composition with a univariate analytic f given its derivatives at the
  // jet's value: derivs[m] = f^(m)(value()), m = 0..order().
  friend Jet compose(const Jet& u, const std::array<Complex, kMaxOrder + 1>& derivs);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a);

  friend Jet operator+(const Jet& a, Complex s);
  friend Jet operator+(Complex s, const Jet& a);
  friend Jet operator-(const Jet& a, Complex s);
  friend Jet operator-(Complex s, const Jet& a);
  friend Jet operator*(const Jet& a, Complex s);
  friend Jet operator*(Complex s, const Jet& a);
  friend Jet operator/(const Jet& a, Complex s);
  friend Jet operator/(Complex s, const Jet& a);

 private:
  Jet(int dim, int order);
  int dim_, order_;
  CVector c_;
};

Jet sin(const Jet& z);
Jet cos(const Jet& z);
Jet exp(const Jet& z);
Jet log(const Jet& z);    // principal branch; value must avoid the cut
Jet sqrt(const Jet& z);
Jet pow(const Jet& z, double a);
Jet pow(const Jet& z, Complex a);
Jet reciprocal(const Jet& z);

}  // namespace latharm
