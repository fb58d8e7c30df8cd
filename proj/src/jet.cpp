#include "latharm/jet.hpp"

#include <cmath>

namespace latharm {

namespace {

struct JetLayout {
  int n_slots = 0;
  std::vector<std::array<int, 3>> exps;  // slot -> exponents
  std::array<int, 125> slot{};           // a0*25 + a1*5 + a2 -> slot, or -1
};

JetLayout build_layout(int dim, int order) {
  JetLayout L;
  L.slot.fill(-1);
  // Enumerate by total degree, then lexicographically.
  for (int total = 0; total <= order; ++total) {
    for (int a0 = total; a0 >= 0; --a0) {
      for (int a1 = total - a0; a1 >= 0; --a1) {
        const int a2 = total - a0 - a1;
        if ((dim < 2 && a1 > 0) || (dim < 3 && a2 > 0)) continue;
        L.slot[a0 * 25 + a1 * 5 + a2] = L.n_slots++;
        L.exps.push_back({a0, a1, a2});
      }
    }
  }
  return L;
}

const JetLayout& layout(int dim, int order) {
  static const std::array<std::array<JetLayout, Jet::kMaxOrder + 1>, 3> table = [] {
    std::array<std::array<JetLayout, Jet::kMaxOrder + 1>, 3> t;
    for (int d = 1; d <= 3; ++d)
      for (int k = 0; k <= Jet::kMaxOrder; ++k) t[d - 1][k] = build_layout(d, k);
    return t;
  }();
  return table[dim - 1][order];
}

void check_compatible(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim() || a.order() != b.order())
    throw std::invalid_argument("Jet: operands have different layouts");
}

double factorial(int n) {
  static const double f[] = {1, 1, 2, 6, 24};
  return f[n];
}

}  // namespace

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Jet: dim must be 1..3");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("Jet: order must be 0..4");
  c_ = CVector::Zero(layout(dim, order).n_slots);
}

Jet Jet::constant(Complex v, int dim, int order) {
  Jet z(dim, order);
  z.c_[0] = v;
  return z;
}

Jet Jet::variable(Complex v, int axis, int dim, int order, double seed) {
  if (axis < 0 || axis >= dim) throw std::invalid_argument("Jet::variable: axis out of range");
  Jet z(dim, order);
  z.c_[0] = v;
  if (order >= 1) {
    int key = 0;
    key += (axis == 0 ? 25 : axis == 1 ? 5 : 1);
    z.c_[layout(dim, order).slot[key]] = seed;
  }
  return z;
}

Complex Jet::coefficient(int a0, int a1, int a2) const {
  if (a0 < 0 || a1 < 0 || a2 < 0 || a0 + a1 + a2 > order_)
    throw std::invalid_argument("Jet::coefficient: bad multi-index");
  const int s = layout(dim_, order_).slot[a0 * 25 + a1 * 5 + a2];
  if (s < 0) throw std::invalid_argument("Jet::coefficient: exponent on unused axis");
  return c_[s];
}

Complex Jet::partial(int a0, int a1, int a2) const {
  return coefficient(a0, a1, a2) * factorial(a0) * factorial(a1) * factorial(a2);
}

Jet operator+(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  Jet r = a;
  r.c_ += b.c_;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  Jet r = a;
  r.c_ -= b.c_;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  r.c_ = -r.c_;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const JetLayout& L = layout(a.dim_, a.order_);
  Jet r(a.dim_, a.order_);
  for (int i = 0; i < L.n_slots; ++i) {
    if (a.c_[i] == Complex(0.0, 0.0)) continue;
    const auto& ei = L.exps[i];
    for (int j = 0; j < L.n_slots; ++j) {
      const auto& ej = L.exps[j];
      const int a0 = ei[0] + ej[0], a1 = ei[1] + ej[1], a2 = ei[2] + ej[2];
      if (a0 + a1 + a2 > a.order_) continue;
      r.c_[L.slot[a0 * 25 + a1 * 5 + a2]] += a.c_[i] * b.c_[j];
    }
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator+(const Jet& a, Complex s) {
  Jet r = a;
  r.c_[0] += s;
  return r;
}
Jet operator+(Complex s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, Complex s) { return a + (-s); }
Jet operator-(Complex s, const Jet& a) { return (-a) + s; }
Jet operator*(const Jet& a, Complex s) {
  Jet r = a;
  r.c_ *= s;
  return r;
}
Jet operator*(Complex s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, Complex s) { return a * (Complex(1.0, 0.0) / s); }
Jet operator/(Complex s, const Jet& a) { return reciprocal(a) * s; }

Jet compose(const Jet& u, const std::array<Complex, Jet::kMaxOrder + 1>& derivs) {
  // f(u) truncated at u.order(): sum_m f^(m)(u0)/m! (u - u0)^m. The shifted
  // jet w = u - u0 has zero constant term, so w^m only touches degrees >= m.
  const int K = u.order();
  Jet w = u - u.value();
  Jet acc = Jet::constant(derivs[0], u.dim(), K);
  Jet wp = Jet::constant(Complex(1.0, 0.0), u.dim(), K);
  for (int m = 1; m <= K; ++m) {
    wp = wp * w;
    acc = acc + wp * (derivs[m] / factorial(m));
  }
  return acc;
}

Jet sin(const Jet& z) {
  const Complex s = std::sin(z.value()), c = std::cos(z.value());
  return compose(z, {s, c, -s, -c, s});
}

Jet cos(const Jet& z) {
  const Complex s = std::sin(z.value()), c = std::cos(z.value());
  return compose(z, {c, -s, -c, s, c});
}

Jet exp(const Jet& z) {
  const Complex e = std::exp(z.value());
  return compose(z, {e, e, e, e, e});
}

Jet log(const Jet& z) {
  const Complex u = z.value();
  std::array<Complex, Jet::kMaxOrder + 1> d;
  d[0] = std::log(u);
  Complex up = u;
  for (int m = 1; m <= Jet::kMaxOrder; ++m) {
    // f^(m)(u) = (-1)^(m-1) (m-1)! u^-m
    d[m] = (m % 2 == 1 ? 1.0 : -1.0) * factorial(m - 1) / up;
    up *= u;
  }
  return compose(z, d);
}

Jet pow(const Jet& z, Complex a) {
  const Complex u = z.value();
  std::array<Complex, Jet::kMaxOrder + 1> d;
  Complex coef(1.0, 0.0);
  for (int m = 0; m <= Jet::kMaxOrder; ++m) {
    d[m] = coef * std::pow(u, a - static_cast<double>(m));
    coef *= a - static_cast<double>(m);
  }
  return compose(z, d);
}

Jet pow(const Jet& z, double a) { return pow(z, Complex(a, 0.0)); }

Jet sqrt(const Jet& z) { return pow(z, 0.5); }

Jet reciprocal(const Jet& z) {
  const Complex u = z.value();
  std::array<Complex, Jet::kMaxOrder + 1> d;
  Complex up = u;
  for (int m = 0; m <= Jet::kMaxOrder; ++m) {
    d[m] = (m % 2 == 0 ? 1.0 : -1.0) * factorial(m) / up;
    up *= u;
  }
  return compose(z, d);
}

}  // namespace latharm
