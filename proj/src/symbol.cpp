#include "latharm/symbol.hpp"

#include <cmath>
#include <numbers>

#include "latharm/format.hpp"
#include "latharm/parallel.hpp"
#include "latharm/stencils.hpp"

namespace latharm {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);
// Points closer than this to a listed singular point take the assigned value.
constexpr double kSingularTol = 1e-13;

double to01(double xi) { return xi < 0.0 ? xi + 1.0 : xi; }

template <class C>
C sin2_sum(const std::vector<C>& x) {
  using std::sin;
  C s = sin(kPi * x[0]);
  C acc = s * s;
  for (std::size_t i = 1; i < x.size(); ++i) {
    C si = sin(kPi * x[i]);
    acc = acc + si * si;
  }
  return acc;
}

template <class C>
C square_sum(const std::vector<C>& x) {
  C acc = x[0] * x[0];
  for (std::size_t i = 1; i < x.size(); ++i) acc = acc + x[i] * x[i];
  return acc;
}

}  // namespace

struct Symbol::Impl {
  std::string tag;
  int dim;
  bool hermitian;
  Eval eval;
  DerivEval derivs;
  std::vector<SingularPoint> singular;
};

Symbol::Symbol(std::string tag, int dim, bool hermitian, Eval eval, DerivEval derivs,
               std::vector<SingularPoint> singular) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Symbol: dimension must be 1, 2 or 3");
  if (!eval) throw std::invalid_argument("Symbol: missing evaluator");
  for (const auto& sp : singular)
    if (sp.xi.size() != dim) throw std::invalid_argument("Symbol: singular point dimension");
  auto impl = std::make_shared<Impl>();
  impl->tag = std::move(tag);
  impl->dim = dim;
  impl->hermitian = hermitian;
  impl->eval = std::move(eval);
  impl->derivs = std::move(derivs);
  impl->singular = std::move(singular);
  impl_ = std::move(impl);
}

int Symbol::dim() const { return impl_->dim; }
const std::string& Symbol::tag() const { return impl_->tag; }
bool Symbol::is_hermitian() const { return impl_->hermitian; }
bool Symbol::has_derivatives() const { return static_cast<bool>(impl_->derivs); }
const std::vector<SingularPoint>& Symbol::singular_points() const { return impl_->singular; }

namespace {

RVector reduce(const RVector& xi, int dim) {
  if (xi.size() != dim) throw std::invalid_argument("Symbol: argument dimension mismatch");
  RVector red(dim);
  for (int i = 0; i < dim; ++i) red[i] = fundamental_coordinate(xi[i]);
  return red;
}

}  // namespace

Complex Symbol::operator()(const RVector& xi) const {
  return impl_->eval(reduce(xi, impl_->dim));
}

Jet Symbol::derivatives(const RVector& xi, int order) const {
  if (!impl_->derivs)
    throw std::logic_error("Symbol::derivatives: '" + impl_->tag + "' has no derivative path");
  if (order < 0 || order > Jet::kMaxOrder)
    throw std::invalid_argument("Symbol::derivatives: order must be 0..4");
  return impl_->derivs(reduce(xi, impl_->dim), order);
}

namespace symbols {

namespace {

std::vector<SingularPoint> origin_singularity(int dim, Complex value) {
  return {SingularPoint{RVector::Zero(dim), value}};
}

// Builds a symbol from a formula template usable with both complex numbers
// and jets; the same source defines the value and the derivative paths.
template <class Formula>
Symbol make_analytic(std::string tag, int dim, bool hermitian,
                     std::vector<SingularPoint> singular, Formula f) {
  auto eval = [f, dim, singular](const RVector& xi) -> Complex {
    for (const auto& sp : singular)
      if ((xi - sp.xi).cwiseAbs().maxCoeff() < kSingularTol) return sp.value;
    std::vector<Complex> x(dim);
    for (int i = 0; i < dim; ++i) x[i] = Complex(xi[i], 0.0);
    return f(x);
  };
  auto derivs = [f, dim](const RVector& xi, int order) -> Jet {
    std::vector<Jet> x;
    x.reserve(dim);
    for (int i = 0; i < dim; ++i)
      x.push_back(Jet::variable(Complex(xi[i], 0.0), i, dim, order));
    return f(x);
  };
  return Symbol(std::move(tag), dim, hermitian, std::move(eval), std::move(derivs),
                std::move(singular));
}

}  // namespace

Symbol constant(Complex c, int dim) {
  return make_analytic("const:c=" + detail::format_complex(c), dim, c.imag() == 0.0, {},
                       [c](const auto& x) { return (x[0] - x[0]) + c; });
}

Symbol exponential(const IVector& k) {
  const int dim = static_cast<int>(k.size());
  std::string tag = "exp:k=";
  for (int i = 0; i < dim; ++i) tag += (i ? "," : "") + std::to_string(k[i]);
  IVector kc = k;
  return make_analytic(tag, dim, true, {}, [kc](const auto& x) {
    using std::exp;
    auto phase = (2.0 * kPi * kc[0]) * x[0];
    for (int i = 1; i < kc.size(); ++i) phase = phase + (2.0 * kPi * kc[i]) * x[i];
    return exp(kI * phase);
  });
}

Symbol riesz(int j, int dim) {
  if (j < 1 || j > dim) throw std::invalid_argument("riesz: axis j must be in 1..dim");
  const int j0 = j - 1;
  return make_analytic("riesz:j=" + std::to_string(j), dim, false, origin_singularity(dim, 0.0),
                       [j0](const auto& x) {
                         using std::exp;
                         using std::sin;
                         using std::sqrt;
                         auto S = sin2_sum(x);
                         return exp((-kI * kPi) * x[j0]) * sin(kPi * x[j0]) / (2.0 * sqrt(S));
                       });
}

Symbol laplacian(int dim) {
  return make_analytic("laplacian", dim, true, {},
                       [](const auto& x) { return (-4.0) * sin2_sum(x); });
}

Symbol imaginary_power(double t, int dim) {
  return make_analytic("imagpow:t=" + detail::format_double(t), dim, false,
                       origin_singularity(dim, 1.0), [t](const auto& x) {
                         using std::exp;
                         using std::log;
                         return exp((kI * t) * log(4.0 * sin2_sum(x)));
                       });
}

Symbol wave_cos(double t, int dim) {
  return make_analytic("wavecos:t=" + detail::format_double(t), dim, true,
                       origin_singularity(dim, 1.0), [t](const auto& x) {
                         using std::cos;
                         using std::sqrt;
                         return cos((2.0 * t) * sqrt(sin2_sum(x)));
                       });
}

Symbol wave_sinc(double t, int dim) {
  return make_analytic("wavesinc:t=" + detail::format_double(t), dim, true,
                       origin_singularity(dim, t), [t](const auto& x) {
                         using std::sin;
                         using std::sqrt;
                         auto phi = 2.0 * sqrt(sin2_sum(x));
                         return sin(t * phi) / phi;
                       });
}

Symbol wave_sin_phi(double t, int dim) {
  return make_analytic("wavesinphi:t=" + detail::format_double(t), dim, true,
                       origin_singularity(dim, 0.0), [t](const auto& x) {
                         using std::sin;
                         using std::sqrt;
                         auto phi = 2.0 * sqrt(sin2_sum(x));
                         return phi * sin(t * phi);
                       });
}

Symbol negative_power(double r, int dim) {
  if (!(r > 0.0)) throw std::invalid_argument("negative_power: r must be positive");
  return make_analytic("negpower:r=" + detail::format_double(r), dim, true,
                       origin_singularity(dim, 0.0), [r](const auto& x) {
                         using std::pow;
                         return pow(square_sum(x), Complex(-r / 2.0, 0.0));
                       });
}

Symbol interval_indicator(double a, double b) {
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw std::invalid_argument("interval_indicator: need 0 <= a < b <= 1");
  const std::string tag =
      "interval:a=" + detail::format_double(a) + ",b=" + detail::format_double(b);
  auto eval = [a, b](const RVector& xi) -> Complex {
    const double u = to01(xi[0]);
    return (u >= a && u < b) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  };
  return Symbol(tag, 1, false, std::move(eval), nullptr, {});
}

Symbol rescaled_interval(double a, double b, const Symbol& inner) {
  if (!(a < b)) throw std::invalid_argument("rescaled_interval: need a < b");
  if (inner.dim() != 1) throw std::invalid_argument("rescaled_interval: inner symbol must be 1-d");
  const std::string tag = "rescale(a=" + detail::format_double(a) +
                          ",b=" + detail::format_double(b) + ";" + inner.tag() + ")";
  const double len = b - a;
  auto eval = [a, len, inner](const RVector& xi) -> Complex {
    return inner(xi_point(a + len * to01(xi[0])));
  };
  Symbol::DerivEval derivs;
  if (inner.has_derivatives()) {
    derivs = [a, len, inner](const RVector& xi, int order) -> Jet {
      const double u0 = to01(xi[0]);
      const Jet in = inner.derivatives(xi_point(a + len * u0), order);
      // Chain rule through the affine map y = a + len*u: the m-th derivative
      // picks up len^m.
      std::array<Complex, Jet::kMaxOrder + 1> d{};
      double scale = 1.0;
      for (int m = 0; m <= order; ++m) {
        d[m] = in.partial(m) * scale;
        scale *= len;
      }
      return compose(Jet::variable(Complex(u0, 0.0), 0, 1, order), d);
    };
  }
  // Pull inner's singular points back to this parameterization.
  std::vector<SingularPoint> singular;
  for (const auto& sp : inner.singular_points()) {
    const double y = fundamental_coordinate(sp.xi[0]);
    const double u = (to01(y) - a) / len;
    if (u >= 0.0 && u < 1.0)
      singular.push_back({xi_point(fundamental_coordinate(u)), sp.value});
  }
  return Symbol(tag, 1, false, std::move(eval), std::move(derivs), std::move(singular));
}

Symbol sampled_table(const TorusSamples& samples, std::string tag) {
  const int dim = samples.dim();
  if (tag.empty()) {
    tag = "table:n=";
    for (int i = 0; i < dim; ++i)
      tag += (i ? "," : "") + std::to_string(samples.grid().size(i));
  }
  auto s = std::make_shared<const TorusSamples>(samples);

  auto nearest_flat = [s, dim](const RVector& xi) -> Index {
    Index flat = 0;
    for (int i = 0; i < dim; ++i) {
      const int N = s->grid().size(i);
      const long k = std::lround(to01(xi[i]) * N) % N;
      flat = flat * N + k;
    }
    return flat;
  };
  auto eval = [s, nearest_flat](const RVector& xi) -> Complex {
    return s->values()[nearest_flat(xi)];
  };
  // Derivatives by central differences over the table, step = grid spacing.
  auto derivs = [s, dim, nearest_flat](const RVector& xi, int order) -> Jet {
    IVector k(dim);
    Index flat = nearest_flat(xi);
    for (int i = dim - 1; i >= 0; --i) {
      k[i] = static_cast<int>(flat % s->grid().size(i));
      flat /= s->grid().size(i);
    }
    auto sample = [&](const IVector& shift) -> Complex {
      Index f = 0;
      for (int i = 0; i < dim; ++i) {
        const int N = s->grid().size(i);
        int kk = (k[i] + shift[i]) % N;
        if (kk < 0) kk += N;
        f = f * N + kk;
      }
      return s->values()[f];
    };
    RVector x0(dim);
    for (int i = 0; i < dim; ++i) x0[i] = s->grid().coord(i, k[i]);
    Jet out = Jet::constant(sample(IVector::Zero(dim)), dim, order);
    std::vector<Jet> dx;
    for (int i = 0; i < dim; ++i)
      dx.push_back(Jet::variable(Complex(0.0, 0.0), i, dim, order));
    static const double fact[] = {1, 1, 2, 6, 24};
    std::array<int, 3> alpha{0, 0, 0};
    for (alpha[0] = 0; alpha[0] <= order; ++alpha[0]) {
      for (alpha[1] = 0; alpha[1] <= (dim >= 2 ? order - alpha[0] : 0); ++alpha[1]) {
        for (alpha[2] = 0; alpha[2] <= (dim >= 3 ? order - alpha[0] - alpha[1] : 0); ++alpha[2]) {
          const int total = alpha[0] + alpha[1] + alpha[2];
          if (total == 0) continue;
          Complex raw = detail::fd_partial(sample, alpha, dim, 2, 1.0);
          double coef_scale = 1.0;
          for (int i = 0; i < dim; ++i)
            for (int m = 0; m < alpha[i]; ++m) coef_scale *= s->grid().size(i);
          Complex coef = raw * coef_scale;
          for (int i = 0; i < dim; ++i) coef /= fact[alpha[i]];
          Jet term = Jet::constant(coef, dim, order);
          for (int i = 0; i < dim; ++i)
            for (int m = 0; m < alpha[i]; ++m) term = term * dx[i];
          out = out + term;
        }
      }
    }
    return out;
  };
  return Symbol(std::move(tag), dim, false, std::move(eval), std::move(derivs), {});
}

namespace {

std::vector<SingularPoint> merge_singular(const Symbol& a, const Symbol& b,
                                          const std::function<Complex(const RVector&)>& eval) {
  std::vector<SingularPoint> out;
  auto add = [&out, &eval](const RVector& xi) {
    for (const auto& sp : out)
      if ((sp.xi - xi).cwiseAbs().maxCoeff() < kSingularTol) return;
    out.push_back({xi, eval(xi)});
  };
  for (const auto& sp : a.singular_points()) add(sp.xi);
  for (const auto& sp : b.singular_points()) add(sp.xi);
  return out;
}

}  // namespace

Symbol sum(const Symbol& a, const Symbol& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sum: symbol dimensions differ");
  auto eval = [a, b](const RVector& xi) { return a(xi) + b(xi); };
  Symbol::DerivEval derivs;
  if (a.has_derivatives() && b.has_derivatives())
    derivs = [a, b](const RVector& xi, int order) {
      return a.derivatives(xi, order) + b.derivatives(xi, order);
    };
  return Symbol("sum(" + a.tag() + ";" + b.tag() + ")", a.dim(),
                a.is_hermitian() && b.is_hermitian(), eval, std::move(derivs),
                merge_singular(a, b, eval));
}

Symbol product(const Symbol& a, const Symbol& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("product: symbol dimensions differ");
  auto eval = [a, b](const RVector& xi) { return a(xi) * b(xi); };
  Symbol::DerivEval derivs;
  if (a.has_derivatives() && b.has_derivatives())
    derivs = [a, b](const RVector& xi, int order) {
      return a.derivatives(xi, order) * b.derivatives(xi, order);
    };
  return Symbol("product(" + a.tag() + ";" + b.tag() + ")", a.dim(),
                a.is_hermitian() && b.is_hermitian(), eval, std::move(derivs),
                merge_singular(a, b, eval));
}

namespace {

Jet smooth_step_jet(const Jet& x) {
  // b(x)/(b(x) + b(1-x)) with b = exp(-1/x); only called with value in (0,1).
  const Jet bx = exp(-reciprocal(x));
  const Jet by = exp(-reciprocal(1.0 - x));
  return bx / (bx + by);
}

Jet chi_jet(const Jet& t) {
  const double v = t.value().real();
  if (v <= 1.0) return Jet::constant(1.0, t.dim(), t.order());
  if (v >= 2.0) return Jet::constant(0.0, t.dim(), t.order());
  return 1.0 - smooth_step_jet(t - Complex(1.0, 0.0));
}

double chi(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  return 1.0 - smooth_step(t - 1.0);
}

}  // namespace

Symbol notch(double a, double eps) {
  if (!(eps > 0.0) || !(a - 2.0 * eps > 0.0) || !(a + 2.0 * eps < 1.0))
    throw std::invalid_argument("notch: need eps > 0 and (a-2eps, a+2eps) inside (0,1)");
  const std::string tag =
      "notch:a=" + detail::format_double(a) + ",eps=" + detail::format_double(eps);
  auto eval = [a, eps](const RVector& xi) -> Complex {
    const double t = std::abs(to01(xi[0]) - a);
    if (t >= 2.0 * eps) return 1.0;
    if (t <= eps) return 0.0;
    return smooth_step(t / eps - 1.0);
  };
  auto derivs = [a, eps](const RVector& xi, int order) -> Jet {
    const double u0 = to01(xi[0]);
    const double t0 = std::abs(u0 - a);
    if (t0 >= 2.0 * eps) return Jet::constant(1.0, 1, order);
    if (t0 <= eps) return Jet::constant(0.0, 1, order);
    const Jet u = Jet::variable(Complex(u0, 0.0), 0, 1, order);
    const Jet t = u0 >= a ? u - Complex(a, 0.0) : Complex(a, 0.0) - u;
    return smooth_step_jet(t / Complex(eps, 0.0) - Complex(1.0, 0.0));
  };
  return Symbol(tag, 1, false, std::move(eval), std::move(derivs), {});
}

Symbol dyadic_shell(int j, int dim) {
  if (j < 0) throw std::invalid_argument("dyadic_shell: j must be >= 0");
  const double scale = std::pow(2.0, j);
  auto eval = [scale, dim](const RVector& xi) -> Complex {
    const double t = scale * xi.norm();
    return chi(t) - chi(2.0 * t);
  };
  auto derivs = [scale, dim](const RVector& xi, int order) -> Jet {
    const double t0 = scale * xi.norm();
    if (t0 <= 0.5 || t0 >= 2.0) return Jet::constant(0.0, dim, order);
    std::vector<Jet> x;
    for (int i = 0; i < dim; ++i)
      x.push_back(Jet::variable(Complex(xi[i], 0.0), i, dim, order));
    const Jet t = Complex(scale, 0.0) * sqrt(square_sum(x));
    return chi_jet(t) - chi_jet(Complex(2.0, 0.0) * t);
  };
  return Symbol("shell:j=" + std::to_string(j), dim, true, std::move(eval), std::move(derivs),
                {});
}

Symbol low_pass(int dim) {
  auto eval = [](const RVector& xi) -> Complex { return chi(16.0 * xi.norm()); };
  auto derivs = [dim](const RVector& xi, int order) -> Jet {
    const double t0 = 16.0 * xi.norm();
    if (t0 <= 1.0) return Jet::constant(1.0, dim, order);
    if (t0 >= 2.0) return Jet::constant(0.0, dim, order);
    std::vector<Jet> x;
    for (int i = 0; i < dim; ++i)
      x.push_back(Jet::variable(Complex(xi[i], 0.0), i, dim, order));
    return chi_jet(Complex(16.0, 0.0) * sqrt(square_sum(x)));
  };
  return Symbol("lowpass", dim, true, std::move(eval), std::move(derivs), {});
}

}  // namespace symbols

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bx = std::exp(-1.0 / x);
  const double by = std::exp(-1.0 / (1.0 - x));
  return bx / (bx + by);
}

std::vector<Symbol> subdivision_partition(const std::vector<double>& points, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("subdivision_partition: eps must be positive");
  if (points.empty()) throw std::invalid_argument("subdivision_partition: no points");
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (j + 1 < points.size() && !(points[j] < points[j + 1]))
      throw std::invalid_argument("subdivision_partition: points must be strictly increasing");
    if (!(points[j] - 2.0 * eps > (j == 0 ? 0.0 : points[j - 1] + 2.0 * eps)) ||
        !(points[j] + 2.0 * eps < 1.0))
      throw std::invalid_argument(
          "subdivision_partition: 2eps-intervals must be disjoint and inside (0,1)");
  }
  // With notches phi_j, the pieces (1/J) sum_j phi_j and (1 - phi_j)/J add up
  // to exactly 1; the j-th piece lives in the 2eps-slot around a_j, and the
  // first equals 1 away from every slot.
  const double scale = 1.0 / static_cast<double>(points.size());
  const Symbol weight = symbols::constant(Complex(scale, 0.0), 1);
  Symbol away = symbols::notch(points[0], eps);
  for (std::size_t j = 1; j < points.size(); ++j) {
    away = symbols::sum(away, symbols::notch(points[j], eps));
  }
  std::vector<Symbol> pieces;
  pieces.reserve(points.size() + 1);
  pieces.push_back(symbols::product(weight, away));
  const Symbol one = symbols::constant(Complex(1.0, 0.0), 1);
  const Symbol minus = symbols::constant(Complex(-1.0, 0.0), 1);
  for (double a : points) {
    const Symbol bump = symbols::sum(one, symbols::product(minus, symbols::notch(a, eps)));
    pieces.push_back(symbols::product(weight, bump));
  }
  return pieces;
}

TorusSamples sample_symbol(const Symbol& m, const TorusGrid& grid) {
  if (grid.dim() != m.dim()) throw std::invalid_argument("sample_symbol: dimension mismatch");
  CVector values(grid.cardinality());
  detail::parallel_chunks(grid.cardinality(), [&](Index b, Index e) {
    RVector xi(grid.dim());
    for (Index i = b; i < e; ++i) {
      grid.point_at(i, xi);
      values[i] = m(xi);
    }
  });
  if (!values.allFinite())
    throw std::invalid_argument("sample_symbol: '" + m.tag() + "' produced a non-finite sample");
  return TorusSamples(grid, std::move(values));
}

std::vector<TorusSamples> dyadic_components(const Symbol& m, int j_max, const TorusGrid& grid) {
  if (j_max < 3) throw std::invalid_argument("dyadic_components: j_max must be >= 3");
  std::vector<TorusSamples> pieces;
  const TorusSamples base = sample_symbol(m, grid);
  for (int j = 3; j <= j_max; ++j) {
    const TorusSamples shell = sample_symbol(symbols::dyadic_shell(j, m.dim()), grid);
    CVector vals = base.values().array() * shell.values().array();
    pieces.emplace_back(grid, std::move(vals));
  }
  return pieces;
}

}  // namespace latharm
