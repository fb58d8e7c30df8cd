#include "latharm/wave.hpp"

#include "latharm/format.hpp"
#include "latharm/operators.hpp"
#include "latharm/rng.hpp"
#include "latharm/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace latharm {

namespace {

void check_wave_data(const GridFunction& f, const GridFunction& g) {
  if (f.dim() != g.dim()) {
    throw std::invalid_argument("wave: displacement and velocity data have different dimensions");
  }
}

// laplacian_stencil evaluated on a fixed box with zero values beyond it,
// written against raw storage so the time loop does not allocate per step.
CVector boxed_laplacian(const LatticeBox& box, const CVector& x) {
  const int d = box.dim();
  std::vector<Index> stride(static_cast<std::size_t>(d), 1);
  for (int j = d - 2; j >= 0; --j) {
    stride[static_cast<std::size_t>(j)] =
        stride[static_cast<std::size_t>(j + 1)] * box.extent(j + 1);
  }
  CVector out = -2.0 * static_cast<double>(d) * x;
  IVector n = box.point_at(0);
  for (Index i = 0; i < box.cardinality(); ++i) {
    for (int j = 0; j < d; ++j) {
      const Index s = stride[static_cast<std::size_t>(j)];
      if (n(j) < box.hi(j)) out(i) += x(i + s);
      if (n(j) > box.lo(j)) out(i) += x(i - s);
    }
    for (int j = d - 1; j >= 0; --j) {
      if (++n(j) <= box.hi(j)) break;
      n(j) = box.lo(j);
    }
  }
  return out;
}

// Shared validation for the time steppers: step count, step size against the
// scheme's stability ceiling, and a buffer that keeps the zero boundary
// behind the light cone of the data.
long stepper_checks(const GridFunction& f, const GridFunction& g, double t, double dt,
                    const LatticeBox& buffer, double dt_ceiling, const char* name) {
  check_wave_data(f, g);
  if (f.dim() != buffer.dim()) {
    throw std::invalid_argument(std::string(name) + ": buffer dimension does not match the data");
  }
  if (t < 0.0 || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(name) + ": time must be finite and >= 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument(std::string(name) + ": dt must be positive");
  }
  const double ceiling = dt_ceiling / std::sqrt(static_cast<double>(f.dim()));
  if (dt > ceiling) {
    throw std::invalid_argument(std::string(name) + ": dt exceeds the stability bound " +
                                detail::format_double(ceiling));
  }
  const long steps = std::lround(t / dt);
  if (std::abs(static_cast<double>(steps) * dt - t) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw std::invalid_argument(std::string(name) + ": t must be an integer multiple of dt");
  }
  const LatticeBox needed =
      LatticeBox::hull(f.box(), g.box()).dilated(static_cast<int>(std::ceil(t)) + 8);
  for (int j = 0; j < buffer.dim(); ++j) {
    if (buffer.lo(j) > needed.lo(j) || buffer.hi(j) < needed.hi(j)) {
      throw std::invalid_argument(std::string(name) + ": buffer must contain the data support " +
                                  "dilated by ceil(t) + 8; axis " + std::to_string(j) +
                                  " falls short");
    }
  }
  return steps;
}

}  // namespace

WaveState solve_wave(const GridFunction& f, const GridFunction& g, double t,
                     const LatticeBox& window, double tol, const QuadratureOptions& opts) {
  check_wave_data(f, g);
  if (f.dim() != window.dim()) {
    throw std::invalid_argument("solve_wave: window dimension does not match the data");
  }
  const int d = f.dim();
  const Symbol cos_t = symbols::wave_cos(t, d);
  const Symbol sinc_t = symbols::wave_sinc(t, d);
  const Symbol sin_phi_t = symbols::wave_sin_phi(t, d);
  GridFunction u = combine(1.0, apply_multiplier(cos_t, f, window, tol, opts),  //
                           1.0, apply_multiplier(sinc_t, g, window, tol, opts));
  GridFunction v = combine(-1.0, apply_multiplier(sin_phi_t, f, window, tol, opts),  //
                           1.0, apply_multiplier(cos_t, g, window, tol, opts));
  return WaveState{t, std::move(u), std::move(v)};
}

double wave_energy(const WaveState& state) {
  const Lp two(2.0);
  double kinetic = lp_norm(state.v, two);
  double energy = kinetic * kinetic;
  for (int j = 1; j <= state.u.dim(); ++j) {
    const double grad = lp_norm(difference(state.u, j), two);
    energy += grad * grad;
  }
  return energy;
}

WaveState leapfrog_evolve(const GridFunction& f, const GridFunction& g, double t, double dt,
                          const LatticeBox& buffer) {
  const long steps = stepper_checks(f, g, t, dt, buffer, 0.9, "leapfrog_evolve");
  const GridFunction f0 = restrict_to(f, buffer);
  const GridFunction g0 = restrict_to(g, buffer);
  if (steps == 0) return WaveState{0.0, f0, g0};

  // Taylor start u^1 = f + dt g + (dt^2/2) Delta f keeps the scheme second
  // order; then u^{m+1} = 2 u^m - u^{m-1} + dt^2 Delta u^m.
  CVector prev = f0.values();
  CVector cur = prev + dt * g0.values() + (0.5 * dt * dt) * boxed_laplacian(buffer, prev);
  for (long m = 1; m < steps; ++m) {
    CVector next = 2.0 * cur - prev + (dt * dt) * boxed_laplacian(buffer, cur);
    prev.swap(cur);
    cur.swap(next);
  }
  // Second-order one-sided velocity read-off at the final time.
  const CVector lap = boxed_laplacian(buffer, cur);
  CVector vel = (cur - prev) / dt + (0.5 * dt) * lap;
  return WaveState{t, GridFunction(buffer, std::move(cur)), GridFunction(buffer, std::move(vel))};
}

WaveState rk4_evolve(const GridFunction& f, const GridFunction& g, double t, double dt,
                     const LatticeBox& buffer) {
  const long steps = stepper_checks(f, g, t, dt, buffer, 0.7, "rk4_evolve");
  CVector u = restrict_to(f, buffer).values();
  CVector v = restrict_to(g, buffer).values();
  for (long m = 0; m < steps; ++m) {
    const CVector k1u = v;
    const CVector k1v = boxed_laplacian(buffer, u);
    const CVector k2u = v + (0.5 * dt) * k1v;
    const CVector k2v = boxed_laplacian(buffer, u + (0.5 * dt) * k1u);
    const CVector k3u = v + (0.5 * dt) * k2v;
    const CVector k3v = boxed_laplacian(buffer, u + (0.5 * dt) * k2u);
    const CVector k4u = v + dt * k3v;
    const CVector k4v = boxed_laplacian(buffer, u + dt * k3u);
    u += (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return WaveState{t, GridFunction(buffer, std::move(u)), GridFunction(buffer, std::move(v))};
}

double strichartz_ratio(const GridFunction& f, const GridFunction& g, double t, const Lp& p,
                        const Lp& q, const LatticeBox& window, double tol) {
  check_wave_data(f, g);
  double denom = lp_norm(g, p);
  for (int j = 1; j <= f.dim(); ++j) denom += lp_norm(difference(f, j), p);
  if (denom == 0.0) {
    throw std::invalid_argument("strichartz_ratio: initial data carries no energy");
  }
  const WaveState state = solve_wave(f, g, t, window, tol);
  return lp_norm(state.u, q) / denom;
}

StrichartzReport strichartz_study(int dim, double t, const Lp& p, const Lp& q, int support_radius,
                                  int trials, std::uint64_t seed, double tol) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("strichartz_study: dimension must be between 1 and 3");
  }
  if (support_radius < 0) throw std::invalid_argument("strichartz_study: negative support radius");
  if (trials < 1) throw std::invalid_argument("strichartz_study: need at least one trial");
  if (t < 0.0 || !std::isfinite(t)) {
    throw std::invalid_argument("strichartz_study: time must be finite and >= 0");
  }
  const int window_radius = support_radius + static_cast<int>(std::ceil(t)) + 24;
  StrichartzReport report(LatticeBox::centered(dim, window_radius));
  report.dim = dim;
  report.t = t;
  report.p = p.str();
  report.q = q.str();
  report.support_radius = support_radius;
  report.trials = trials;
  report.seed = seed;
  report.ratios.reserve(static_cast<std::size_t>(trials));

  const int radii[] = {0, 1, 2, 4, 8, 16};
  for (int trial = 0; trial < trials; ++trial) {
    detail::Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1)));
    const int w = std::min(radii[trial % 6], support_radius);
    const LatticeBox support = LatticeBox::centered(dim, w);
    CVector fv = CVector::Zero(support.cardinality());
    CVector gv = CVector::Zero(support.cardinality());
    // Cycle pure-displacement, pure-velocity, and mixed data.
    const int mode = trial % 3;
    for (Index i = 0; i < support.cardinality(); ++i) {
      if (mode != 1) fv(i) = rng.complex_normal();
      if (mode != 2) gv(i) = rng.complex_normal();
    }
    report.ratios.push_back(strichartz_ratio(GridFunction(support, std::move(fv)),
                                             GridFunction(support, std::move(gv)), t, p, q,
                                             report.window, tol));
  }
  report.max_ratio = *std::max_element(report.ratios.begin(), report.ratios.end());
  return report;
}

}  // namespace latharm
