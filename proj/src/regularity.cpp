#include "latharm/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "latharm/parallel.hpp"
#include "latharm/rng.hpp"
#include "latharm/stencils.hpp"

namespace latharm {

namespace {

std::vector<double> sorted_magnitudes(const Symbol& m, long N) {
  const TorusSamples samples = sample_symbol(m, TorusGrid::uniform(m.dim(), N));
  std::vector<double> mags(static_cast<std::size_t>(samples.values().size()));
  for (Index i = 0; i < samples.values().size(); ++i) mags[i] = std::abs(samples.values()[i]);
  std::sort(mags.begin(), mags.end());
  return mags;
}

// Fraction of grid points with |m| > s, from an ascending magnitude list.
double fraction_above(const std::vector<double>& mags, double s) {
  const auto it = std::upper_bound(mags.begin(), mags.end(), s);
  return static_cast<double>(mags.end() - it) / static_cast<double>(mags.size());
}

}  // namespace

double distribution_function(const Symbol& m, double s, long N) {
  if (!(s >= 0.0)) throw std::invalid_argument("distribution_function: s must be >= 0");
  const std::vector<double> mags = sorted_magnitudes(m, N);
  return fraction_above(mags, s);
}

WeakLorentzReport weak_lorentz_report(const Symbol& m, double alpha, long N) {
  if (!(alpha > 0.0)) throw std::invalid_argument("weak_lorentz_report: alpha must be positive");
  WeakLorentzReport rep;
  rep.symbol_tag = m.tag();
  rep.dim = m.dim();
  rep.alpha = alpha;
  const std::vector<double> mags = sorted_magnitudes(m, N);
  rep.grid = static_cast<long>(TorusGrid::uniform(m.dim(), N).size(0));

  // Ladder top: the largest s whose super-level set still holds >= 256 grid
  // samples, so lattice-count granularity stays a small relative error.
  double s_max = 1.0;
  if (mags.size() > 257 && mags[mags.size() - 257] > 1.0) s_max = mags[mags.size() - 257];

  constexpr int kLadder = 64;
  rep.s_ladder.resize(kLadder);
  rep.distribution.resize(kLadder);
  for (int j = 0; j < kLadder; ++j) {
    const double s = std::pow(s_max, static_cast<double>(j) / (kLadder - 1));
    rep.s_ladder[j] = s;
    rep.distribution[j] = fraction_above(mags, s);
    rep.constant = std::max(rep.constant, std::pow(s, alpha) * rep.distribution[j]);
  }

  const std::vector<double> fine = sorted_magnitudes(m, 2 * rep.grid);
  for (int j = 0; j < kLadder; ++j) {
    rep.constant_refined = std::max(
        rep.constant_refined, std::pow(rep.s_ladder[j], alpha) * fraction_above(fine, rep.s_ladder[j]));
  }
  return rep;
}

double weak_lorentz_constant(const Symbol& m, double alpha, long N) {
  return weak_lorentz_report(m, alpha, N).constant;
}

namespace {

std::vector<std::array<int, 3>> multi_indices(int dim, int total) {
  std::vector<std::array<int, 3>> out;
  for (int a0 = total; a0 >= 0; --a0)
    for (int a1 = total - a0; a1 >= 0; --a1) {
      const int a2 = total - a0 - a1;
      if ((dim < 2 && a1 > 0) || (dim < 3 && a2 > 0)) continue;
      out.push_back({a0, a1, a2});
    }
  return out;
}

int scheme_reach(int max_order, int accuracy) {
  int r = 0;
  for (int k = 0; k <= max_order; ++k)
    r = std::max(r, detail::central_stencil(k, accuracy).reach);
  return r;
}

// Truncation order of the finite-difference sweep.
constexpr int kSweepAccuracy = 4;

void check_sweep_args(const Symbol& m, int max_order, DerivativeScheme scheme) {
  if (max_order < 0 || max_order > Jet::kMaxOrder)
    throw std::invalid_argument("mikhlin_constants: max_order must be 0..4");
  if (scheme == DerivativeScheme::analytic && max_order > 0 && !m.has_derivatives())
    throw std::invalid_argument("mikhlin_constants: '" + m.tag() +
                                "' has no analytic derivative path");
}

// Exclusion margin keeping every stencil sample of the sweep at grid step h
// clear of the seam and the singular points.
double sweep_margin(int max_order, double h) {
  return (scheme_reach(max_order, kSweepAccuracy) + 1) * h;
}

std::vector<double> mikhlin_sweep(const Symbol& m, int max_order, const TorusGrid& grid,
                                  DerivativeScheme scheme, double margin, long* excluded) {
  const int dim = m.dim();
  const double h = 1.0 / grid.size(0);

  std::vector<std::vector<std::array<int, 3>>> alphas(max_order + 1);
  for (int k = 0; k <= max_order; ++k) alphas[k] = multi_indices(dim, k);

  std::vector<double> constants(max_order + 1, 0.0);
  long excl = 0;
  std::mutex merge;
  detail::parallel_chunks(grid.cardinality(), [&](Index cb, Index ce) {
    std::vector<double> local(max_order + 1, 0.0);
    long local_excl = 0;
    RVector xi(dim);
    for (Index i = cb; i < ce; ++i) {
      grid.point_at(i, xi);
      bool skip = false;
      for (int a = 0; a < dim && !skip; ++a)
        if (std::abs(xi[a]) > 0.5 - margin) skip = true;
      for (const auto& sp : m.singular_points()) {
        if (skip) break;
        if ((xi - sp.xi).cwiseAbs().maxCoeff() < margin) skip = true;
      }
      if (skip) {
        ++local_excl;
        continue;
      }
      const double r = xi.norm();
      if (scheme == DerivativeScheme::analytic) {
        const Jet jet = m.derivatives(xi, max_order);
        for (int k = 0; k <= max_order; ++k) {
          double dmax = 0.0;
          for (const auto& a : alphas[k])
            dmax = std::max(dmax, std::abs(jet.partial(a[0], a[1], a[2])));
          local[k] = std::max(local[k], std::pow(r, k) * dmax);
        }
      } else {
        auto sample = [&m, &xi, h](const IVector& shift) {
          RVector y = xi;
          for (int a = 0; a < shift.size(); ++a) y[a] += h * shift[a];
          return m(y);
        };
        for (int k = 0; k <= max_order; ++k) {
          double dmax = 0.0;
          for (const auto& a : alphas[k])
            dmax = std::max(dmax, std::abs(detail::fd_partial(sample, a, dim, kSweepAccuracy, h)));
          local[k] = std::max(local[k], std::pow(r, k) * dmax);
        }
      }
    }
    std::scoped_lock lock(merge);
    for (int k = 0; k <= max_order; ++k) constants[k] = std::max(constants[k], local[k]);
    excl += local_excl;
  });
  if (excluded) *excluded = excl;
  return constants;
}

}  // namespace

std::vector<double> mikhlin_constants(const Symbol& m, int max_order, long N,
                                      DerivativeScheme scheme, long* excluded) {
  check_sweep_args(m, max_order, scheme);
  const TorusGrid grid = TorusGrid::uniform(m.dim(), N);
  // Same exclusion margin for both schemes so their sweeps are comparable.
  const double margin = sweep_margin(max_order, 1.0 / grid.size(0));
  return mikhlin_sweep(m, max_order, grid, scheme, margin, excluded);
}

MikhlinReport mikhlin_report(const Symbol& m, int max_order, long N, DerivativeScheme scheme) {
  check_sweep_args(m, max_order, scheme);
  MikhlinReport rep;
  rep.symbol_tag = m.tag();
  rep.dim = m.dim();
  rep.max_order = max_order;
  rep.scheme = scheme;
  rep.grid = TorusGrid::round_up_size(N);
  const TorusGrid coarse = TorusGrid::uniform(m.dim(), rep.grid);
  const TorusGrid fine = TorusGrid::uniform(m.dim(), 2 * rep.grid);
  // Both sweeps exclude the same neighborhoods of the seam and the singular
  // points, so refinement compares sampling densities over one fixed domain.
  const double margin = sweep_margin(max_order, 1.0 / coarse.size(0));
  rep.constants = mikhlin_sweep(m, max_order, coarse, scheme, margin, &rep.excluded);
  rep.constants_refined = mikhlin_sweep(m, max_order, fine, scheme, margin, nullptr);
  return rep;
}

std::vector<double> mikhlin_interval_constants(const Symbol& m, int max_order, long N) {
  if (m.dim() != 1) throw std::invalid_argument("mikhlin_interval_constants: symbol must be 1-d");
  if (max_order < 0 || max_order > Jet::kMaxOrder)
    throw std::invalid_argument("mikhlin_interval_constants: max_order must be 0..4");
  if (max_order > 0 && !m.has_derivatives())
    throw std::invalid_argument("mikhlin_interval_constants: '" + m.tag() +
                                "' has no analytic derivative path");
  const long n = TorusGrid::round_up_size(N);
  const double h = 1.0 / static_cast<double>(n);
  const double margin = sweep_margin(max_order, h);

  std::vector<double> constants(max_order + 1, 0.0);
  std::mutex merge;
  detail::parallel_chunks(n - 1, [&](Index cb, Index ce) {
    std::vector<double> local(max_order + 1, 0.0);
    for (Index i = cb; i < ce; ++i) {
      const double u = static_cast<double>(i + 1) * h;  // (0, 1) interior
      if (u < margin || u > 1.0 - margin) continue;
      bool skip = false;
      for (const auto& sp : m.singular_points()) {
        double su = sp.xi[0] < 0.0 ? sp.xi[0] + 1.0 : sp.xi[0];
        if (std::abs(u - su) < margin) skip = true;
      }
      if (skip) continue;
      const Jet jet = m.derivatives(xi_point(u), max_order);
      const double w = u * (1.0 - u);
      for (int k = 0; k <= max_order; ++k)
        local[k] = std::max(local[k], std::pow(w, k) * std::abs(jet.partial(k)));
    }
    std::scoped_lock lock(merge);
    for (int k = 0; k <= max_order; ++k) constants[k] = std::max(constants[k], local[k]);
  });
  return constants;
}

double derivative_paths_gap(const Symbol& m, int max_order, const std::vector<RVector>& points) {
  if (max_order < 1 || max_order > Jet::kMaxOrder)
    throw std::invalid_argument("derivative_paths_gap: max_order must be 1..4");
  double gap = 0.0;
  for (const RVector& pt : points) {
    if (pt.size() != m.dim())
      throw std::invalid_argument("derivative_paths_gap: point dimension mismatch");
    // Sixth-order stencils; the step balances truncation against round-off
    // for fourth derivatives while keeping every sample on the same side of
    // the seam and away from the singular set.
    const double h = std::max(2e-4, 0.018 * pt.norm());
    const Jet jet = m.derivatives(pt, max_order);
    auto sample = [&m, &pt, h](const IVector& shift) {
      RVector y = pt;
      for (int a = 0; a < shift.size(); ++a) y[a] += h * shift[a];
      return m(y);
    };
    for (int k = 1; k <= max_order; ++k) {
      for (const auto& a : multi_indices(m.dim(), k)) {
        const Complex fd = detail::fd_partial(sample, a, m.dim(), 6, h);
        const Complex an = jet.partial(a[0], a[1], a[2]);
        gap = std::max(gap, std::abs(fd - an) / (1.0 + std::abs(an)));
      }
    }
  }
  return gap;
}

double hormander_sum(const KernelTable& kernel, const IVector& s, int R) {
  const int dim = kernel.box.dim();
  if (s.size() != dim) throw std::invalid_argument("hormander_sum: shift dimension mismatch");
  if (R < 1) throw std::invalid_argument("hormander_sum: R must be >= 1");
  const double s_norm = s.cast<double>().norm();
  if (s_norm == 0.0) throw std::invalid_argument("hormander_sum: shift must be nonzero");
  const int need = R + static_cast<int>(std::ceil(s_norm));
  for (int i = 0; i < dim; ++i) {
    if (kernel.box.lo(i) > -need || kernel.box.hi(i) < need)
      throw std::invalid_argument("hormander_sum: kernel box must cover radius R + |s| = " +
                                  std::to_string(need) + " on axis " + std::to_string(i + 1));
  }
  const LatticeBox ball = LatticeBox::centered(dim, R);
  double acc = 0.0;
  IVector r(dim);
  for (Index i = 0; i < ball.cardinality(); ++i) {
    ball.point_at(i, r);
    const double r2 = r.cast<double>().squaredNorm();
    if (r2 > static_cast<double>(R) * R || r2 < 4.0 * s_norm * s_norm) continue;
    acc += std::abs(kernel.value_at(r - s) - kernel.value_at(r));
  }
  return acc;
}

double hormander_constant(const KernelTable& kernel, int shift_cap, int R) {
  if (shift_cap < 1) throw std::invalid_argument("hormander_constant: shift_cap must be >= 1");
  const int dim = kernel.box.dim();
  std::vector<IVector> shifts;
  const LatticeBox ball = LatticeBox::centered(dim, shift_cap);
  IVector s(dim);
  for (Index i = 0; i < ball.cardinality(); ++i) {
    ball.point_at(i, s);
    const double n2 = s.cast<double>().squaredNorm();
    if (n2 == 0.0 || n2 > static_cast<double>(shift_cap) * shift_cap) continue;
    shifts.push_back(s);
  }
  double best = 0.0;
  std::mutex merge;
  detail::parallel_chunks(static_cast<Index>(shifts.size()), [&](Index b, Index e) {
    double local = 0.0;
    for (Index i = b; i < e; ++i) local = std::max(local, hormander_sum(kernel, shifts[i], R));
    std::scoped_lock lock(merge);
    best = std::max(best, local);
  });
  return best;
}

DecayConstants decay_constants(const KernelTable& kernel) {
  const int dim = kernel.box.dim();
  DecayConstants out;
  IVector n(dim);
  for (Index i = 0; i < kernel.box.cardinality(); ++i) {
    kernel.box.point_at(i, n);
    const double w = 1.0 + n.cast<double>().norm();
    out.c0 = std::max(out.c0, std::abs(kernel.values[i]) * std::pow(w, dim));
    for (int j = 0; j < dim; ++j) {
      IVector np = n;
      np[j] += 1;
      if (!kernel.box.contains(np)) continue;
      const double diff = std::abs(kernel.value_at(np) - kernel.values[i]);
      out.c1 = std::max(out.c1, diff * std::pow(w, dim + 1));
    }
  }
  return out;
}

double operator_norm_l2(const Symbol& m, long N) {
  const TorusSamples samples = sample_symbol(m, TorusGrid::uniform(m.dim(), N));
  return samples.values().cwiseAbs().maxCoeff();
}

namespace {

IVector box_center(const LatticeBox& box) {
  IVector c(box.dim());
  for (int i = 0; i < box.dim(); ++i) c[i] = (box.lo(i) + box.hi(i)) / 2;
  return c;
}

// Weighted-L2 ratio through Parseval: ||m . F f||_L2(grid) / ||f||_2.
double spectral_ratio(const TorusSamples& symbol_samples, const GridFunction& f) {
  TorusSamples F = forward_dft(f, symbol_samples.grid());
  F.values().array() *= symbol_samples.values().array();
  return torus_lp_norm(F, Lp(2.0)) / lp_norm(f, Lp(2.0));
}

struct RatioEngine {
  const TorusSamples& samples;
  const LatticeBox& window;
  Lp p, q;
  bool spectral;

  double operator()(const GridFunction& f) const {
    if (spectral) return spectral_ratio(samples, f);
    const GridFunction out = apply_sampled(samples, f, window);
    return lp_norm(out, q) / lp_norm(f, p);
  }
};

GridFunction random_trial(const LatticeBox& box, std::uint64_t seed, int t) {
  detail::Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t)));
  const int dim = box.dim();
  // Cycle deterministic concentration radii 0,1,2,4,... so the trial family
  // is comparable across input boxes of different sizes.
  const int cycle = t % 8;
  const int target = cycle == 0 ? 0 : 1 << (cycle - 1);
  IVector lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    const int half = (box.extent(i) - 1) / 2;
    const int w = std::min(target, half);
    const int c =
        static_cast<int>(rng.uniform_int(box.lo(i) + w, box.hi(i) - w));
    lo[i] = c - w;
    hi[i] = c + w;
  }
  const LatticeBox support(lo, hi);
  CVector values(support.cardinality());
  const bool gaussian = (t % 2) == 0;
  for (Index i = 0; i < values.size(); ++i)
    values[i] = gaussian ? rng.complex_normal() : rng.unit_fourth_root();
  return GridFunction(support, std::move(values));
}

}  // namespace

NormEstimate operator_norm_lower_bound(const Symbol& m, const Lp& p, const Lp& q,
                                       const LatticeBox& box, int trials,
                                       const NormSearchOptions& opts) {
  if (box.dim() != m.dim())
    throw std::invalid_argument("operator_norm_lower_bound: dimension mismatch");
  if (trials < 1) throw std::invalid_argument("operator_norm_lower_bound: trials must be >= 1");
  const int dim = m.dim();
  const bool spectral = !p.is_infinite() && !q.is_infinite() && p.value() == 2.0 &&
                        q.value() == 2.0;

  int pad = 0;
  for (int i = 0; i < dim; ++i) pad = std::max(pad, box.extent(i));
  const LatticeBox window = box.dilated(pad);
  const long cap = opts.grid_cap > 0 ? opts.grid_cap : default_quadrature_cap(dim);

  // Calibrate the grid once on the delta probe, then freeze it for all trials.
  const GridFunction probe = GridFunction::delta_at(box_center(box));
  long base = 64;
  for (int i = 0; i < dim; ++i)
    base = std::max(base, TorusGrid::round_up_size(2L * window.extent(i)));
  base = std::min(base, cap);
  TorusGrid grid = TorusGrid::uniform(dim, base);
  TorusSamples samples = sample_symbol(m, grid);
  {
    RatioEngine engine{samples, window, p, q, spectral};
    double prev = engine(probe);
    while (2L * grid.size(0) <= cap) {
      TorusGrid finer = TorusGrid::uniform(dim, 2L * grid.size(0));
      TorusSamples finer_samples = sample_symbol(m, finer);
      RatioEngine fine_engine{finer_samples, window, p, q, spectral};
      const double cur = fine_engine(probe);
      // Keep the coarse grid once doubling stops moving the probe ratio.
      if (std::abs(cur - prev) <= opts.tol * std::max(1.0, cur)) break;
      grid = finer;
      samples = std::move(finer_samples);
      prev = cur;
    }
  }
  const RatioEngine engine{samples, window, p, q, spectral};

  // Probe trials: t = 0 is the delta probe, the rest sweep concentration
  // widths with Rademacher-type and Gaussian entries.
  std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
  detail::parallel_for(trials, [&](Index t) {
    const GridFunction f =
        t == 0 ? probe : random_trial(box, opts.seed, static_cast<int>(t));
    ratios[static_cast<std::size_t>(t)] = engine(f);
  });
  int best_t = 0;
  for (int t = 1; t < trials; ++t)
    if (ratios[static_cast<std::size_t>(t)] > ratios[static_cast<std::size_t>(best_t)]) best_t = t;

  GridFunction witness = best_t == 0 ? probe : random_trial(box, opts.seed, best_t);
  double best = ratios[static_cast<std::size_t>(best_t)];
  std::string method = best_t == 0 ? "delta" : "random";

  // Greedy coordinate ascent (kept to small boxes: each step is an FFT pair).
  if (!spectral && box.cardinality() <= 256 && opts.ascent_sweeps > 0) {
    GridFunction f = restrict_to(witness, box);
    CVector vals = f.values();
    const Complex dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int sweep = 0; sweep < opts.ascent_sweeps; ++sweep) {
      const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-3) * 0.35;
      for (Index i = 0; i < vals.size(); ++i) {
        for (const Complex& dir : dirs) {
          CVector cand = vals;
          cand[i] += scale * dir;
          const GridFunction fc(box, cand);
          const double r = engine(fc);
          if (r > best * (1.0 + 1e-12)) {
            best = r;
            vals = cand;
            method = "ascent";
          }
        }
      }
    }
    if (method == "ascent") witness = GridFunction(box, vals);
  }

  // Power iteration on T* T sharpens the p = q = 2 bound.
  if (spectral && opts.power_iterations > 0) {
    CVector m2 = samples.values().array().abs2();
    GridFunction f = restrict_to(witness, box);
    if (lp_norm(f, Lp(2.0)) == 0.0) f = probe;
    for (int it = 0; it < opts.power_iterations; ++it) {
      TorusSamples F = forward_dft(f, grid);
      F.values().array() *= m2.array();
      GridFunction g = inverse_dft(F, box);
      const double n2 = lp_norm(g, Lp(2.0));
      if (n2 == 0.0) break;
      f = GridFunction(box, g.values() / n2);
    }
    const double r = engine(f);
    if (r > best) {
      best = r;
      witness = f;
      method = "power-iteration";
    }
  }

  NormEstimate est(std::move(witness), window);
  est.symbol_tag = m.tag();
  est.p = p.str();
  est.q = q.str();
  est.lower_bound = best;
  est.method = method;
  est.grid_sizes = grid.sizes();
  est.spectral = spectral;
  est.trials = trials;
  est.seed = opts.seed;
  return est;
}

double norm_estimate_ratio(const Symbol& m, const NormEstimate& estimate) {
  const TorusGrid grid(m.dim(), estimate.grid_sizes);
  const TorusSamples samples = sample_symbol(m, grid);
  Lp p = estimate.p == "inf" ? Lp::infinity() : Lp(std::stod(estimate.p));
  Lp q = estimate.q == "inf" ? Lp::infinity() : Lp(std::stod(estimate.q));
  const RatioEngine engine{samples, estimate.window, p, q, estimate.spectral};
  return engine(estimate.witness);
}

}  // namespace latharm
