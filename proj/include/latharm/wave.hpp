#pragma once

#include "latharm/multiplier.hpp"

#include <cstdint>

namespace latharm {

/// Snapshot of the discrete wave flow at time t: displacement u and velocity v.
struct WaveState {
  double t = 0.0;
  GridFunction u;
  GridFunction v;
};

// Spectral solution of u_tt = Delta u, u(0) = f, u_t(0) = g:
//   u(t) = T_{cos(t phi)} f + T_{sin(t phi)/phi} g,
//   v(t) = -T_{phi sin(t phi)} f + T_{cos(t phi)} g,
// with phi = 2 sqrt(sum_j sin^2(pi xi_j)); each application is quadrature-
// doubled to tol on the window.
WaveState solve_wave(const GridFunction& f, const GridFunction& g, double t,
                     const LatticeBox& window, double tol, const QuadratureOptions& opts = {});

// E(state) = ||v||_2^2 + sum_j ||difference(u, j)||_2^2, conserved by the flow.
double wave_energy(const WaveState& state);

// Leapfrog time stepping of u_tt = laplacian_stencil(u) on a fixed buffer box
// (zero beyond the buffer). Requires dt <= 0.9/sqrt(d), t an integer multiple
// of dt, and buffer containing the data supports dilated by ceil(t) + 8 so
// boundary truncation stays behind the light cone.
WaveState leapfrog_evolve(const GridFunction& f, const GridFunction& g, double t, double dt,
                          const LatticeBox& buffer);

// Classical fourth-order Runge-Kutta on the same first-order system; the
// independent high-accuracy oracle for cross-validating the other two paths.
WaveState rk4_evolve(const GridFunction& f, const GridFunction& g, double t, double dt,
                     const LatticeBox& buffer);

// ||u(t)||_q(window) / (||g||_p + sum_j ||difference(f, j)||_p); rejects
// vanishing data.
double strichartz_ratio(const GridFunction& f, const GridFunction& g, double t, const Lp& p,
                        const Lp& q, const LatticeBox& window, double tol);

/// Batch of randomized dispersive-estimate trials at one time: the empirical
/// sup of strichartz_ratio over seeded data on a fixed support box.
struct StrichartzReport {
  explicit StrichartzReport(LatticeBox window) : window(std::move(window)) {}

  int dim = 0;
  double t = 0.0;
  std::string p, q;
  int support_radius = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  LatticeBox window;
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

StrichartzReport strichartz_study(int dim, double t, const Lp& p, const Lp& q, int support_radius,
                                  int trials, std::uint64_t seed, double tol);

}  // namespace latharm
