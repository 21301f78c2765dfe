#pragma once
// Energy diagnostics along recorded trajectories.
//
// Continuous-time facts being checked, all consequences of testing the
// equation with y itself:
//   balance      d/dt (1/2)|y|^2 + |y|_V^2 + <Ap y, y> = <g, y>
//   a priori     |y(t)|^2 + int_0^t |y|_V^2 <= |y(0)|^2 + int_0^t |g|_{V*}^2
//   exponential  e^{Lt}|y(t)|^2 - e^{Lq}|y(q)|^2
//                  + int_q^t e^{Ls}(|y|_V^2 - L|y|^2) ds
//                <= (Omega/L)(e^{Lt} - e^{Lq})   for t >= q + 1,
// with L the Poincare constant and Omega the forcing intensity
//   Omega = sup_{h in [1,2]} sup_{t>=0} L int_0^h |g(t+s)|_{V*}^2 e^{Ls} ds
//            / (e^{Lh} - 1),
// which collapses to |g|_{V*}^2 exactly for constant forcing.
//
// Discrete residuals use centered differences interiorly and one-sided
// second-order stencils at the ends; integrals are trapezoidal on the
// recorded clock.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "constitutive.hpp"
#include "forcing.hpp"
#include "galerkin.hpp"
#include "norms.hpp"

namespace bmhd {

struct EnergySeries {
  std::vector<double> t, h_sq, v_sq, ap_pair, g_pair, residual;
};

namespace detail {

// d/dt of a uniformly sampled series, second order at the ends
inline std::vector<double> ddt(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) {
    if (n == 2) d[0] = d[1] = (f[1] - f[0]) / dt;
    return d;
  }
  // One-sided ends written as difference combinations so a constant series
  // differentiates to exactly zero.
  d[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
  d[n - 1] = (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2.0 * dt);
  return d;
}

inline std::vector<double> trapezoid_prefix(const std::vector<double>& f,
                                            double dt) {
  std::vector<double> I(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i)
    I[i] = I[i - 1] + 0.5 * dt * (f[i - 1] + f[i]);
  return I;
}

}  // namespace detail

inline EnergySeries energy_series(const Trajectory& traj) {
  const int m = traj.config.cutoff;
  EnergySeries es;
  const std::size_t n = traj.size();
  es.t.resize(n);
  es.h_sq.resize(n);
  es.v_sq.resize(n);
  es.ap_pair.resize(n);
  es.g_pair.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& y = traj.states[i];
    es.t[i] = traj.time(i);
    es.h_sq[i] = h_norm_sq(y);
    es.v_sq[i] = v_norm_sq(y, traj.params);
    es.ap_pair[i] = pair_dual(apply_Ap(y, traj.params), y);
    es.g_pair[i] =
        pair_dual(traj.forcing.eval(es.t[i], traj.grid, m), y);
  }
  std::vector<double> half(n);
  for (std::size_t i = 0; i < n; ++i) half[i] = 0.5 * es.h_sq[i];
  const auto d = detail::ddt(half, traj.dt_sample);
  es.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    es.residual[i] = d[i] + es.v_sq[i] + es.ap_pair[i] - es.g_pair[i];
  return es;
}

// Forcing intensity Omega_L(g): grid search over window starts and window
// lengths h in [1, 2], composite Simpson per integral.
inline double omega_lambda(const Forcing& g, const PhysicalParams& pp,
                           const SpectralGrid& grid, double lambda,
                           double t_horizon, int m = -1, int n_t = 201,
                           int n_h = 33, int quad_intervals = 256) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (quad_intervals % 2 != 0) ++quad_intervals;
  if (g.empty()) return 0.0;
  const double t_top = std::max(0.0, t_horizon - 2.0);
  double best = 0.0;
  for (int ih = 0; ih < n_h; ++ih) {
    const double h = 1.0 + (n_h == 1 ? 0.0 : double(ih) / double(n_h - 1));
    const double denom = std::expm1(lambda * h);
    for (int it = 0; it < n_t; ++it) {
      const double t0 =
          n_t == 1 ? 0.0 : t_top * double(it) / double(n_t - 1);
      // Simpson over s in [0, h]
      const double ds = h / double(quad_intervals);
      double acc = 0.0;
      for (int j = 0; j <= quad_intervals; ++j) {
        const double s = double(j) * ds;
        const double w =
            (j == 0 || j == quad_intervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        acc += w * g.dual_norm_sq(t0 + s, pp, grid, m) *
               std::exp(lambda * s);
      }
      acc *= ds / 3.0;
      best = std::max(best, lambda * acc / denom);
    }
  }
  return best;
}

struct InequalityReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over pairs of (rhs + tol - lhs) / scale
  double tau_worst = 0.0, t_worst = 0.0;
  std::size_t pairs_checked = 0;
};

// The exponential inequality on every recorded pair (tau, t) with
// t >= tau + 1.
inline InequalityReport verify_energy_inequality(const Trajectory& traj,
                                                 double omega,
                                                 double tol_rel = 1e-6) {
  const PhysicalParams& pp = traj.params;
  const double lam = poincare_constant(pp, traj.grid);
  const EnergySeries es = energy_series(traj);
  const std::size_t n = es.t.size();
  if (n < 2) throw std::invalid_argument("trajectory too short");
  const double dt = traj.dt_sample;

  double sup_h_sq = 0.0;
  for (double v : es.h_sq) sup_h_sq = std::max(sup_h_sq, v);

  // prefix integral of e^{lam s}(|y|_V^2 - lam |y|^2)
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i)
    integrand[i] = std::exp(lam * es.t[i]) * (es.v_sq[i] - lam * es.h_sq[i]);
  const auto I = detail::trapezoid_prefix(integrand, dt);

  InequalityReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      if (es.t[b] < es.t[a] + 1.0 - 1e-12) continue;
      const double ea = std::exp(lam * es.t[a]);
      const double eb = std::exp(lam * es.t[b]);
      const double lhs = eb * es.h_sq[b] - ea * es.h_sq[a] + (I[b] - I[a]);
      const double rhs = omega / lam * (eb - ea);
      const double scale = eb * (1.0 + sup_h_sq + omega / lam);
      const double margin = (rhs + tol_rel * scale - lhs) / scale;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.tau_worst = es.t[a];
        rep.t_worst = es.t[b];
      }
      ++rep.pairs_checked;
    }
  }
  rep.pass = rep.pairs_checked > 0 && rep.worst_margin >= 0.0;
  return rep;
}

struct AprioriReport {
  bool pass = false;
  double worst_margin = 0.0;
  double t_worst = 0.0;
};

// |y(t)|^2 + int_0^t |y|_V^2 <= |y(0)|^2 + int_0^t |g|_{V*}^2 at every
// recorded time.
inline AprioriReport check_apriori_bound(const Trajectory& traj,
                                         double tol_rel = 1e-6) {
  const EnergySeries es = energy_series(traj);
  const std::size_t n = es.t.size();
  const double dt = traj.dt_sample;
  std::vector<double> g2(n);
  for (std::size_t i = 0; i < n; ++i)
    g2[i] = traj.forcing.dual_norm_sq(es.t[i], traj.params, traj.grid,
                                      traj.config.cutoff);
  const auto IV = detail::trapezoid_prefix(es.v_sq, dt);
  const auto IG = detail::trapezoid_prefix(g2, dt);

  AprioriReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double lhs = es.h_sq[i] + IV[i];
    const double rhs = es.h_sq[0] + IG[i];
    const double scale = 1.0 + es.h_sq[0] + IG[i];
    const double margin = (rhs + tol_rel * scale - lhs) / scale;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.t_worst = es.t[i];
    }
  }
  rep.pass = rep.worst_margin >= 0.0;
  return rep;
}

struct GroenwallReport {
  bool pass = false;
  double worst_margin = 0.0;
  double tau_worst = 0.0, t_worst = 0.0;
};

// Sampled comparison: f(t) e^{eta t} - f(tau) e^{eta tau}
//   <= int_tau^t chi(s) e^{eta s} ds + tol, all sampled pairs tau <= t.
inline GroenwallReport groenwall_check(const std::vector<double>& times,
                                       const std::vector<double>& f,
                                       const std::vector<double>& chi,
                                       double eta, double tol) {
  const std::size_t n = times.size();
  if (f.size() != n || chi.size() != n || n < 2)
    throw std::invalid_argument("groenwall: series size mismatch");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = chi[i] * std::exp(eta * times[i]);
  // nonuniform trapezoid prefix
  std::vector<double> I(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    I[i] = I[i - 1] + 0.5 * (times[i] - times[i - 1]) * (w[i - 1] + w[i]);

  GroenwallReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const double lhs = f[b] * std::exp(eta * times[b]) -
                         f[a] * std::exp(eta * times[a]);
      const double margin = I[b] - I[a] + tol - lhs;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.tau_worst = times[a];
        rep.t_worst = times[b];
      }
    }
  rep.pass = rep.worst_margin >= 0.0;
  return rep;
}

}  // namespace bmhd
