#pragma once
// Long-time diagnostics: unit-window trajectory norms, an explicit
// absorbing estimate for them, and omega-limit probes in fractional
// spaces.
//
// The window functional over [t, t+1] is the all-squared sum
//
//   fa(t) = int |y|_V^2 ds  +  sup |y|_H^2  +  int |dy/dt|_{V*}^2 ds.
//
// Chaining the exponential energy inequality with the equation itself
// yields an explicit decaying envelope
//
//   fa(t) <= C0 Y0^2 e^{-L t} + R0            (p <= 2, t >= 1)
//   fa(t) <= C0 Y0^q e^{-q L t / 2} + R0      (p >  2, q = 2p - 2)
//
// built from the forcing intensity Omega alone: with R1 = Omega / L,
//
//   sup_{s>=t} |y(s)|^2        <= Y0^2 e^{-L t} + R1        =: Z + SH
//   int_t^{t+1} |y|_V^2        <= Z + R1 e^L                =: Z + SV
//   int_t^{t+1} |g|_{V*}^2     <= R1 (e^L - 1)              =: Sg
//   |dy/dt|_{V*} <= |g|_{V*} + |A y|_{V*} + |Ap y|_{V*} + |B(y,y)|_{V*},
//
// the quadratic term bounded through |B(y,y)|_{V*}^2 <= CB2 |y|_H^2
// |y|_V^2 and the monotone stress through the same growth constants the
// window bound check uses.  Every coefficient is computed, not assumed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bilinear.hpp"
#include "constitutive.hpp"
#include "energy.hpp"
#include "galerkin.hpp"
#include "norms.hpp"

namespace bmhd {

// ── trajectory re-basing ────────────────────────────────────────────────────

// The recorded tail from time t0 on, re-based so the new clock starts at
// zero; t0 must sit on the recording grid.
inline Trajectory shift(const Trajectory& traj, double t0) {
  const double dt = traj.dt_sample;
  const auto j = std::llround(t0 / dt);
  if (j < 0 || std::size_t(j) >= traj.size() ||
      std::abs(t0 - double(j) * dt) > 1e-9)
    throw std::invalid_argument("shift time must lie on the recording grid");
  Trajectory out;
  out.grid = traj.grid;
  out.params = traj.params;
  out.config = traj.config;
  out.config.t_end = traj.span() - double(j) * dt;
  out.forcing = traj.forcing.shifted(double(j) * dt);
  out.dt_sample = dt;
  out.states.assign(traj.states.begin() + j, traj.states.end());
  return out;
}

// ── window norms ────────────────────────────────────────────────────────────

struct WindowNorms {
  double l2_v = 0.0;       // int over the window of |y|_V^2
  double linf_h = 0.0;     // sup over the window of |y|_H^2
  double l2_dual_dt = 0.0; // int over the window of |dy/dt|_{V*}^2
  double total() const { return l2_v + linf_h + l2_dual_dt; }
};

namespace detail {

inline std::size_t window_samples(const Trajectory& traj, double span) {
  const auto w = std::llround(span / traj.dt_sample);
  if (w < 1 || std::abs(double(w) * traj.dt_sample - span) > 1e-6)
    throw std::invalid_argument("window span must be a multiple of the recording step");
  return std::size_t(w);
}

// dy/dt at recorded index i: centered difference, one-sided second order
// at the trajectory endpoints.
inline SpectralState state_derivative(const Trajectory& traj, std::size_t i) {
  const double dt = traj.dt_sample;
  const std::size_t n = traj.size();
  if (n < 3) throw std::invalid_argument("trajectory too short to differentiate");
  // One-sided ends written as difference combinations so a steady sequence
  // differentiates to exactly zero.
  if (i == 0)
    return (1.0 / (2.0 * dt)) *
           (4.0 * (traj.states[1] - traj.states[0]) -
            (traj.states[2] - traj.states[0]));
  if (i + 1 == n)
    return (1.0 / (2.0 * dt)) *
           (4.0 * (traj.states[n - 1] - traj.states[n - 2]) -
            (traj.states[n - 1] - traj.states[n - 3]));
  return (1.0 / (2.0 * dt)) * (traj.states[i + 1] - traj.states[i - 1]);
}

inline DualElement as_dual(const SpectralState& s) {
  DualElement f(s.grid);
  f.fu = s.u;
  f.fb = s.b;
  return f;
}

}  // namespace detail

inline WindowNorms window_norms(const Trajectory& traj, std::size_t i0,
                                double span = 1.0) {
  const std::size_t w = detail::window_samples(traj, span);
  if (i0 + w >= traj.size())
    throw std::invalid_argument("window extends past the recorded span");
  const double dt = traj.dt_sample;
  WindowNorms out;
  std::vector<double> v2(w + 1), d2(w + 1);
  for (std::size_t o = 0; o <= w; ++o) {
    const auto& y = traj.states[i0 + o];
    v2[o] = v_norm_sq(y, traj.params);
    d2[o] = dual_norm_sq(
        detail::as_dual(detail::state_derivative(traj, i0 + o)), traj.params);
    out.linf_h = std::max(out.linf_h, h_norm_sq(y));
  }
  auto trapz = [&](const std::vector<double>& f) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dt;
  };
  out.l2_v = trapz(v2);
  out.l2_dual_dt = trapz(d2);
  return out;
}

// ── absorbing estimate ──────────────────────────────────────────────────────

struct AbsorbingEstimate {
  double lambda = 0.0, omega = 0.0, nu3 = 0.0, c_gn = 0.0;
  double R1 = 0.0, SH = 0.0, SV = 0.0, Sg = 0.0;
  double CB2 = 0.0, c1t = 0.0, c2t = 0.0;
  double C0 = 0.0, R0 = 0.0;
  double y0_sq = 0.0;
  double q = 2.0;
  bool p_above_two = false;
  double entry_time = 0.0;  // predicted time the window norm is below 2 R0

  // decaying transient unit: Y0^2 e^{-L t}, or Y0^q e^{-q L t / 2}
  double transient(double t) const {
    return p_above_two ? std::pow(y0_sq, 0.5 * q) *
                             std::exp(-0.5 * q * lambda * t)
                       : y0_sq * std::exp(-lambda * t);
  }
  double curve(double t) const { return C0 * transient(t) + R0; }
};

inline AbsorbingEstimate absorbing_estimate(const PhysicalParams& pp,
                                            const SpectralGrid& g,
                                            const Forcing& f, double y0_h_sq,
                                            double t_horizon, int m = -1) {
  AbsorbingEstimate est;
  est.y0_sq = y0_h_sq;
  est.p_above_two = pp.p > 2.0;
  est.q = pp.q();
  est.lambda = poincare_constant(pp, g);
  est.omega = omega_lambda(f, pp, g, est.lambda, t_horizon, m);
  est.nu3 = stress_growth_coeff(pp);

  const double el = std::exp(est.lambda);
  est.R1 = est.omega / est.lambda;
  est.SH = est.R1;
  est.SV = est.R1 * el;
  est.Sg = est.R1 * (el - 1.0);

  const double cb = 1.5 * 3.0 * std::max(1.0, pp.mu) * kBilinearContinuityFrozen;
  est.CB2 = cb * cb;

  const double kmin2 = g.k_scale() * g.k_scale();
  const double c_lin_bracket =
      1.0 + est.CB2 * (est.SH + est.SV + est.y0_sq * std::exp(-est.lambda));
  if (!est.p_above_two) {
    est.c1t = est.nu3 / (2.0 * pp.kappa1 * pp.kappa1 * kmin2);
    est.c2t = est.nu3 * g.volume() / pp.kappa1;
    est.C0 = 2.0 + 4.0 * (c_lin_bracket + est.c1t);
    est.R0 = est.SH + est.SV +
             4.0 * (est.Sg + est.SV + est.c1t * est.SV + est.c2t +
                    est.CB2 * est.SH * est.SV);
  } else {
    const double q = est.q, a = pp.a(), qa = q * a;
    est.c_gn = fit_gradient_interp_constant(g, q, a, 1234567, 32);
    const double pow2 = std::pow(2.0, q - 1.0);
    est.c1t = est.nu3 * pow2 * std::pow(est.c_gn, q) *
              std::pow(2.0 * pp.kappa1, -0.5 * qa) / (2.0 * pp.kappa1);
    est.c2t = est.nu3 * pow2 * g.volume() / (2.0 * pp.kappa1);
    const double half_q = std::pow(2.0, 0.5 * q);
    const double c_lin = 2.0 + 4.0 * c_lin_bracket;
    const double c_ap = 12.0 * est.c1t * half_q;
    const double g1 = 0.5 * (1.0 - a) * q, g2 = 0.5 * qa;
    est.C0 = c_ap + c_lin;
    est.R0 = est.SH + est.SV +
             4.0 * (est.Sg + est.SV + est.c2t +
                    est.CB2 * est.SH * est.SV +
                    est.c1t * half_q *
                        (std::pow(est.SH, 0.5 * q) + std::pow(est.SV, 0.5 * q) +
                         std::pow(est.SH, g1) * std::pow(est.SV, g2))) +
             c_lin;
  }

  // curve(t*) = 2 R0, clamped to the first admissible window
  const double head = est.C0 * est.transient(0.0);
  double t_star = 0.0;
  if (head > est.R0) {
    t_star = est.p_above_two
                 ? 2.0 / (est.q * est.lambda) * std::log(head / est.R0)
                 : std::log(head / est.R0) / est.lambda;
  }
  est.entry_time = std::max(1.0, t_star);
  return est;
}

struct AbsorbingReport {
  bool pass = false;
  bool att_set1_pass = false;
  double att_set1_worst = 0.0;  // min normalized margin over t >= 1
  double entry_measured = 0.0, entry_allowed = 0.0;
  bool entry_pass = false;
  bool stay_pass = false;
  double stay_worst = 0.0;      // min normalized margin of 2 R0 - fa
  double curve_margin_worst = 0.0;  // min over windows of (curve - fa)/curve
  std::size_t windows_checked = 0;
};

// Checks three things on a recorded run against the a priori estimate:
// the tail bound sup_{s>=t} |y(s)|^2 <= Y0^2 e^{-L t} + R1 for t >= 1,
// entry of the unit-window norm into 2 R0 no later than the predicted
// time (with slack), and staying there afterwards.
inline AbsorbingReport verify_absorbing(const Trajectory& traj,
                                        const AbsorbingEstimate& est,
                                        double entry_slack = 1.1,
                                        double tol_rel = 1e-6) {
  const double dt = traj.dt_sample;
  const std::size_t n = traj.size();
  const std::size_t w = detail::window_samples(traj, 1.0);
  if (n < w + 2) throw std::invalid_argument("run too short for unit windows");

  // pointwise tail bound
  std::vector<double> h2(n);
  for (std::size_t i = 0; i < n; ++i) h2[i] = h_norm_sq(traj.states[i]);
  std::vector<double> tail(n);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, h2[i]);
    tail[i] = run;
  }
  AbsorbingReport rep;
  rep.att_set1_worst = std::numeric_limits<double>::infinity();
  const double scale1 = 1.0 + est.y0_sq + est.R1;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.time(i);
    if (t < 1.0 - 1e-12) continue;
    const double bound = est.y0_sq * std::exp(-est.lambda * t) + est.R1;
    rep.att_set1_worst = std::min(
        rep.att_set1_worst, (bound + tol_rel * scale1 - tail[i]) / scale1);
  }
  rep.att_set1_pass = rep.att_set1_worst >= 0.0;

  // batched window norms: per-sample squares once, windows by prefix sums
  std::vector<double> v2(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    v2[i] = v_norm_sq(traj.states[i], traj.params);
    d2[i] = dual_norm_sq(detail::as_dual(detail::state_derivative(traj, i)),
                         traj.params);
  }
  const auto IV = detail::trapezoid_prefix(v2, dt);
  const auto ID = detail::trapezoid_prefix(d2, dt);

  rep.entry_allowed = entry_slack * est.entry_time + dt;
  rep.entry_measured = std::numeric_limits<double>::infinity();
  rep.curve_margin_worst = std::numeric_limits<double>::infinity();
  rep.stay_worst = std::numeric_limits<double>::infinity();
  rep.stay_pass = true;
  const double scale0 = 1.0 + 2.0 * est.R0;
  for (std::size_t i0 = 0; i0 + w < n; ++i0) {
    const double t = traj.time(i0);
    if (t < 1.0 - 1e-12) continue;
    double linf = 0.0;
    for (std::size_t o = 0; o <= w; ++o) linf = std::max(linf, h2[i0 + o]);
    const double fa = linf + (IV[i0 + w] - IV[i0]) + (ID[i0 + w] - ID[i0]);
    ++rep.windows_checked;
    const double c = est.curve(t);
    rep.curve_margin_worst = std::min(rep.curve_margin_worst, (c - fa) / c);
    if (fa <= 2.0 * est.R0 + tol_rel * scale0)
      rep.entry_measured = std::min(rep.entry_measured, t);
    if (t >= rep.entry_allowed - 1e-12) {
      const double margin = (2.0 * est.R0 + tol_rel * scale0 - fa) / scale0;
      if (margin < rep.stay_worst) rep.stay_worst = margin;
      if (margin < 0.0) rep.stay_pass = false;
    }
  }
  rep.entry_pass = rep.entry_measured <= rep.entry_allowed;
  rep.pass = rep.att_set1_pass && rep.entry_pass && rep.stay_pass;
  return rep;
}

// ── omega-limit probes ──────────────────────────────────────────────────────

struct SectionDistance {
  double c_neg = 0.0;   // sup over the window of |A^{-delta}(y - y')|_H
  double l2_pos = 0.0;  // L^2-in-time distance in |A^{+delta} . |_H
};

// Distance between two equally long windows of the same run, compared
// sample by sample.
inline SectionDistance section_distance(const Trajectory& traj,
                                        std::size_t ia, std::size_t ib,
                                        std::size_t n_samples, double delta,
                                        double span_dt = -1.0) {
  if (span_dt <= 0.0) span_dt = traj.dt_sample;
  if (ia + n_samples > traj.size() || ib + n_samples > traj.size())
    throw std::invalid_argument("section windows extend past the recorded span");
  SectionDistance out;
  std::vector<double> pos(n_samples);
  for (std::size_t o = 0; o < n_samples; ++o) {
    const SpectralState diff = traj.states[ia + o] - traj.states[ib + o];
    out.c_neg = std::max(
        out.c_neg,
        std::sqrt(h_norm_sq(apply_A_fractional(diff, traj.params, -delta))));
    pos[o] = h_norm_sq(apply_A_fractional(diff, traj.params, delta));
  }
  double acc = 0.5 * (pos.front() + pos.back());
  for (std::size_t o = 1; o + 1 < n_samples; ++o) acc += pos[o];
  out.l2_pos = std::sqrt(acc * span_dt);
  return out;
}

// Distance of one window to the rest state in the negative space.
inline double section_norm_neg(const Trajectory& traj, std::size_t i0,
                               std::size_t n_samples, double delta) {
  if (i0 + n_samples > traj.size())
    throw std::invalid_argument("section window extends past the recorded span");
  double m = 0.0;
  for (std::size_t o = 0; o < n_samples; ++o)
    m = std::max(m, std::sqrt(h_norm_sq(apply_A_fractional(
                     traj.states[i0 + o], traj.params, -delta))));
  return m;
}

struct OmegaLimitPoint {
  double t = 0.0;     // start time of the window
  double dist = 0.0;  // distance to the closest earlier window
};

// Windows at t_cutoff + j * spacing; the j-th value is its distance to
// the nearest earlier window.  As the run settles onto its limit set the
// earlier windows cover it better and the sequence stops growing.
inline std::vector<OmegaLimitPoint> omega_limit_approx(const Trajectory& traj,
                                                       double t_cutoff,
                                                       double spacing,
                                                       double span,
                                                       double delta) {
  const double dt = traj.dt_sample;
  const std::size_t w = detail::window_samples(traj, span);
  std::vector<std::size_t> starts;
  for (int j = 0;; ++j) {
    const double t = t_cutoff + double(j) * spacing;
    const auto i = std::llround(t / dt);
    if (std::abs(t - double(i) * dt) > 1e-9)
      throw std::invalid_argument("window starts must lie on the recording grid");
    if (std::size_t(i) + w >= traj.size()) break;
    starts.push_back(std::size_t(i));
  }
  std::vector<OmegaLimitPoint> out;
  for (std::size_t j = 1; j < starts.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < j; ++i)
      best = std::min(best, section_distance(traj, starts[j], starts[i],
                                             w + 1, delta)
                                .c_neg);
    out.push_back({dt * double(starts[j]), best});
  }
  return out;
}

struct MonotoneReport {
  bool pass = false;
  double noise = 0.0;         // median of the last three values
  double worst_excess = 0.0;  // max of d[j+1] - d[j] - factor * noise
};

// Stabilization check for the distance sequence: increases are allowed
// only within a few multiples of the terminal noise floor.
inline MonotoneReport omega_limit_monotone_check(const std::vector<double>& d,
                                                 double factor = 3.0) {
  MonotoneReport rep;
  if (d.size() < 2) {
    rep.pass = true;
    return rep;
  }
  std::vector<double> last(d.end() - std::min<std::size_t>(3, d.size()),
                           d.end());
  std::sort(last.begin(), last.end());
  rep.noise = last[last.size() / 2];
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < d.size(); ++j)
    rep.worst_excess =
        std::max(rep.worst_excess, d[j + 1] - d[j] - factor * rep.noise);
  rep.pass = rep.worst_excess <= 0.0;
  return rep;
}

}  // namespace bmhd
