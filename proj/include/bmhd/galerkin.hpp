#pragma once
// Galerkin truncation and time integration of
//   dy/dt + A y + Ap y + B(y, y) = g,     y = (u, b),
// restricted to modes |k|_inf <= m.  A is diagonal in the retained basis,
// so the schemes integrate it by exact decay factors and treat Ap, B and g
// explicitly at the stages (Lawson / integrating-factor Runge-Kutta):
//
//   rk2 (midpoint):  y+ = E y + dt E2 N(E2 (y + dt/2 N(y)))
//   rk4 (classical on the transformed variable), all factors decaying.
//
// With N == 0 both schemes reproduce the exact flow of A to roundoff.
// Trajectories record every record_stride-th step, uniform spacing, state
// zero at index 0 corresponding to time 0 on the forcing clock.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilinear.hpp"
#include "constitutive.hpp"
#include "forcing.hpp"
#include "grid.hpp"
#include "norms.hpp"
#include "params.hpp"
#include "state.hpp"

namespace bmhd {

enum class TimeScheme { if_rk2, if_rk4 };

inline TimeScheme scheme_from_string(const std::string& s) {
  if (s == "if_rk2") return TimeScheme::if_rk2;
  if (s == "if_rk4") return TimeScheme::if_rk4;
  throw std::invalid_argument("unknown scheme: " + s);
}

struct GalerkinConfig {
  int cutoff = -1;  // |k|_inf cutoff; -1 keeps the full retained square
  TimeScheme scheme = TimeScheme::if_rk2;
  double dt = 1e-3;
  double t_end = 1.0;
  int record_stride = 10;
  std::uint64_t seed = 0;  // provenance of the initial state, echoed in outputs

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw std::invalid_argument("dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
      throw std::invalid_argument("t_end must be positive");
    if (record_stride < 1)
      throw std::invalid_argument("record_stride must be >= 1");
  }
};

struct Trajectory {
  SpectralGrid grid;
  PhysicalParams params;
  GalerkinConfig config;
  Forcing forcing;
  double dt_sample = 0.0;  // spacing of recorded states
  std::vector<SpectralState> states;

  std::size_t size() const { return states.size(); }
  double time(std::size_t i) const { return dt_sample * double(i); }
  double span() const {
    return states.empty() ? 0.0 : dt_sample * double(states.size() - 1);
  }
};

class blow_up_error : public std::runtime_error {
 public:
  blow_up_error(double t, std::shared_ptr<Trajectory> partial_trajectory)
      : std::runtime_error("solution blew up at t = " + std::to_string(t)),
        time(t),
        partial(std::move(partial_trajectory)) {}
  double time;
  std::shared_ptr<Trajectory> partial;  // recorded states up to the failure
};

inline constexpr double kBlowUpThreshold = 1e12;

// P_m: spectral truncation by |k|_inf
inline SpectralState project_Pm(SpectralState s, int m) {
  if (m < 0 || m > s.grid.cutoff())
    throw std::invalid_argument("cutoff outside the retained square");
  truncate_above(s.u, s.grid, m);
  truncate_above(s.b, s.grid, m);
  return s;
}

namespace detail {

struct OperatorEigs {
  std::vector<double> lam_u, lam_b;
  explicit OperatorEigs(const SpectralGrid& g, const PhysicalParams& pp)
      : lam_u(g.n_modes()), lam_b(g.n_modes()) {
    for (int i = 0; i < g.n_modes(); ++i) {
      const double kk = k_sq(g, i);
      lam_u[i] = pp.kappa1 * kk * kk;
      lam_b[i] = pp.S * kk;
    }
  }
  std::vector<double> decay_u(double dt) const {
    std::vector<double> e(lam_u.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-lam_u[i] * dt);
    return e;
  }
  std::vector<double> decay_b(double dt) const {
    std::vector<double> e(lam_b.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-lam_b[i] * dt);
    return e;
  }
};

inline void apply_decay(SpectralState& s, const std::vector<double>& eu,
                        const std::vector<double>& eb) {
  for (std::size_t i = 0; i < eu.size(); ++i) {
    s.u[2 * i] *= eu[i];
    s.u[2 * i + 1] *= eu[i];
    s.b[2 * i] *= eb[i];
    s.b[2 * i + 1] *= eb[i];
  }
}

}  // namespace detail

// Explicitly treated part of the tendency: P_m[g - Ap y - B(y, y)] read as
// a state through the coefficient-wise Riesz identification.
inline SpectralState explicit_tendency(const SpectralState& y, double t,
                                       const Forcing& g,
                                       const PhysicalParams& pp, int m) {
  DualElement f = g.eval(t, y.grid, m);
  f -= apply_Ap(y, pp);
  f -= apply_B(y, y, pp);
  SpectralState n(y.grid);
  n.u = std::move(f.fu);
  n.b = std::move(f.fb);
  truncate_above(n.u, y.grid, m);
  truncate_above(n.b, y.grid, m);
  return n;
}

// Full tendency P_m[g - A y - Ap y - B(y, y)] as a state.
inline SpectralState rhs(const SpectralState& y, double t, const Forcing& g,
                         const PhysicalParams& pp, int m = -1) {
  const int mm = m < 0 ? y.grid.cutoff() : m;
  SpectralState n = explicit_tendency(y, t, g, pp, mm);
  const detail::OperatorEigs eigs(y.grid, pp);
  for (int i = 0; i < y.grid.n_modes(); ++i)
    for (int c = 0; c < 2; ++c) {
      n.u[2 * i + c] -= eigs.lam_u[i] * y.u[2 * i + c];
      n.b[2 * i + c] -= eigs.lam_b[i] * y.b[2 * i + c];
    }
  truncate_above(n.u, y.grid, mm);
  truncate_above(n.b, y.grid, mm);
  return n;
}

namespace detail {

inline SpectralState step_rk2(const SpectralState& y, double t, double dt,
                              const Forcing& g, const PhysicalParams& pp,
                              int m, const std::vector<double>& eu,
                              const std::vector<double>& eb,
                              const std::vector<double>& eu2,
                              const std::vector<double>& eb2) {
  SpectralState n1 = explicit_tendency(y, t, g, pp, m);
  SpectralState a2 = y + (0.5 * dt) * n1;
  apply_decay(a2, eu2, eb2);
  SpectralState n2 = explicit_tendency(a2, t + 0.5 * dt, g, pp, m);
  apply_decay(n2, eu2, eb2);
  SpectralState out = y;
  apply_decay(out, eu, eb);
  out += dt * n2;
  return out;
}

inline SpectralState step_rk4(const SpectralState& y, double t, double dt,
                              const Forcing& g, const PhysicalParams& pp,
                              int m, const std::vector<double>& eu,
                              const std::vector<double>& eb,
                              const std::vector<double>& eu2,
                              const std::vector<double>& eb2) {
  const double h = 0.5 * dt;
  SpectralState n1 = explicit_tendency(y, t, g, pp, m);

  SpectralState a2 = y + h * n1;
  apply_decay(a2, eu2, eb2);
  SpectralState n2 = explicit_tendency(a2, t + h, g, pp, m);

  SpectralState a3 = y;
  apply_decay(a3, eu2, eb2);
  a3 += h * n2;
  SpectralState n3 = explicit_tendency(a3, t + h, g, pp, m);

  SpectralState a4 = y;
  apply_decay(a4, eu, eb);
  SpectralState n3d = n3;
  apply_decay(n3d, eu2, eb2);
  a4 += dt * n3d;
  SpectralState n4 = explicit_tendency(a4, t + dt, g, pp, m);

  // y+ = E y + dt/6 [E n1 + 2 E2 (n2 + n3) + n4]
  SpectralState out = y;
  apply_decay(out, eu, eb);
  SpectralState w1 = n1;
  apply_decay(w1, eu, eb);
  SpectralState w23 = n2 + n3;
  apply_decay(w23, eu2, eb2);
  out += (dt / 6.0) * (w1 + 2.0 * w23 + n4);
  return out;
}

}  // namespace detail

// One step from time t; standalone variant recomputing the decay factors.
inline SpectralState step(const SpectralState& y, double t, double dt,
                          TimeScheme scheme, const Forcing& g,
                          const PhysicalParams& pp, int m = -1) {
  const int mm = m < 0 ? y.grid.cutoff() : m;
  const detail::OperatorEigs eigs(y.grid, pp);
  const auto eu = eigs.decay_u(dt), eb = eigs.decay_b(dt);
  const auto eu2 = eigs.decay_u(0.5 * dt), eb2 = eigs.decay_b(0.5 * dt);
  SpectralState out =
      scheme == TimeScheme::if_rk2
          ? detail::step_rk2(y, t, dt, g, pp, mm, eu, eb, eu2, eb2)
          : detail::step_rk4(y, t, dt, g, pp, mm, eu, eb, eu2, eb2);
  const double hn = h_norm(out);
  if (!std::isfinite(hn) || hn > kBlowUpThreshold)
    throw blow_up_error(t + dt, nullptr);
  return out;
}

inline Trajectory simulate(const SpectralState& y0, const Forcing& g,
                           const PhysicalParams& pp,
                           const GalerkinConfig& cfg) {
  cfg.validate();
  const SpectralGrid& grid = y0.grid;
  const int K = grid.cutoff();
  const int m = cfg.cutoff < 0 ? K : cfg.cutoff;
  if (m > K) throw std::invalid_argument("cutoff exceeds the retained square");

  const long long nsteps = std::llround(cfg.t_end / cfg.dt);
  if (nsteps < 1 ||
      std::abs(double(nsteps) * cfg.dt - cfg.t_end) >
          1e-9 * std::max(1.0, cfg.t_end))
    throw std::invalid_argument("t_end must be an integer number of steps");
  if (nsteps % cfg.record_stride != 0)
    throw std::invalid_argument("record_stride must divide the step count");

  auto traj = std::make_shared<Trajectory>();
  traj->grid = grid;
  traj->params = pp;
  traj->config = cfg;
  traj->forcing = g;
  traj->dt_sample = cfg.dt * double(cfg.record_stride);
  traj->states.reserve(std::size_t(nsteps / cfg.record_stride) + 1);

  SpectralState y = project_Pm(y0, m);
  leray_project(y);
  enforce_reality(y.u, grid);
  enforce_reality(y.b, grid);
  traj->states.push_back(y);

  const detail::OperatorEigs eigs(grid, pp);
  const auto eu = eigs.decay_u(cfg.dt), eb = eigs.decay_b(cfg.dt);
  const auto eu2 = eigs.decay_u(0.5 * cfg.dt), eb2 = eigs.decay_b(0.5 * cfg.dt);

  for (long long i = 0; i < nsteps; ++i) {
    const double t = double(i) * cfg.dt;
    y = cfg.scheme == TimeScheme::if_rk2
            ? detail::step_rk2(y, t, cfg.dt, g, pp, m, eu, eb, eu2, eb2)
            : detail::step_rk4(y, t, cfg.dt, g, pp, m, eu, eb, eu2, eb2);
    const double hn = h_norm(y);
    if (!std::isfinite(hn) || hn > kBlowUpThreshold)
      throw blow_up_error(t + cfg.dt, traj);
    if ((i + 1) % cfg.record_stride == 0) traj->states.push_back(y);
  }
  return std::move(*traj);
}

}  // namespace bmhd
