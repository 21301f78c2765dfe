#pragma once
// The p-structure stress and its operator on divergence-free fields.
//
// Pointwise constitutive law on symmetric 2x2 tensors:
//   T(D)     = 2 kappa0 (epsilon + |D|^2)^((p-2)/2) D
//   Sigma(D) = (2 kappa0 / p) [ (epsilon + |D|^2)^(p/2) - epsilon^(p/2) ]
// so T = grad Sigma, Sigma(0) = 0, grad Sigma(0) = 0, and Sigma is convex
// for p > 1 (hence T is monotone).  The Hessian acting on a symmetric E is
//   H(D)[E] = 2 kappa0 [ c^((p-2)/2) E + (p-2) c^((p-4)/2) (D:E) D ],
//   c = epsilon + |D|^2.
//
// The weak operator is <Ap Phi, Psi> = integral T(E(u)) : E(v) dx with
// strain E(u) = (grad u + grad u^T)/2; the magnetic part is zero.  The
// discrete realization samples T on the alias-free product grid, so the
// pairing equals an exact-quadrature integral of a pointwise monotone map;
// monotonicity of the assembled operator is inherited point by point.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "norms.hpp"
#include "params.hpp"
#include "state.hpp"
#include "util.hpp"

namespace bmhd {

// ── symmetric 2x2 tensors ──────────────────────────────────────────────────

struct Sym2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;
};

inline double frob_sq(const Sym2& d) {
  return d.xx * d.xx + 2.0 * d.xy * d.xy + d.yy * d.yy;
}
inline double frob(const Sym2& d) { return std::sqrt(frob_sq(d)); }
inline double contract(const Sym2& a, const Sym2& b) {
  return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy;
}
inline Sym2 operator+(const Sym2& a, const Sym2& b) {
  return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
}
inline Sym2 operator-(const Sym2& a, const Sym2& b) {
  return {a.xx - b.xx, a.xy - b.xy, a.yy - b.yy};
}
inline Sym2 operator*(double s, const Sym2& a) {
  return {s * a.xx, s * a.xy, s * a.yy};
}

inline Sym2 stress(const Sym2& d, const PhysicalParams& pp) {
  const double c = pp.epsilon + frob_sq(d);
  return (2.0 * pp.kappa0 * std::pow(c, 0.5 * (pp.p - 2.0))) * d;
}

inline double potential(const Sym2& d, const PhysicalParams& pp) {
  const double c = pp.epsilon + frob_sq(d);
  return (2.0 * pp.kappa0 / pp.p) *
         (std::pow(c, 0.5 * pp.p) - std::pow(pp.epsilon, 0.5 * pp.p));
}

inline Sym2 hessian_apply(const Sym2& d, const Sym2& e,
                          const PhysicalParams& pp) {
  const double c = pp.epsilon + frob_sq(d);
  const double f0 = std::pow(c, 0.5 * (pp.p - 2.0));
  const double f1 = (pp.p - 2.0) * std::pow(c, 0.5 * (pp.p - 4.0));
  const double de = contract(d, e);
  return (2.0 * pp.kappa0) * (f0 * e + (f1 * de) * d);
}

// directional derivative of the stress by central differences; the
// independent check for the analytic Hessian
inline Sym2 hessian_apply_fd(const Sym2& d, const Sym2& e,
                             const PhysicalParams& pp, double h) {
  const Sym2 tp = stress(d + h * e, pp);
  const Sym2 tm = stress(d - h * e, pp);
  return (1.0 / (2.0 * h)) * (tp - tm);
}

// Coefficient nu3 of the growth bound |T(D)|^2 <= nu3 (1 + |D|)^(2p-2).
// |T| depends on D only through r = |D|, so the supremum is a 1-D search:
// dense log grid plus the r -> infinity limit (2 kappa0)^2.
inline double stress_growth_coeff(const PhysicalParams& pp) {
  const double c0 = 2.0 * pp.kappa0;
  auto ratio = [&](double r) {
    return c0 * c0 * std::pow(pp.epsilon + r * r, pp.p - 2.0) * r * r /
           std::pow(1.0 + r, 2.0 * pp.p - 2.0);
  };
  double best = c0 * c0;  // limit r -> infinity
  const int n = 8192;
  for (int i = 0; i <= n; ++i) {
    const double r = std::pow(10.0, -8.0 + 16.0 * double(i) / n);
    best = std::max(best, ratio(r));
  }
  return best * (1.0 + 1e-9);
}

// ── strain coefficients ────────────────────────────────────────────────────

// Fourier coefficients of (E11, E12, E22) for the velocity part
inline std::array<ScalarCoeffs, 3> strain_coeffs(const Coeffs& u,
                                                 const SpectralGrid& g) {
  std::array<ScalarCoeffs, 3> e;
  for (auto& c : e) c.assign(std::size_t(g.n_modes()), {});
  const double ks = g.k_scale();
  const std::complex<double> I(0.0, 1.0);
  for (int i = 0; i < g.n_modes(); ++i) {
    const double k1 = ks * g.k1_of(i);
    const double k2 = ks * g.k2_of(i);
    const auto u1 = u[2 * i], u2 = u[2 * i + 1];
    e[0][i] = I * k1 * u1;
    e[1][i] = 0.5 * I * (k1 * u2 + k2 * u1);
    e[2][i] = I * k2 * u2;
  }
  return e;
}

// ── weak operator ──────────────────────────────────────────────────────────

// <Ap Phi, .> assembled pseudo-spectrally on an alias-free grid
// (grid_size = 0 selects the grid's own product grid, which satisfies
// M >= 3K + 1; larger even sizes refine the quadrature of the
// non-polynomial stress).
inline DualElement apply_Ap(const SpectralState& s, const PhysicalParams& pp,
                            int grid_size = 0) {
  const auto& g = s.grid;
  const int m = grid_size > 0 ? grid_size : g.product_grid();
  const auto eh = strain_coeffs(s.u, g);
  GridField e11 = to_grid(eh[0], g, m);
  GridField e12 = to_grid(eh[1], g, m);
  GridField e22 = to_grid(eh[2], g, m);
  GridField t11(e11.size()), t12(e11.size()), t22(e11.size());
  const double c0 = 2.0 * pp.kappa0;
  const double ex = 0.5 * (pp.p - 2.0);
  for (std::size_t j = 0; j < e11.size(); ++j) {
    const double dd =
        e11[j] * e11[j] + 2.0 * e12[j] * e12[j] + e22[j] * e22[j];
    const double f = c0 * std::pow(pp.epsilon + dd, ex);
    t11[j] = f * e11[j];
    t12[j] = f * e12[j];
    t22[j] = f * e22[j];
  }
  const ScalarCoeffs th11 = from_grid(t11, g, m);
  const ScalarCoeffs th12 = from_grid(t12, g, m);
  const ScalarCoeffs th22 = from_grid(t22, g, m);

  DualElement f(g);
  const double ks = g.k_scale();
  const std::complex<double> mi(0.0, -1.0);
  for (int i = 0; i < g.n_modes(); ++i) {
    const double k1 = ks * g.k1_of(i);
    const double k2 = ks * g.k2_of(i);
    f.fu[2 * i] = mi * (k1 * th11[i] + k2 * th12[i]);
    f.fu[2 * i + 1] = mi * (k1 * th12[i] + k2 * th22[i]);
  }
  leray_project(f.fu, g);
  enforce_reality(f.fu, g);
  return f;
}

// ── verification reports ───────────────────────────────────────────────────

struct MonotonicityReport {
  double min_normalized = 0.0;  // min of pairing / (|Phi1|_V + |Phi2|_V)^2
  std::size_t argmin_pair = 0;
  bool pass = false;
};

// Monotonicity of the assembled operator on random state pairs.
inline MonotonicityReport verify_monotonicity(const PhysicalParams& pp,
                                              const SpectralGrid& g,
                                              int n_pairs,
                                              std::uint64_t seed) {
  MonotonicityReport rep;
  rep.min_normalized = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_pairs; ++j) {
    const SpectralState s1 = random_state(g, seed + 2 * std::uint64_t(j));
    const SpectralState s2 = random_state(g, seed + 2 * std::uint64_t(j) + 1);
    const DualElement d1 = apply_Ap(s1, pp);
    const DualElement d2 = apply_Ap(s2, pp);
    const double num = pair_dual(d1 - d2, s1 - s2);
    const double sn = v_norm(s1, pp) + v_norm(s2, pp);
    const double val = num / (sn * sn);
    if (val < rep.min_normalized) {
      rep.min_normalized = val;
      rep.argmin_pair = std::size_t(j);
    }
  }
  rep.pass = rep.min_normalized >= -1e-12;
  return rep;
}

struct ConstitutiveBoundsReport {
  double nu1_hat = 0.0;  // min of H(D)E:E / ((1+|D|)^(p-2) |E|^2)
  double nu2_hat = 0.0;  // max of |H(D)|_op / (1+|D|^2)^(p-2)
  double fd_step_drift = 0.0;  // worst h=1e-5 vs h=1e-4 quadratic-form shift
  bool pass = false;
};

namespace detail {

// largest |eigenvalue| of a symmetric 3x3 matrix by cyclic Jacobi
inline double sym3_opnorm(double m[3][3]) {
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
    if (off < 1e-300) break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (m[p][q] == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * m[p][q], m[q][q] - m[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < 3; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 3; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
  }
  return std::max({std::abs(m[0][0]), std::abs(m[1][1]), std::abs(m[2][2])});
}

inline Sym2 random_sym2(Rng& rng, double r_max) {
  Sym2 d{rng.normal(), rng.normal(), rng.normal()};
  const double r = frob(d);
  if (r == 0.0) return d;
  const double target = rng.uniform(0.0, r_max);
  return (target / r) * d;
}

}  // namespace detail

// Ellipticity and boundedness of the central-difference Hessian on sampled
// tensors with |D| <= r_max.
inline ConstitutiveBoundsReport verify_constitutive_bounds(
    const PhysicalParams& pp, int n_samples, std::uint64_t seed,
    double r_max = 10.0) {
  ConstitutiveBoundsReport rep;
  rep.nu1_hat = std::numeric_limits<double>::infinity();
  rep.nu2_hat = 0.0;
  Rng rng(seed);
  const double h = 1e-5, h_check = 1e-4;
  // Frobenius-orthonormal basis of the symmetric tensors
  const Sym2 basis[3] = {{1, 0, 0}, {0, 0, 1}, {0, 1.0 / std::sqrt(2.0), 0}};
  for (int j = 0; j < n_samples; ++j) {
    const Sym2 d = detail::random_sym2(rng, r_max);
    Sym2 e{rng.normal(), rng.normal(), rng.normal()};
    const double r = frob(d);
    const double ee = frob_sq(e);

    const double quad = contract(hessian_apply_fd(d, e, pp, h), e);
    rep.nu1_hat = std::min(
        rep.nu1_hat, quad / (std::pow(1.0 + r, pp.p - 2.0) * ee));

    double mat[3][3];
    for (int a = 0; a < 3; ++a) {
      const Sym2 col = hessian_apply_fd(d, basis[a], pp, h);
      for (int b = 0; b < 3; ++b) mat[a][b] = contract(col, basis[b]);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double avg = 0.5 * (mat[a][b] + mat[b][a]);
        mat[a][b] = mat[b][a] = avg;
      }
    const double opn = detail::sym3_opnorm(mat);
    rep.nu2_hat =
        std::max(rep.nu2_hat, opn / std::pow(1.0 + r * r, pp.p - 2.0));

    if (j % 97 == 0) {
      const double quad_c = contract(hessian_apply_fd(d, e, pp, h_check), e);
      const double drift =
          std::abs(quad - quad_c) / std::max(1.0, std::abs(quad));
      rep.fd_step_drift = std::max(rep.fd_step_drift, drift);
    }
  }
  rep.pass = rep.nu1_hat > 0.0 && std::isfinite(rep.nu2_hat) &&
             rep.fd_step_drift < 1e-4;
  return rep;
}

struct KornReport {
  double k1_hat = 0.0;  // min ratio over samples
  double k2_hat = 0.0;  // max ratio over samples
  bool pass = false;
};

// Ratio (integral |E(u)|^p)^(1/p) / |u|_{W^{1,p}} on random divergence-free
// fields; quadrature on the doubled grid.
inline KornReport estimate_korn_constants(const SpectralGrid& g, double p,
                                          int n_samples, std::uint64_t seed) {
  if (!(p > 1.0)) throw std::invalid_argument("korn: p must exceed 1");
  KornReport rep;
  rep.k1_hat = std::numeric_limits<double>::infinity();
  rep.k2_hat = 0.0;
  const int m = 2 * g.modes_per_axis;
  const double ks = g.k_scale();
  const std::complex<double> I(0.0, 1.0);
  for (int j = 0; j < n_samples; ++j) {
    SpectralState s = random_state(g, seed + std::uint64_t(j));
    // strain integrand
    const auto eh = strain_coeffs(s.u, g);
    GridField e11 = to_grid(eh[0], g, m);
    GridField e12 = to_grid(eh[1], g, m);
    GridField e22 = to_grid(eh[2], g, m);
    // velocity and full gradient samples
    auto uph = field_to_grid(s.u, g, m);
    ScalarCoeffs g11(g.n_modes()), g12(g.n_modes()), g21(g.n_modes()),
        g22(g.n_modes());
    for (int i = 0; i < g.n_modes(); ++i) {
      const double k1 = ks * g.k1_of(i);
      const double k2 = ks * g.k2_of(i);
      g11[i] = I * k1 * s.u[2 * i];      // d1 u1
      g12[i] = I * k1 * s.u[2 * i + 1];  // d1 u2
      g21[i] = I * k2 * s.u[2 * i];      // d2 u1
      g22[i] = I * k2 * s.u[2 * i + 1];  // d2 u2
    }
    GridField d11 = to_grid(g11, g, m), d12 = to_grid(g12, g, m);
    GridField d21 = to_grid(g21, g, m), d22 = to_grid(g22, g, m);

    GridField strain_p(e11.size()), u_p(e11.size()), grad_p(e11.size());
    for (std::size_t x = 0; x < e11.size(); ++x) {
      const double es =
          e11[x] * e11[x] + 2.0 * e12[x] * e12[x] + e22[x] * e22[x];
      strain_p[x] = std::pow(es, 0.5 * p);
      const double us = uph[0][x] * uph[0][x] + uph[1][x] * uph[1][x];
      u_p[x] = std::pow(us, 0.5 * p);
      const double gs = d11[x] * d11[x] + d12[x] * d12[x] +
                        d21[x] * d21[x] + d22[x] * d22[x];
      grad_p[x] = std::pow(gs, 0.5 * p);
    }
    const double num = std::pow(grid_integral(strain_p, g), 1.0 / p);
    const double den = std::pow(
        grid_integral(u_p, g) + grid_integral(grad_p, g), 1.0 / p);
    const double ratio = num / den;
    rep.k1_hat = std::min(rep.k1_hat, ratio);
    rep.k2_hat = std::max(rep.k2_hat, ratio);
  }
  rep.pass = rep.k1_hat > 0.0 && std::isfinite(rep.k2_hat);
  return rep;
}

struct ApGrowthReport {
  double lhs = 0.0;        // integral of |Ap Phi|_{V*}^2 over the window
  double rhs = 0.0;        // assembled growth bound
  double nu3 = 0.0;        // stress growth coefficient
  double c1 = 0.0, c2 = 0.0;
  double c_gn = 0.0;       // fitted gradient interpolation constant (p > 2)
  bool p_above_two = false;
  bool qa_boundary = false;
  bool pass = false;
};

namespace detail {

// L^q norm of the velocity gradient by quadrature on the doubled grid
inline double grad_lq_norm(const SpectralState& s, double q) {
  const auto& g = s.grid;
  const int m = 2 * g.modes_per_axis;
  const double ks = g.k_scale();
  const std::complex<double> I(0.0, 1.0);
  ScalarCoeffs g11(g.n_modes()), g12(g.n_modes()), g21(g.n_modes()),
      g22(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i) {
    const double k1 = ks * g.k1_of(i);
    const double k2 = ks * g.k2_of(i);
    g11[i] = I * k1 * s.u[2 * i];
    g12[i] = I * k1 * s.u[2 * i + 1];
    g21[i] = I * k2 * s.u[2 * i];
    g22[i] = I * k2 * s.u[2 * i + 1];
  }
  GridField d11 = to_grid(g11, g, m), d12 = to_grid(g12, g, m);
  GridField d21 = to_grid(g21, g, m), d22 = to_grid(g22, g, m);
  GridField f(d11.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double gs = d11[x] * d11[x] + d12[x] * d12[x] + d21[x] * d21[x] +
                      d22[x] * d22[x];
    f[x] = std::pow(gs, 0.5 * q);
  }
  return std::pow(grid_integral(f, s.grid), 1.0 / q);
}

inline double velocity_l2_norm(const SpectralState& s) {
  const auto& g = s.grid;
  std::vector<double> terms(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i)
    terms[i] = abs2(s.u[2 * i]) + abs2(s.u[2 * i + 1]);
  return std::sqrt(g.volume() * pairwise_sum(terms));
}

}  // namespace detail

// Fits C in |grad u|_{L^q} <= C |u|_1^a |u|_{L^2}^(1-a) on seeded random
// fields plus any caller-supplied states (the fit then majorizes them by
// construction).
inline double fit_gradient_interp_constant(
    const SpectralGrid& g, double q, double a, std::uint64_t seed,
    int n_samples, const std::vector<SpectralState>* extra = nullptr) {
  double best = 0.0;
  auto ratio_of = [&](const SpectralState& s) {
    const double num = detail::grad_lq_norm(s, q);
    const double den = std::pow(std::sqrt(u_seminorm1_sq(s)), a) *
                       std::pow(detail::velocity_l2_norm(s), 1.0 - a);
    return den > 0.0 ? num / den : 0.0;
  };
  for (int j = 0; j < n_samples; ++j) {
    const double decay = 0.1 + 0.2 * (j % 5);
    best = std::max(best, ratio_of(random_state(g, seed + std::uint64_t(j),
                                                1.0, decay)));
  }
  if (extra)
    for (const auto& s : *extra) best = std::max(best, ratio_of(s));
  return best * 1.05;
}

// Growth bound for the window integral of |Ap y|_{V*}^2.  States are
// uniformly spaced samples dt_sample apart spanning (close to) a unit
// window.
inline ApGrowthReport ap_growth_bound(const std::vector<SpectralState>& win,
                                      double dt_sample,
                                      const PhysicalParams& pp) {
  if (win.size() < 2) throw std::invalid_argument("growth bound: empty window");
  const auto& g = win.front().grid;
  const double vol = g.volume();
  const double L = dt_sample * double(win.size() - 1);

  ApGrowthReport rep;
  rep.p_above_two = pp.p > 2.0;
  rep.qa_boundary = pp.qa_boundary();
  rep.nu3 = stress_growth_coeff(pp);

  // trapezoid integrals over the window
  std::vector<double> ap2(win.size()), v2(win.size());
  double sup_h = 0.0;
  for (std::size_t i = 0; i < win.size(); ++i) {
    ap2[i] = dual_norm_sq(apply_Ap(win[i], pp), pp);
    v2[i] = v_norm_sq(win[i], pp);
    sup_h = std::max(sup_h, h_norm(win[i]));
  }
  auto trapz = [&](const std::vector<double>& f) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dt_sample;
  };
  rep.lhs = trapz(ap2);
  const double int_v2 = trapz(v2);

  const double kmin2 = g.k_scale() * g.k_scale();
  if (!rep.p_above_two) {
    // |T|^2 <= 2 nu3 (1 + |E|^2) pointwise for p <= 2
    rep.c1 = rep.nu3 / (2.0 * pp.kappa1 * pp.kappa1 * kmin2);
    rep.c2 = rep.nu3 * vol * L / pp.kappa1;
    rep.rhs = rep.c1 * int_v2 + rep.c2;
  } else {
    const double q = pp.q(), a = pp.a(), qa = q * a;
    rep.c_gn = fit_gradient_interp_constant(g, q, a, 1234567, 32, &win);
    const double pow2 = std::pow(2.0, q - 1.0);
    rep.c1 = rep.nu3 * pow2 * std::pow(rep.c_gn, q) *
             std::pow(2.0 * pp.kappa1, -0.5 * qa) / (2.0 * pp.kappa1);
    rep.c2 = rep.nu3 * pow2 * vol * L / (2.0 * pp.kappa1);
    const double holder = std::pow(L, 1.0 - 0.5 * qa);
    rep.rhs = rep.c1 * holder * std::pow(sup_h, (1.0 - a) * q) *
                  std::pow(int_v2, 0.5 * qa) +
              rep.c2;
  }
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace bmhd
