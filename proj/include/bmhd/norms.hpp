#pragma once
// Norms, pairings and the diagonal leading operator.
//
// With fields written as f(x) = sum_k fhat(k) e^{i k.x} on the box of
// volume V, Parseval gives  integral f.g dx = V sum_k fhat(k).conj(ghat(k)).
// For divergence-free fields the building blocks reduce to diagonal sums:
//
//   |Phi|_H^2      = V sum_k (|uhat|^2 + |bhat|^2)
//   |u|_1^2        = V sum_k (1/2)|k|^4 |uhat|^2     (grad of strain)
//   |b|_2^2        = V sum_k |k|^2 |bhat|^2          (curl)
//   |Phi|_V^2      = 2 kappa1 |u|_1^2 + S |b|_2^2
//
// The leading operator is diagonal in the same basis,
//   (A Phi)_u(k) = kappa1 |k|^4 uhat(k),   (A Phi)_b(k) = S |k|^2 bhat(k),
// so <A Phi, Phi> = |Phi|_V^2 holds exactly, mode by mode.  Fractional
// powers and the sharp Poincare constant follow from the same eigenvalues.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "params.hpp"
#include "state.hpp"
#include "util.hpp"

namespace bmhd {

namespace detail {

// |k|^2 in physical units for mode idx
inline double k_sq(const SpectralGrid& g, int idx) {
  const double s = g.k_scale();
  const double k1 = s * g.k1_of(idx);
  const double k2 = s * g.k2_of(idx);
  return k1 * k1 + k2 * k2;
}

inline double abs2(const std::complex<double>& z) { return std::norm(z); }

}  // namespace detail

// ── norms ──────────────────────────────────────────────────────────────────

inline double h_norm_sq(const SpectralState& s) {
  const auto& g = s.grid;
  std::vector<double> terms(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i)
    terms[i] = detail::abs2(s.u[2 * i]) + detail::abs2(s.u[2 * i + 1]) +
               detail::abs2(s.b[2 * i]) + detail::abs2(s.b[2 * i + 1]);
  return g.volume() * pairwise_sum(terms);
}

inline double h_norm(const SpectralState& s) { return std::sqrt(h_norm_sq(s)); }

// |u|_1^2: squared gradient-of-strain seminorm of the velocity part
inline double u_seminorm1_sq(const SpectralState& s) {
  const auto& g = s.grid;
  std::vector<double> terms(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i) {
    const double kk = detail::k_sq(g, i);
    terms[i] = 0.5 * kk * kk *
               (detail::abs2(s.u[2 * i]) + detail::abs2(s.u[2 * i + 1]));
  }
  return g.volume() * pairwise_sum(terms);
}

// |b|_2^2: squared curl seminorm of the magnetic part
inline double b_seminorm2_sq(const SpectralState& s) {
  const auto& g = s.grid;
  std::vector<double> terms(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i)
    terms[i] = detail::k_sq(g, i) *
               (detail::abs2(s.b[2 * i]) + detail::abs2(s.b[2 * i + 1]));
  return g.volume() * pairwise_sum(terms);
}

inline double v_norm_sq(const SpectralState& s, const PhysicalParams& pp) {
  return 2.0 * pp.kappa1 * u_seminorm1_sq(s) + pp.S * b_seminorm2_sq(s);
}

inline double v_norm(const SpectralState& s, const PhysicalParams& pp) {
  return std::sqrt(v_norm_sq(s, pp));
}

// ── pairings ───────────────────────────────────────────────────────────────

// <f, Phi>: L^2 pairing of a functional with a state
inline double pair_dual(const DualElement& f, const SpectralState& s) {
  require_same_grid(f.grid, s.grid, "pair_dual");
  const auto& g = s.grid;
  std::vector<double> terms(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i) {
    double t = 0.0;
    for (int c = 0; c < 2; ++c) {
      t += f.fu[2 * i + c].real() * s.u[2 * i + c].real() +
           f.fu[2 * i + c].imag() * s.u[2 * i + c].imag();
      t += f.fb[2 * i + c].real() * s.b[2 * i + c].real() +
           f.fb[2 * i + c].imag() * s.b[2 * i + c].imag();
    }
    terms[i] = t;
  }
  return g.volume() * pairwise_sum(terms);
}

// L^2 inner product of two states
inline double inner_h(const SpectralState& a, const SpectralState& b) {
  require_same_grid(a.grid, b.grid, "inner_h");
  const auto& g = a.grid;
  std::vector<double> terms(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i) {
    double t = 0.0;
    for (int c = 0; c < 2; ++c) {
      t += a.u[2 * i + c].real() * b.u[2 * i + c].real() +
           a.u[2 * i + c].imag() * b.u[2 * i + c].imag();
      t += a.b[2 * i + c].real() * b.b[2 * i + c].real() +
           a.b[2 * i + c].imag() * b.b[2 * i + c].imag();
    }
    terms[i] = t;
  }
  return g.volume() * pairwise_sum(terms);
}

// Dual-space norm: the Riesz weights are the reciprocals of the operator
// eigenvalues.  The mean mode must vanish; the functional does not see it.
inline double dual_norm_sq(const DualElement& f, const PhysicalParams& pp) {
  const auto& g = f.grid;
  std::vector<double> terms(g.n_modes(), 0.0);
  for (int i = 0; i < g.n_modes(); ++i) {
    const double kk = detail::k_sq(g, i);
    if (kk == 0.0) continue;
    const double wu = pp.kappa1 * kk * kk;
    const double wb = pp.S * kk;
    terms[i] =
        (detail::abs2(f.fu[2 * i]) + detail::abs2(f.fu[2 * i + 1])) / wu +
        (detail::abs2(f.fb[2 * i]) + detail::abs2(f.fb[2 * i + 1])) / wb;
  }
  return g.volume() * pairwise_sum(terms);
}

inline double dual_norm(const DualElement& f, const PhysicalParams& pp) {
  return std::sqrt(dual_norm_sq(f, pp));
}

// ── leading operator ───────────────────────────────────────────────────────

inline DualElement apply_A(const SpectralState& s, const PhysicalParams& pp) {
  DualElement f(s.grid);
  const auto& g = s.grid;
  for (int i = 0; i < g.n_modes(); ++i) {
    const double kk = detail::k_sq(g, i);
    const double eu = pp.kappa1 * kk * kk;
    const double eb = pp.S * kk;
    for (int c = 0; c < 2; ++c) {
      f.fu[2 * i + c] = eu * s.u[2 * i + c];
      f.fb[2 * i + c] = eb * s.b[2 * i + c];
    }
  }
  return f;
}

// A^delta for |delta| < 1/2; diagonal with eigenvalues to the delta power.
inline SpectralState apply_A_fractional(const SpectralState& s,
                                        const PhysicalParams& pp,
                                        double delta) {
  if (!(std::abs(delta) < 0.5))
    throw std::invalid_argument("fractional exponent must satisfy |delta| < 1/2");
  SpectralState out(s.grid);
  const auto& g = s.grid;
  for (int i = 0; i < g.n_modes(); ++i) {
    const double kk = detail::k_sq(g, i);
    if (kk == 0.0) continue;
    const double eu = std::pow(pp.kappa1 * kk * kk, delta);
    const double eb = std::pow(pp.S * kk, delta);
    for (int c = 0; c < 2; ++c) {
      out.u[2 * i + c] = eu * s.u[2 * i + c];
      out.b[2 * i + c] = eb * s.b[2 * i + c];
    }
  }
  return out;
}

// Sharp constant in lambda |Phi|_H^2 <= |Phi|_V^2 over the retained modes:
// the smallest operator eigenvalue.
inline double poincare_constant(const PhysicalParams& pp,
                                const SpectralGrid& g) {
  double lam = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n_modes(); ++i) {
    const double kk = detail::k_sq(g, i);
    if (kk == 0.0) continue;
    lam = std::min(lam, std::min(pp.kappa1 * kk * kk, pp.S * kk));
  }
  if (!std::isfinite(lam))
    throw std::invalid_argument("grid retains no nonzero mode");
  return lam;
}

// ── eigenvalue tables ──────────────────────────────────────────────────────

struct SpectrumEntry {
  char family;  // 'u' or 'b'
  int k1, k2;
  double value;
};

// All operator eigenvalues on the retained modes (one transverse
// polarization per nonzero k in two dimensions), ascending.
inline std::vector<SpectrumEntry> spectrum_tables(const PhysicalParams& pp,
                                                  const SpectralGrid& g) {
  std::vector<SpectrumEntry> out;
  out.reserve(std::size_t(2) * g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i) {
    const double kk = detail::k_sq(g, i);
    if (kk == 0.0) continue;
    out.push_back({'u', g.k1_of(i), g.k2_of(i), pp.kappa1 * kk * kk});
    out.push_back({'b', g.k1_of(i), g.k2_of(i), pp.S * kk});
  }
  std::sort(out.begin(), out.end(), [](const SpectrumEntry& a,
                                       const SpectrumEntry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.family != b.family) return a.family < b.family;
    if (a.k1 != b.k1) return a.k1 < b.k1;
    return a.k2 < b.k2;
  });
  return out;
}

inline std::size_t count_eigenvalues_leq(const std::vector<SpectrumEntry>& t,
                                         double c) {
  return std::size_t(std::upper_bound(
                         t.begin(), t.end(), c,
                         [](double v, const SpectrumEntry& e) {
                           return v < e.value;
                         }) -
                     t.begin());
}

}  // namespace bmhd
