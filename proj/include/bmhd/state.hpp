#pragma once
// State of the coupled system: a velocity field u and a magnetic field b,
// both zero-mean and divergence-free, stored as Fourier coefficients on the
// retained mode square of a SpectralGrid.
//
// Layout: coeff[2*idx + c] is component c of mode idx (lexicographic k).
// Reality holds as the data invariant  coeff(-k) = conj(coeff(k)).
//
// A DualElement carries a functional in the same coefficient layout; its
// value on a state is the L^2 pairing.  Dual elements are kept Leray
// projected, which is the canonical representative when only divergence
// free test fields matter.

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace bmhd {

using Coeffs = std::vector<std::complex<double>>;  // size 2 * n_modes

// ── field-level helpers ────────────────────────────────────────────────────

inline Coeffs zero_field(const SpectralGrid& g) {
  return Coeffs(std::size_t(2) * g.n_modes());
}

// Removes the gradient part mode-wise: v <- v - k (k.v)/|k|^2.  The mean
// mode is dropped; the state space carries zero-mean fields only.
inline void leray_project(Coeffs& f, const SpectralGrid& g) {
  for (int idx = 0; idx < g.n_modes(); ++idx) {
    const double k1 = g.k1_of(idx);
    const double k2 = g.k2_of(idx);
    const double kk = k1 * k1 + k2 * k2;
    auto& v1 = f[2 * idx];
    auto& v2 = f[2 * idx + 1];
    if (kk == 0.0) {
      v1 = 0.0;
      v2 = 0.0;
      continue;
    }
    const std::complex<double> kv = (k1 * v1 + k2 * v2) / kk;
    v1 -= k1 * kv;
    v2 -= k2 * kv;
  }
}

// Symmetrizes the conjugate pairs exactly: f(-k) <- conj(f(k)) average.
inline void enforce_reality(Coeffs& f, const SpectralGrid& g) {
  const int K = g.cutoff();
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
      const int i = g.index(k1, k2);
      const int j = g.index(-k1, -k2);
      for (int c = 0; c < 2; ++c) {
        if (i == j) {
          f[2 * i + c] = std::complex<double>(f[2 * i + c].real(), 0.0);
          continue;
        }
        const std::complex<double> avg =
            0.5 * (f[2 * i + c] + std::conj(f[2 * j + c]));
        f[2 * i + c] = avg;
        f[2 * j + c] = std::conj(avg);
      }
    }
}

// Zeroes every mode with |k|_inf > m.
inline void truncate_above(Coeffs& f, const SpectralGrid& g, int m) {
  for (int idx = 0; idx < g.n_modes(); ++idx) {
    const int k1 = g.k1_of(idx);
    const int k2 = g.k2_of(idx);
    if (std::abs(k1) > m || std::abs(k2) > m) {
      f[2 * idx] = 0.0;
      f[2 * idx + 1] = 0.0;
    }
  }
}

// ── scalar transforms ──────────────────────────────────────────────────────
// A "scalar" here is one coefficient per mode (size n_modes).

using ScalarCoeffs = std::vector<std::complex<double>>;
using GridField = std::vector<double>;  // M*M row-major physical samples

inline void check_grid_size(const SpectralGrid& g, int m) {
  if (m % 2 != 0) throw std::invalid_argument("physical grid size must be even");
  if (m < g.side())
    throw std::invalid_argument("physical grid too small for retained modes");
}

// synthesis on an m x m grid (values of the trigonometric polynomial)
inline GridField to_grid(const ScalarCoeffs& f, const SpectralGrid& g, int m) {
  check_grid_size(g, m);
  std::vector<std::complex<double>> work(std::size_t(m) * m);
  const int K = g.cutoff();
  for (int k1 = -K; k1 <= K; ++k1) {
    const int i1 = (k1 % m + m) % m;
    for (int k2 = -K; k2 <= K; ++k2) {
      const int i2 = (k2 % m + m) % m;
      work[std::size_t(i1) * m + i2] = f[std::size_t(g.index(k1, k2))];
    }
  }
  detail::fft2(work.data(), m, FFTW_BACKWARD);
  GridField out(std::size_t(m) * m);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = work[j].real();
  return out;
}

// analysis: retained coefficients of the m x m sample set
inline ScalarCoeffs from_grid(const GridField& v, const SpectralGrid& g, int m) {
  check_grid_size(g, m);
  if (v.size() != std::size_t(m) * m)
    throw std::invalid_argument("physical sample count mismatch");
  std::vector<std::complex<double>> work(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) work[j] = v[j];
  detail::fft2(work.data(), m, FFTW_FORWARD);
  const double scale = 1.0 / (double(m) * m);
  ScalarCoeffs out(g.n_modes());
  const int K = g.cutoff();
  for (int k1 = -K; k1 <= K; ++k1) {
    const int i1 = (k1 % m + m) % m;
    for (int k2 = -K; k2 <= K; ++k2) {
      const int i2 = (k2 % m + m) % m;
      out[std::size_t(g.index(k1, k2))] = scale * work[std::size_t(i1) * m + i2];
    }
  }
  return out;
}

inline ScalarCoeffs component(const Coeffs& f, int c, const SpectralGrid& g) {
  ScalarCoeffs out(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i) out[i] = f[2 * i + c];
  return out;
}

// Physical samples of both components of a vector field.
inline std::array<GridField, 2> field_to_grid(const Coeffs& f,
                                              const SpectralGrid& g, int m) {
  return {to_grid(component(f, 0, g), g, m), to_grid(component(f, 1, g), g, m)};
}

// mean of samples times the box volume == integral for alias-free content
inline double grid_integral(const GridField& v, const SpectralGrid& g) {
  return pairwise_sum(v) * g.volume() / double(v.size());
}

// ── state types ────────────────────────────────────────────────────────────

struct SpectralState {
  SpectralGrid grid;
  Coeffs u, b;

  SpectralState() = default;
  explicit SpectralState(const SpectralGrid& g)
      : grid(g), u(zero_field(g)), b(zero_field(g)) {}

  SpectralState& operator+=(const SpectralState& o) {
    require_same_grid(grid, o.grid, "state sum");
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += o.u[i];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += o.b[i];
    return *this;
  }
  SpectralState& operator-=(const SpectralState& o) {
    require_same_grid(grid, o.grid, "state difference");
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= o.u[i];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= o.b[i];
    return *this;
  }
  SpectralState& operator*=(double a) {
    for (auto& z : u) z *= a;
    for (auto& z : b) z *= a;
    return *this;
  }
};

inline SpectralState operator+(SpectralState a, const SpectralState& b) {
  return a += b;
}
inline SpectralState operator-(SpectralState a, const SpectralState& b) {
  return a -= b;
}
inline SpectralState operator*(double s, SpectralState a) { return a *= s; }

struct DualElement {
  SpectralGrid grid;
  Coeffs fu, fb;

  DualElement() = default;
  explicit DualElement(const SpectralGrid& g)
      : grid(g), fu(zero_field(g)), fb(zero_field(g)) {}

  DualElement& operator+=(const DualElement& o) {
    require_same_grid(grid, o.grid, "dual sum");
    for (std::size_t i = 0; i < fu.size(); ++i) fu[i] += o.fu[i];
    for (std::size_t i = 0; i < fb.size(); ++i) fb[i] += o.fb[i];
    return *this;
  }
  DualElement& operator-=(const DualElement& o) {
    require_same_grid(grid, o.grid, "dual difference");
    for (std::size_t i = 0; i < fu.size(); ++i) fu[i] -= o.fu[i];
    for (std::size_t i = 0; i < fb.size(); ++i) fb[i] -= o.fb[i];
    return *this;
  }
  DualElement& operator*=(double a) {
    for (auto& z : fu) z *= a;
    for (auto& z : fb) z *= a;
    return *this;
  }
};

inline DualElement operator+(DualElement a, const DualElement& b) {
  return a += b;
}
inline DualElement operator-(DualElement a, const DualElement& b) {
  return a -= b;
}
inline DualElement operator*(double s, DualElement a) { return a *= s; }

inline void leray_project(SpectralState& s) {
  leray_project(s.u, s.grid);
  leray_project(s.b, s.grid);
}
inline void leray_project(DualElement& f) {
  leray_project(f.fu, f.grid);
  leray_project(f.fb, f.grid);
}

// ── construction utilities ─────────────────────────────────────────────────

// Random zero-mean divergence-free state with spectral profile
// amplitude * exp(-decay |k|^2), reality built in by mirroring.  Modes with
// |k|_inf > m are left empty (m < 0 means the full retained square).
inline SpectralState random_state(const SpectralGrid& g, std::uint64_t seed,
                                  double amplitude = 1.0, double decay = 0.5,
                                  int m = -1) {
  SpectralState s(g);
  Rng rng(seed);
  const int K = g.cutoff();
  const int mm = m < 0 ? K : m;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
      // consume deviates in a fixed order, independent of the cutoff
      std::array<std::complex<double>, 4> z;
      for (auto& w : z) w = rng.complex_normal();
      if (std::abs(k1) > mm || std::abs(k2) > mm) continue;
      const double env = amplitude * std::exp(-decay * double(k1 * k1 + k2 * k2));
      const int i = g.index(k1, k2);
      const int j = g.index(-k1, -k2);
      for (int c = 0; c < 2; ++c) {
        s.u[2 * i + c] = env * z[c];
        s.u[2 * j + c] = std::conj(s.u[2 * i + c]);
        s.b[2 * i + c] = env * z[2 + c];
        s.b[2 * j + c] = std::conj(s.b[2 * i + c]);
      }
    }
  leray_project(s);
  return s;
}

// Copies retained modes into a grid with at least the same cutoff.
inline SpectralState embed_state(const SpectralState& s,
                                 const SpectralGrid& fine) {
  if (fine.box != s.grid.box)
    throw std::invalid_argument("embed: box size mismatch");
  if (fine.cutoff() < s.grid.cutoff())
    throw std::invalid_argument("embed: target cutoff too small");
  SpectralState out(fine);
  const int K = s.grid.cutoff();
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      const int i = s.grid.index(k1, k2);
      const int j = fine.index(k1, k2);
      for (int c = 0; c < 2; ++c) {
        out.u[2 * j + c] = s.u[2 * i + c];
        out.b[2 * j + c] = s.b[2 * i + c];
      }
    }
  return out;
}

}  // namespace bmhd
