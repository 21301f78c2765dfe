#pragma once
// Time-dependent forcing: a finite sum of single-mode terms
//   g(x, t) = sum_n c_n(t) [ a_n e^{i k_n . x} + conj(a_n) e^{-i k_n . x} ]
// aimed at the velocity or the magnetic component.  Amplitudes are Leray
// projected at construction, so every term is zero-mean and divergence
// free; the conjugate mode keeps g real.
//
// Profiles c(t): constant 1, cos(omega t + phase), exp(-rate t), or a
// tabulated series with linear interpolation (evaluation outside the
// tabulated range is an error, not an extrapolation).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "norms.hpp"
#include "params.hpp"
#include "state.hpp"

namespace bmhd {

enum class ProfileKind { constant, sinusoid, decaying, tabulated };

struct ForcingTerm {
  char target = 'u';  // 'u' or 'b'
  int k1 = 0, k2 = 0;
  std::array<std::complex<double>, 2> amp{};  // divergence-free by projection
  ProfileKind kind = ProfileKind::constant;
  double omega = 0.0, phase = 0.0, rate = 0.0;
  std::vector<double> times, values;  // tabulated samples
};

class Forcing {
 public:
  Forcing() = default;

  void add_term(ForcingTerm t) {
    if (t.target != 'u' && t.target != 'b')
      throw std::invalid_argument("forcing target must be 'u' or 'b'");
    if (t.k1 == 0 && t.k2 == 0)
      throw std::invalid_argument("forcing mode k = 0 breaks zero mean");
    if (t.kind == ProfileKind::tabulated) {
      if (t.times.size() != t.values.size() || t.times.size() < 2)
        throw std::invalid_argument("tabulated profile needs matching samples");
      for (std::size_t i = 1; i < t.times.size(); ++i)
        if (!(t.times[i] > t.times[i - 1]))
          throw std::invalid_argument("tabulated times must increase");
    }
    if (t.kind == ProfileKind::decaying && t.rate < 0.0)
      throw std::invalid_argument("decay rate must be nonnegative");
    // Leray projection of the amplitude
    const double kk = double(t.k1) * t.k1 + double(t.k2) * t.k2;
    const std::complex<double> kv =
        (double(t.k1) * t.amp[0] + double(t.k2) * t.amp[1]) / kk;
    t.amp[0] -= double(t.k1) * kv;
    t.amp[1] -= double(t.k2) * kv;
    terms_.push_back(std::move(t));
  }

  bool empty() const { return terms_.empty(); }
  const std::vector<ForcingTerm>& terms() const { return terms_; }

  double profile_value(const ForcingTerm& t, double time) const {
    switch (t.kind) {
      case ProfileKind::constant:
        return 1.0;
      case ProfileKind::sinusoid:
        return std::cos(t.omega * time + t.phase);
      case ProfileKind::decaying:
        return std::exp(-t.rate * time);
      case ProfileKind::tabulated: {
        if (time < t.times.front() - 1e-12 || time > t.times.back() + 1e-12)
          throw std::out_of_range(
              "tabulated profile evaluated outside its range at t = " +
              std::to_string(time));
        const double tc =
            std::min(std::max(time, t.times.front()), t.times.back());
        auto it = std::upper_bound(t.times.begin(), t.times.end(), tc);
        std::size_t hi = std::min(std::size_t(it - t.times.begin()),
                                  t.times.size() - 1);
        if (hi == 0) hi = 1;
        const std::size_t lo = hi - 1;
        const double w = (tc - t.times[lo]) / (t.times[hi] - t.times[lo]);
        return (1.0 - w) * t.values[lo] + w * t.values[hi];
      }
    }
    return 0.0;
  }

  // Dense functional on the retained square, modes above m dropped
  // (m < 0 keeps the full square).  Terms beyond the grid cutoff are a
  // configuration error.
  DualElement eval(double time, const SpectralGrid& g, int m = -1) const {
    DualElement f(g);
    const int K = g.cutoff();
    const int mm = m < 0 ? K : m;
    for (const auto& t : terms_) {
      if (std::abs(t.k1) > K || std::abs(t.k2) > K)
        throw std::invalid_argument("forcing mode outside the retained square");
      if (std::abs(t.k1) > mm || std::abs(t.k2) > mm) continue;
      const double c = profile_value(t, time);
      Coeffs& dst = t.target == 'u' ? f.fu : f.fb;
      const int i = g.index(t.k1, t.k2);
      const int j = g.index(-t.k1, -t.k2);
      for (int comp = 0; comp < 2; ++comp) {
        dst[2 * i + comp] += c * t.amp[comp];
        dst[2 * j + comp] += c * std::conj(t.amp[comp]);
      }
    }
    return f;
  }

  // |g(t)|_{V*}^2 evaluated sparsely over the terms (cross terms at a
  // shared mode included).
  double dual_norm_sq(double time, const PhysicalParams& pp,
                      const SpectralGrid& g, int m = -1) const {
    struct Slot {
      char target;
      int k1, k2;
      std::array<std::complex<double>, 2> val{};
    };
    std::vector<Slot> slots;
    const int K = g.cutoff();
    const int mm = m < 0 ? K : m;
    auto put = [&](char target, int k1, int k2,
                   const std::array<std::complex<double>, 2>& v) {
      for (auto& s : slots)
        if (s.target == target && s.k1 == k1 && s.k2 == k2) {
          s.val[0] += v[0];
          s.val[1] += v[1];
          return;
        }
      slots.push_back({target, k1, k2, v});
    };
    for (const auto& t : terms_) {
      if (std::abs(t.k1) > K || std::abs(t.k2) > K)
        throw std::invalid_argument("forcing mode outside the retained square");
      if (std::abs(t.k1) > mm || std::abs(t.k2) > mm) continue;
      const double c = profile_value(t, time);
      put(t.target, t.k1, t.k2, {c * t.amp[0], c * t.amp[1]});
      put(t.target, -t.k1, -t.k2,
          {c * std::conj(t.amp[0]), c * std::conj(t.amp[1])});
    }
    const double ks = g.k_scale();
    double out = 0.0;
    for (const auto& s : slots) {
      const double kk = ks * ks * (double(s.k1) * s.k1 + double(s.k2) * s.k2);
      const double mag = std::norm(s.val[0]) + std::norm(s.val[1]);
      const double w =
          s.target == 'u' ? pp.kappa1 * kk * kk : pp.S * kk;
      out += mag / w;
    }
    return out * g.volume();
  }

  // The forcing seen from a clock offset by t0: g'(t) = g(t + t0).
  Forcing shifted(double t0) const {
    Forcing out;
    for (auto t : terms_) {
      switch (t.kind) {
        case ProfileKind::constant:
          break;
        case ProfileKind::sinusoid:
          t.phase += t.omega * t0;
          break;
        case ProfileKind::decaying: {
          const double s = std::exp(-t.rate * t0);
          t.amp[0] *= s;
          t.amp[1] *= s;
          break;
        }
        case ProfileKind::tabulated:
          for (auto& x : t.times) x -= t0;
          break;
      }
      out.terms_.push_back(std::move(t));
    }
    return out;
  }

 private:
  std::vector<ForcingTerm> terms_;
};

}  // namespace bmhd
