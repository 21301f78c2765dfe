#pragma once
// Cached-plan wrapper around FFTW's 2-D complex transforms.
//
// Conventions used throughout the library:
//   physical grid   x_j = (L/M) * j,  j = 0..M-1 per axis, row-major (x1, x2)
//   synthesis       f(x) = sum_k fhat(k) e^{i k.x}   (FFTW backward, no scale)
//   analysis        fhat(k) = (1/M^2) sum_j f(x_j) e^{-i k.x_j}
//
// Plan caches are thread-local; FFTW's planner is serialized by a global
// mutex.  Each cached entry owns an fftw_malloc-aligned buffer and the data
// is copied in and out, so callers keep ordinary std::vector storage.

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bmhd {
namespace detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftCache {
 public:
  FftCache() = default;
  FftCache(const FftCache&) = delete;
  FftCache& operator=(const FftCache&) = delete;

  ~FftCache() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto& [key, e] : entries_) {
      fftw_destroy_plan(e.plan);
      fftw_free(e.buf);
    }
  }

  // In-place 2-D transform of an m*m complex array; sign is FFTW_FORWARD
  // or FFTW_BACKWARD.  Unnormalized, like FFTW itself.
  void transform(std::complex<double>* data, int m, int sign) {
    Entry& e = get(m, sign);
    const std::size_t bytes = sizeof(fftw_complex) * std::size_t(m) * m;
    std::memcpy(e.buf, static_cast<const void*>(data), bytes);
    fftw_execute(e.plan);
    std::memcpy(static_cast<void*>(data), e.buf, bytes);
  }

 private:
  struct Entry {
    fftw_plan plan;
    fftw_complex* buf;
  };

  Entry& get(int m, int sign) {
    auto it = entries_.find({m, sign});
    if (it != entries_.end()) return it->second;
    Entry e;
    e.buf = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * std::size_t(m) * m));
    if (!e.buf) throw std::bad_alloc();
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      e.plan = fftw_plan_dft_2d(m, m, e.buf, e.buf, sign, FFTW_ESTIMATE);
    }
    if (!e.plan) {
      fftw_free(e.buf);
      throw std::runtime_error("fftw plan creation failed");
    }
    return entries_.emplace(std::pair<int, int>{m, sign}, e).first->second;
  }

  std::map<std::pair<int, int>, Entry> entries_;
};

inline FftCache& fft_cache() {
  thread_local FftCache cache;
  return cache;
}

inline void fft2(std::complex<double>* data, int m, int sign) {
  fft_cache().transform(data, m, sign);
}

}  // namespace detail
}  // namespace bmhd
