#pragma once
// Small numeric utilities shared across the library.

#include <cstddef>
#include <vector>

namespace bmhd {

// Pairwise (cascade) summation: deterministic association order with
// O(log n) roundoff growth.  All norm and quadrature reductions go through
// this so results are bit-stable run to run.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

}  // namespace bmhd
