#pragma once
// Spectral grid for the 2-D periodic box [0, L)^2.
//
// A field is stored as coefficients on the full square of retained integer
// wavevectors k with |k|_inf <= cutoff, in lexicographic (k1, k2) order.
// The cutoff is set by the dealias rule so that quadratic products
// evaluated on the product grid are alias-free:
//   two_thirds       cutoff = floor((N-1)/3),  products on the N   grid
//   three_halves_pad cutoff = N/2 - 1,         products on the 3N/2 grid
// (both satisfy 3*cutoff + 1 <= product grid size, so triple products and
// the trilinear cancellations they feed hold to roundoff).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bmhd {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class DealiasRule { two_thirds, three_halves_pad };

inline std::string to_string(DealiasRule r) {
  return r == DealiasRule::two_thirds ? "two_thirds" : "three_halves_pad";
}

struct SpectralGrid {
  int modes_per_axis = 32;  // N: nominal resolution per axis
  DealiasRule rule = DealiasRule::two_thirds;
  double box = kTwoPi;

  SpectralGrid() = default;
  SpectralGrid(int n, DealiasRule r, double box_size = kTwoPi)
      : modes_per_axis(n), rule(r), box(box_size) {
    validate();
  }

  void validate() const {
    if (modes_per_axis < 4 || modes_per_axis % 2 != 0)
      throw std::invalid_argument("modes_per_axis must be even and >= 4");
    if (!(box > 0.0) || !std::isfinite(box))
      throw std::invalid_argument("box size must be positive and finite");
  }

  // largest retained |k|_inf; 3*cutoff + 1 <= product_grid() so that triple
  // products are alias-free (N/3 itself would let the boundary shell wrap
  // when N is divisible by 3)
  int cutoff() const {
    return rule == DealiasRule::two_thirds ? (modes_per_axis - 1) / 3
                                           : modes_per_axis / 2 - 1;
  }
  int side() const { return 2 * cutoff() + 1; }
  int n_modes() const { return side() * side(); }

  // grid used for pointwise products (alias-free for quadratics)
  int product_grid() const {
    return rule == DealiasRule::two_thirds ? modes_per_axis
                                           : 3 * modes_per_axis / 2;
  }

  double volume() const { return box * box; }
  // physical wavenumber per integer lattice step
  double k_scale() const { return kTwoPi / box; }

  int index(int k1, int k2) const {
    return (k1 + cutoff()) * side() + (k2 + cutoff());
  }
  int k1_of(int idx) const { return idx / side() - cutoff(); }
  int k2_of(int idx) const { return idx % side() - cutoff(); }

  bool operator==(const SpectralGrid& o) const {
    return modes_per_axis == o.modes_per_axis && rule == o.rule && box == o.box;
  }
  bool operator!=(const SpectralGrid& o) const { return !(*this == o); }
};

inline void require_same_grid(const SpectralGrid& a, const SpectralGrid& b,
                              const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace bmhd
