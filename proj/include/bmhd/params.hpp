#pragma once
// Physical parameters of the coupled velocity/magnetic system.
//
//   kappa0  strength of the monotone p-structure stress
//   kappa1  bi-Laplacian (higher-order) viscosity
//   mu      coupling strength of the magnetic terms
//   S       magnetic diffusivity
//   epsilon regularization inside the stress, (epsilon + |D|^2)^((p-2)/2)
//   p       structure exponent, 1 < p <= (2n+6)/(n+2) = 2.5 for n = 2
//
// Derived exponents for the growth estimates: q = 2p - 2 and the
// interpolation weight a with q*a = (q(2+n) - 2n)/4, i.e. q*a = q - 1 in
// two dimensions.  At the admissible boundary p = 2.5 one has q*a = 2
// exactly; the time Hoelder step degenerates to an identity there and the
// condition is flagged rather than rejected.

#include <cmath>
#include <stdexcept>

namespace bmhd {

inline constexpr int kDim = 2;
inline constexpr double kPMax = 2.5;  // (2n+6)/(n+2) at n = 2

struct PhysicalParams {
  double kappa0 = 0.5;
  double kappa1 = 1.0;
  double mu = 1.0;
  double S = 1.0;
  double epsilon = 1.0;
  double p = 2.0;

  PhysicalParams() = default;
  PhysicalParams(double k0, double k1, double mu_, double S_, double eps,
                 double p_)
      : kappa0(k0), kappa1(k1), mu(mu_), S(S_), epsilon(eps), p(p_) {
    validate();
  }

  void validate() const {
    auto pos = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("parameter ") + name +
                                    " must be positive and finite");
    };
    pos(kappa0, "kappa0");
    pos(kappa1, "kappa1");
    pos(mu, "mu");
    pos(S, "S");
    pos(epsilon, "epsilon");
    if (!std::isfinite(p) || p <= 1.0 || p > kPMax)
      throw std::invalid_argument("parameter p must lie in (1, 2.5]");
  }

  double q() const { return 2.0 * p - 2.0; }
  // q*a = q - 1 in two dimensions
  double a() const { return (q() - 1.0) / q(); }
  bool qa_boundary() const { return q() * a() >= 2.0 - 1e-12; }
};

}  // namespace bmhd
