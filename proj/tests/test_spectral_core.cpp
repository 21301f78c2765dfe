#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bmhd/grid.hpp"
#include "bmhd/norms.hpp"
#include "bmhd/params.hpp"
#include "bmhd/state.hpp"
#include "bmhd/util.hpp"

using namespace bmhd;

namespace {

// shear state u = (0, cos(x1)): coefficients 1/2 at k = (1, 0) and (-1, 0)
SpectralState shear_state(const SpectralGrid& g) {
  SpectralState s(g);
  s.u[2 * g.index(1, 0) + 1] = 0.5;
  s.u[2 * g.index(-1, 0) + 1] = 0.5;
  return s;
}

}  // namespace

TEST_CASE("grid indexing and cutoffs") {
  SpectralGrid g;
  g.modes_per_axis = 32;
  REQUIRE(g.cutoff() == 10);
  REQUIRE(g.side() == 21);
  REQUIRE(g.n_modes() == 441);
  REQUIRE(g.product_grid() == 32);

  SpectralGrid gp = g;
  gp.rule = DealiasRule::three_halves_pad;
  REQUIRE(gp.cutoff() == 15);
  REQUIRE(gp.product_grid() == 48);

  // the product grid resolves triple products of retained modes exactly
  REQUIRE(g.product_grid() >= 3 * g.cutoff() + 1);
  REQUIRE(gp.product_grid() >= 3 * gp.cutoff() + 1);

  for (int k1 = -g.cutoff(); k1 <= g.cutoff(); ++k1)
    for (int k2 = -g.cutoff(); k2 <= g.cutoff(); ++k2) {
      const int i = g.index(k1, k2);
      REQUIRE(g.k1_of(i) == k1);
      REQUIRE(g.k2_of(i) == k2);
    }

  REQUIRE(g.volume() == Catch::Approx(kTwoPi * kTwoPi).epsilon(1e-15));

  SpectralGrid bad;
  bad.modes_per_axis = 7;
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("synthesis of a single mode is the plane wave") {
  SpectralGrid g;
  g.modes_per_axis = 16;
  ScalarCoeffs f(std::size_t(g.n_modes()), 0.0);
  f[std::size_t(g.index(2, -1))] = {0.5, 0.25};
  f[std::size_t(g.index(-2, 1))] = {0.5, -0.25};
  const int m = g.product_grid();
  const GridField v = to_grid(f, g, m);
  const double h = kTwoPi / double(m);
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double x1 = h * a, x2 = h * b;
      const double want = 2.0 * (0.5 * std::cos(2 * x1 - x2) -
                                 0.25 * std::sin(2 * x1 - x2));
      worst = std::max(worst, std::abs(v[std::size_t(a) * m + b] - want));
    }
  REQUIRE(worst < 1e-13);

  // analysis inverts synthesis exactly on the retained modes
  const ScalarCoeffs back = from_grid(v, g, m);
  double diff = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    diff = std::max(diff, std::abs(back[i] - f[i]));
  REQUIRE(diff < 1e-14);
}

TEST_CASE("quadrature matches Parseval") {
  SpectralGrid g;
  g.modes_per_axis = 24;
  const SpectralState s = random_state(g, 31, 1.0, 0.3);
  const ScalarCoeffs c = component(s.u, 0, g);
  const int m = g.product_grid();
  const GridField v = to_grid(c, g, m);
  GridField sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  double sum = 0.0;
  for (const auto& z : c) sum += std::norm(z);
  REQUIRE(grid_integral(sq, g) ==
          Catch::Approx(g.volume() * sum).epsilon(1e-12));
}

TEST_CASE("projection removes divergence and the mean mode") {
  SpectralGrid g;
  g.modes_per_axis = 16;
  Rng rng(5);
  Coeffs f(2 * std::size_t(g.n_modes()));
  for (auto& z : f) z = rng.complex_normal();
  enforce_reality(f, g);
  leray_project(f, g);
  double worst = 0.0;
  for (int i = 0; i < g.n_modes(); ++i) {
    const double k1 = g.k1_of(i), k2 = g.k2_of(i);
    worst = std::max(worst,
                     std::abs(k1 * f[2 * i] + k2 * f[2 * i + 1]));
  }
  REQUIRE(worst < 1e-13);
  REQUIRE(std::abs(f[2 * g.index(0, 0)]) == 0.0);
  REQUIRE(std::abs(f[2 * g.index(0, 0) + 1]) == 0.0);

  // idempotent up to the rounding of the subtracted normal component
  Coeffs h = f;
  leray_project(h, g);
  double drift = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    drift = std::max(drift, std::abs(h[i] - f[i]));
  REQUIRE(drift <= 1e-14);
}

TEST_CASE("reality enforcement makes coefficients hermitian") {
  SpectralGrid g;
  g.modes_per_axis = 12;
  Rng rng(6);
  Coeffs f(2 * std::size_t(g.n_modes()));
  for (auto& z : f) z = rng.complex_normal();
  enforce_reality(f, g);
  double worst = 0.0;
  for (int i = 0; i < g.n_modes(); ++i) {
    const int j = g.index(-g.k1_of(i), -g.k2_of(i));
    for (int c = 0; c < 2; ++c)
      worst = std::max(worst,
                       std::abs(f[2 * i + c] - std::conj(f[2 * j + c])));
  }
  REQUIRE(worst < 1e-15);
}

TEST_CASE("norm oracles on the shear mode") {
  SpectralGrid g;
  g.modes_per_axis = 16;
  const SpectralState s = shear_state(g);
  const double vol = g.volume();

  // |u|_H^2 = vol / 2, |u|_1^2 = vol / 4, curl seminorm of u as if it
  // were a b-field would be vol / 2
  REQUIRE(h_norm_sq(s) == Catch::Approx(0.5 * vol).epsilon(1e-14));
  REQUIRE(u_seminorm1_sq(s) == Catch::Approx(0.25 * vol).epsilon(1e-14));

  // gradient-of-strain over full second derivatives: 1 / sqrt(2)
  const double h2_sq = vol * 1.0 * (0.25 + 0.25);  // |k|^4 sum over the pair
  REQUIRE(std::sqrt(u_seminorm1_sq(s)) / std::sqrt(h2_sq) ==
          Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  PhysicalParams pp;
  REQUIRE(v_norm_sq(s, pp) ==
          Catch::Approx(2.0 * pp.kappa1 * 0.25 * vol).epsilon(1e-14));

  SpectralState b(g);
  b.b = s.u;
  REQUIRE(b_seminorm2_sq(b) == Catch::Approx(0.5 * vol).epsilon(1e-14));
}

TEST_CASE("operator pairing identities hold to roundoff") {
  SpectralGrid g;
  g.modes_per_axis = 20;
  PhysicalParams pp;
  pp.kappa1 = 0.7;
  pp.S = 1.3;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SpectralState s = random_state(g, seed, 1.0, 0.4);
    const DualElement As = apply_A(s, pp);
    const double v2 = v_norm_sq(s, pp);
    REQUIRE(pair_dual(As, s) == Catch::Approx(v2).epsilon(1e-13));
    REQUIRE(dual_norm(As, pp) ==
            Catch::Approx(v_norm(s, pp)).epsilon(1e-13));
  }
}

TEST_CASE("dual norm oracle on one conjugate pair") {
  SpectralGrid g;
  g.modes_per_axis = 16;
  PhysicalParams pp;  // kappa1 = 1
  DualElement f(g);
  const std::complex<double> amp(0.3, -0.4);  // |amp| = 0.5
  f.fu[2 * g.index(1, 0) + 1] = amp;
  f.fu[2 * g.index(-1, 0) + 1] = std::conj(amp);
  const double want = std::sqrt(2.0) * 0.5 * std::sqrt(g.volume());
  REQUIRE(dual_norm(f, pp) == Catch::Approx(want).epsilon(1e-14));
}

TEST_CASE("sharpest eigenvalue is the spectral gap") {
  SpectralGrid g;
  g.modes_per_axis = 16;
  PhysicalParams pp;
  pp.kappa1 = 0.3;
  pp.S = 0.8;
  REQUIRE(poincare_constant(pp, g) == Catch::Approx(0.3).epsilon(1e-15));
  pp.kappa1 = 2.0;
  REQUIRE(poincare_constant(pp, g) == Catch::Approx(0.8).epsilon(1e-15));

  // halving the box doubles the wavenumbers
  SpectralGrid small = g;
  small.box = 0.5 * kTwoPi;
  REQUIRE(poincare_constant(pp, small) ==
          Catch::Approx(std::min(2.0 * 16.0, 0.8 * 4.0)).epsilon(1e-13));
}

TEST_CASE("eigenvalue table is sorted and counts agree") {
  SpectralGrid g;
  g.modes_per_axis = 16;
  PhysicalParams pp;
  const auto table = spectrum_tables(pp, g);
  REQUIRE(table.size() == std::size_t(2 * (g.n_modes() - 1)));
  for (std::size_t i = 1; i < table.size(); ++i)
    REQUIRE(table[i - 1].value <= table[i].value);
  // |k|^2 = 1 gives four modes, each with both families at value 1
  REQUIRE(count_eigenvalues_leq(table, 1.0) == 8);
  REQUIRE(count_eigenvalues_leq(table, 1.9999) == 8);
  // adds the four b-eigenvalues at |k|^2 = 2
  REQUIRE(count_eigenvalues_leq(table, 2.0) == 12);
  REQUIRE(count_eigenvalues_leq(table, 0.5) == 0);
}

TEST_CASE("fractional powers compose and are log-convex") {
  SpectralGrid g;
  g.modes_per_axis = 12;
  PhysicalParams pp;
  pp.kappa1 = 0.9;
  pp.S = 1.7;
  const SpectralState s = random_state(g, 77, 1.0, 0.2);

  const SpectralState twice =
      apply_A_fractional(apply_A_fractional(s, pp, 0.2), pp, 0.2);
  const SpectralState once = apply_A_fractional(s, pp, 0.4);
  REQUIRE(h_norm_sq(twice - once) < 1e-24 * h_norm_sq(once));

  // t -> log |A^t s|_H^2 is convex in the exponent
  std::vector<double> logs;
  for (int j = -4; j <= 4; ++j)
    logs.push_back(std::log(
        h_norm_sq(apply_A_fractional(s, pp, 0.1 * double(j)))));
  for (std::size_t i = 1; i + 1 < logs.size(); ++i)
    REQUIRE(logs[i - 1] - 2.0 * logs[i] + logs[i + 1] >= -1e-10);

  REQUIRE_THROWS_AS(apply_A_fractional(s, pp, 0.5), std::invalid_argument);
}

TEST_CASE("random states are reproducible and projection-compatible") {
  SpectralGrid g;
  g.modes_per_axis = 16;
  const SpectralState a = random_state(g, 99, 0.7, 0.3);
  const SpectralState b = random_state(g, 99, 0.7, 0.3);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    diff = std::max(diff, std::abs(a.u[i] - b.u[i]));
    diff = std::max(diff, std::abs(a.b[i] - b.b[i]));
  }
  REQUIRE(diff == 0.0);

  // drawing with a mode limit equals truncating the full draw
  const SpectralState full = random_state(g, 99, 0.7, 0.3);
  SpectralState cut = random_state(g, 99, 0.7, 0.3, 3);
  Coeffs fu = full.u, fb = full.b;
  truncate_above(fu, g, 3);
  truncate_above(fb, g, 3);
  for (std::size_t i = 0; i < fu.size(); ++i) {
    REQUIRE(cut.u[i] == fu[i]);
    REQUIRE(cut.b[i] == fb[i]);
  }

  // divergence-free and hermitian by construction
  double div = 0.0;
  for (int i = 0; i < g.n_modes(); ++i)
    div = std::max(div, std::abs(double(g.k1_of(i)) * a.u[2 * i] +
                                 double(g.k2_of(i)) * a.u[2 * i + 1]));
  REQUIRE(div < 1e-13);
}

TEST_CASE("embedding into a finer grid preserves every norm") {
  SpectralGrid coarse, fine;
  coarse.modes_per_axis = 16;
  fine.modes_per_axis = 32;
  PhysicalParams pp;
  const SpectralState s = random_state(coarse, 2024, 1.0, 0.4);
  const SpectralState e = embed_state(s, fine);
  REQUIRE(h_norm_sq(e) == Catch::Approx(h_norm_sq(s)).epsilon(1e-14));
  REQUIRE(v_norm_sq(e, pp) == Catch::Approx(v_norm_sq(s, pp)).epsilon(1e-14));
  REQUIRE(u_seminorm1_sq(e) ==
          Catch::Approx(u_seminorm1_sq(s)).epsilon(1e-14));
}

TEST_CASE("pairwise summation is accurate") {
  std::vector<double> xs;
  Rng rng(123);
  long double want = 0.0L;
  for (int i = 0; i < 10007; ++i) {
    xs.push_back(rng.normal() * std::pow(10.0, (i % 7) - 3));
    want += xs.back();
  }
  REQUIRE(pairwise_sum(xs) ==
          Catch::Approx(double(want)).epsilon(1e-13));
}
