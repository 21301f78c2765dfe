// End-to-end acceptance checks.  Each check prints one [PASS]/[FAIL] line
// with its key measured quantities; the process exits nonzero if any check
// fails.  Checks are numbered for stable reference from CI logs.
//
// Usage: acceptance [--tool <path-to-cli>] [--scratch <dir>]
//
// The optional --tool argument points at the command line driver so the
// determinism check can exercise the real binary; without it the same
// code path is driven in process.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "bmhd/bmhd.hpp"

namespace {

using namespace bmhd;
namespace fs = std::filesystem;

struct Check {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string note;

  Check(int i, std::string n) : id(i), name(std::move(n)) {}
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// |f|_H of a single vector field, matching the state norm convention.
double field_h(const Coeffs& c, const SpectralGrid& g) {
  double acc = 0.0;
  for (const auto& z : c) acc += std::norm(z);
  return std::sqrt(g.volume() * acc);
}

SpectralState velocity_shear(const SpectralGrid& g, double amp) {
  SpectralState s(g);
  s.u[2 * g.index(1, 0) + 1] = 0.5 * amp;
  s.u[2 * g.index(-1, 0) + 1] = 0.5 * amp;
  return s;
}

Trajectory subsample(const Trajectory& tr, std::size_t stride) {
  Trajectory out = tr;
  out.states.clear();
  for (std::size_t i = 0; i < tr.size(); i += stride)
    out.states.push_back(tr.states[i]);
  out.dt_sample = tr.dt_sample * double(stride);
  return out;
}

// Runs recorded by the simulation-heavy checks; the a priori sweep at the
// end re-examines every one of them.
std::vector<Trajectory> g_runs;

// ---------------------------------------------------------------- check 1

Check check_trilinear_identities() {
  Check c{1, "trilinear cancellation and antisymmetry"};
  const auto t0 = std::chrono::steady_clock::now();
  SpectralGrid g;
  g.modes_per_axis = 32;
  PhysicalParams pp;
  pp.mu = 1.3;
  double worst = 0.0;
  for (int j = 0; j < 200; ++j) {
    const SpectralState s1 = random_state(g, 42 + 3 * std::uint64_t(j));
    const SpectralState s2 = random_state(g, 43 + 3 * std::uint64_t(j));
    const SpectralState s3 = random_state(g, 44 + 3 * std::uint64_t(j));
    const double nu1 = field_h(s1.u, g), nu2 = field_h(s2.u, g),
                 nu3 = field_h(s3.u, g);
    const double h1 = h_norm(s1), h2 = h_norm(s2), h3 = h_norm(s3);

    const double cancel_b = std::fabs(trilinear_b(s1.u, s2.u, s2.u, g));
    worst = std::max(worst, cancel_b / (nu1 * nu2 * nu2));
    const double anti_b = std::fabs(trilinear_b(s1.u, s2.u, s3.u, g) +
                                    trilinear_b(s1.u, s3.u, s2.u, g));
    worst = std::max(worst, anti_b / (nu1 * nu2 * nu3));

    const double cancel_b0 = std::fabs(trilinear_b0(s1, s2, s2, pp));
    worst = std::max(worst, cancel_b0 / (h1 * h2 * h2));
    const double anti_b0 = std::fabs(trilinear_b0(s1, s2, s3, pp) +
                                     trilinear_b0(s1, s3, s2, pp));
    worst = std::max(worst, anti_b0 / (h1 * h2 * h3));
  }
  const double el = seconds_since(t0);
  c.pass = worst <= 1e-11 && el < 30.0;
  c.note = fmt("worst normalized value %.2e vs 1e-11, %.1f s", worst, el);
  return c;
}

// ---------------------------------------------------------------- check 2

Check check_operator_monotonicity() {
  Check c{2, "p-structure operator monotonicity"};
  const auto t0 = std::chrono::steady_clock::now();
  SpectralGrid g;
  g.modes_per_axis = 32;
  double worst_op = 0.0, worst_tensor = 0.0;
  bool pass = true;
  for (double p : {1.2, 1.5, 2.0, 2.5}) {
    PhysicalParams pp;
    pp.p = p;
    const auto rep = verify_monotonicity(pp, g, 500, 42);
    pass = pass && rep.pass;
    worst_op = std::min(worst_op, rep.min_normalized);

    Rng rng(97 + std::uint64_t(p * 10));
    for (int j = 0; j < 10000; ++j) {
      const Sym2 d1 = detail::random_sym2(rng, 10.0);
      const Sym2 d2 = detail::random_sym2(rng, 10.0);
      const double lhs = contract(stress(d1, pp) - stress(d2, pp), d1 - d2);
      const double scale =
          2.0 * pp.kappa0 * std::pow(1.0 + frob(d1) + frob(d2), p);
      worst_tensor = std::min(worst_tensor, lhs / scale);
    }
  }
  const double el = seconds_since(t0);
  pass = pass && worst_tensor >= -1e-12 && el < 60.0;
  c.pass = pass;
  c.note = fmt("operator min %.2e, tensor min %.2e vs -1e-12, %.1f s",
               worst_op, worst_tensor, el);
  return c;
}

// ---------------------------------------------------------------- check 3

Check check_constitutive_bounds() {
  Check c{3, "constitutive Hessian bounds"};
  bool pass = true;
  double nu1_min = std::numeric_limits<double>::infinity();
  double nu2_max = 0.0;
  for (double p : {1.2, 1.5, 2.0, 2.5}) {
    PhysicalParams pp;
    pp.p = p;
    const auto rep = verify_constitutive_bounds(pp, 10000, 777, 10.0);
    pass = pass && rep.pass && rep.nu1_hat > 0.0 &&
           std::isfinite(rep.nu2_hat);
    nu1_min = std::min(nu1_min, rep.nu1_hat);
    nu2_max = std::max(nu2_max, rep.nu2_hat);
  }
  // p = 2 with unit coefficients makes the Hessian the identity.
  PhysicalParams iso;
  const auto rep = verify_constitutive_bounds(iso, 10000, 778, 10.0);
  const double id_err =
      std::max(std::fabs(rep.nu1_hat - 1.0), std::fabs(rep.nu2_hat - 1.0));
  pass = pass && id_err <= 1e-6;
  c.pass = pass;
  c.note = fmt("nu1 min %.3g, nu2 max %.3g, identity error %.2e vs 1e-6",
               nu1_min, nu2_max, id_err);
  return c;
}

// ---------------------------------------------------------------- check 4

Check check_single_mode_decay() {
  Check c{4, "single-mode decay rate and scheme orders"};
  SpectralGrid g;
  g.modes_per_axis = 16;
  Forcing none;
  const double amp = 0.5;
  bool pass = true;
  double rate_err_worst = 0.0;

  // Decay rate of the shear mode k = (1,0): kappa1 |k|^4 + kappa0 |k|^2.
  PhysicalParams pp;
  for (auto sch : {TimeScheme::if_rk2, TimeScheme::if_rk4}) {
    GalerkinConfig cfg;
    cfg.scheme = sch;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.record_stride = 1000;
    const Trajectory tr = simulate(velocity_shear(g, amp), none, pp, cfg);
    const double c0 = tr.states.front().u[2 * g.index(1, 0) + 1].real();
    const double cT = tr.states.back().u[2 * g.index(1, 0) + 1].real();
    const double rate = -std::log(cT / c0) / tr.span();
    rate_err_worst = std::max(rate_err_worst, std::fabs(rate - 1.5) / 1.5);
    if (sch == TimeScheme::if_rk2) g_runs.push_back(tr);
  }
  pass = pass && rate_err_worst <= 1e-4;

  // Convergence orders on the stiffer variant (2 kappa0 = 20) whose exact
  // solution decays at rate 11; the default explicit part is too small to
  // lift the fourth-order error above roundoff.
  PhysicalParams stiff;
  stiff.kappa0 = 10.0;
  const SpectralState exact = velocity_shear(g, amp * std::exp(-11.0));
  double orders[2][2] = {};
  int si = 0;
  for (auto sch : {TimeScheme::if_rk2, TimeScheme::if_rk4}) {
    double err[3];
    int i = 0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      GalerkinConfig cfg;
      cfg.scheme = sch;
      cfg.dt = dt;
      cfg.t_end = 1.0;
      cfg.record_stride = int(std::llround(1.0 / dt));
      Trajectory tr = simulate(velocity_shear(g, amp), none, stiff, cfg);
      SpectralState d = tr.states.back();
      d -= exact;
      err[i++] = h_norm(d);
    }
    orders[si][0] = std::log2(err[0] / err[1]);
    orders[si][1] = std::log2(err[1] / err[2]);
    ++si;
  }
  pass = pass && orders[0][0] >= 1.8 && orders[0][0] <= 2.3 &&
         orders[0][1] >= 1.8 && orders[0][1] <= 2.3 &&
         orders[1][0] >= 3.6 && orders[1][1] >= 3.6;
  c.pass = pass;
  c.note = fmt("rate err %.2e vs 1e-4, rk2 orders %.2f %.2f, rk4 %.2f %.2f",
               rate_err_worst, orders[0][0], orders[0][1], orders[1][0],
               orders[1][1]);
  return c;
}

// ---------------------------------------------------------------- check 5

Check check_residual_refinement() {
  Check c{5, "energy residual refinement order"};
  SpectralGrid g;
  g.modes_per_axis = 32;
  PhysicalParams pp;
  Forcing f;
  ForcingTerm t1;
  t1.target = 'u';
  t1.k1 = 1;
  t1.k2 = 1;
  t1.amp = {std::complex<double>(0.2, 0.1), std::complex<double>(-0.1, 0.0)};
  t1.kind = ProfileKind::sinusoid;
  t1.omega = 1.5;
  f.add_term(t1);
  ForcingTerm t2;
  t2.target = 'b';
  t2.k1 = 0;
  t2.k2 = 2;
  t2.amp = {std::complex<double>(0.15, 0.0), std::complex<double>(0.0, 0.0)};
  f.add_term(t2);
  const SpectralState y0 = random_state(g, 5000, 0.4, 0.8, 2);

  double I[3];
  int i = 0;
  for (double dt : {8e-3, 4e-3, 2e-3}) {
    GalerkinConfig cfg;
    cfg.scheme = TimeScheme::if_rk4;
    cfg.dt = dt;
    cfg.t_end = 5.0;
    cfg.record_stride = 1;
    const Trajectory tr = simulate(y0, f, pp, cfg);
    const EnergySeries es = energy_series(tr);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < es.residual.size(); ++j)
      acc += 0.5 * (std::fabs(es.residual[j]) + std::fabs(es.residual[j + 1])) *
             tr.dt_sample;
    I[i++] = acc;
    if (dt == 2e-3) g_runs.push_back(subsample(tr, 5));
  }
  const double o1 = std::log2(I[0] / I[1]), o2 = std::log2(I[1] / I[2]);
  c.pass = o1 >= 1.8 && o2 >= 1.8;
  c.note = fmt("integrals %.2e %.2e %.2e, orders %.2f %.2f vs 1.8", I[0], I[1],
               I[2], o1, o2);
  return c;
}

// ------------------------------------------------------------- checks 6, 7

Forcing ensemble_forcing(int r) {
  const double a = 0.15 + 0.03 * r;
  Forcing f;
  ForcingTerm t1;
  t1.target = 'u';
  t1.k1 = 1;
  t1.k2 = 0;
  t1.amp = {std::complex<double>(0.0, 0.0), std::complex<double>(a, 0.0)};
  f.add_term(t1);
  ForcingTerm t2;
  t2.target = 'b';
  t2.k1 = 1;
  t2.k2 = 1;
  t2.amp = {std::complex<double>(0.6 * a, 0.0),
            std::complex<double>(-0.2 * a, 0.0)};
  f.add_term(t2);
  return f;
}

Check check_energy_inequality() {
  Check c{6, "exponential energy inequality"};
  SpectralGrid g;
  g.modes_per_axis = 16;
  const double p_cycle[5] = {1.5, 2.0, 2.5, 1.2, 2.2};
  bool pass = true;
  double worst = std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  for (int r = 0; r < 10; ++r) {
    PhysicalParams pp;
    pp.p = p_cycle[r % 5];
    const Forcing f = ensemble_forcing(r);
    const SpectralState y0 = random_state(g, 600 + std::uint64_t(r), 1.0, 0.5);
    GalerkinConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 20.0;
    cfg.record_stride = 25;
    const Trajectory tr = simulate(y0, f, pp, cfg);
    const double lam = poincare_constant(pp, g);
    const double om = omega_lambda(f, pp, g, lam, cfg.t_end);
    const auto rep = verify_energy_inequality(tr, om);
    pass = pass && rep.pass;
    worst = std::min(worst, rep.worst_margin);
    pairs += rep.pairs_checked;
    g_runs.push_back(tr);
  }

  // Unforced runs stay inside the slightly loosened decay envelope.
  double env_worst = std::numeric_limits<double>::infinity();
  int ei = 0;
  for (double p : {1.5, 2.5}) {
    PhysicalParams pp;
    pp.p = p;
    Forcing none;
    const SpectralState y0 =
        random_state(g, 650 + std::uint64_t(ei++), 1.0, 0.5);
    GalerkinConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 6.0;
    cfg.record_stride = 25;
    const Trajectory tr = simulate(y0, none, pp, cfg);
    const double lam = poincare_constant(pp, g);
    const double h0 = h_norm_sq(tr.states.front());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double t = tr.time(i);
      if (t < 1.0) continue;
      const double envelope = h0 * std::exp(-0.95 * lam * t);
      env_worst =
          std::min(env_worst, (envelope - h_norm_sq(tr.states[i])) / envelope);
    }
    g_runs.push_back(tr);
  }
  pass = pass && env_worst >= 0.0;
  c.pass = pass;
  c.note = fmt("worst margin %.2e over %zu pairs, envelope margin %.2f",
               worst, pairs, env_worst);
  return c;
}

Check check_forcing_intensity() {
  Check c{7, "forcing intensity closed forms"};
  SpectralGrid g;
  g.modes_per_axis = 16;
  PhysicalParams pp;
  const Forcing f = ensemble_forcing(0);
  const double direct = f.dual_norm_sq(0.0, pp, g);
  const double om = omega_lambda(f, pp, g, poincare_constant(pp, g), 20.0);
  const double rel = std::fabs(om - direct) / direct;
  const double zero = omega_lambda(Forcing{}, pp, g, 1.0, 20.0);
  c.pass = rel <= 1e-8 && zero == 0.0;
  c.note = fmt("constant rel err %.2e vs 1e-8, zero forcing %.1g", rel, zero);
  return c;
}

// ---------------------------------------------------------------- check 9

Check check_absorbing_entry() {
  Check c{9, "absorbing ball entry"};
  const auto t0 = std::chrono::steady_clock::now();
  SpectralGrid g;
  g.modes_per_axis = 32;
  bool pass = true;
  std::string detail;
  for (double p : {1.5, 2.5}) {
    PhysicalParams pp;
    pp.p = p;
    // Constant forcing scaled to unit dual norm.
    Forcing probe;
    ForcingTerm t;
    t.target = 'u';
    t.k1 = 1;
    t.k2 = 0;
    t.amp = {std::complex<double>(0.0, 0.0), std::complex<double>(1.0, 0.0)};
    probe.add_term(t);
    t.amp[1] *= 1.0 / std::sqrt(probe.dual_norm_sq(0.0, pp, g));
    Forcing f;
    f.add_term(t);
    for (double y : {1.0, 10.0, 100.0}) {
      SpectralState y0 = random_state(g, 4242, 1.0);
      y0 *= y / h_norm(y0);
      const auto est = absorbing_estimate(pp, g, f, y * y, 13.0);
      GalerkinConfig cfg;
      cfg.dt = 5e-4;
      cfg.t_end = 13.0;
      cfg.record_stride = 100;
      const Trajectory tr = simulate(y0, f, pp, cfg);
      const auto rep = verify_absorbing(tr, est);
      pass = pass && rep.pass;
      if (p == 2.5 && y == 100.0)
        detail = fmt("stiffest entry %.2f vs allowed %.2f, tail margin %.1e",
                     rep.entry_measured, rep.entry_allowed, rep.att_set1_worst);
      g_runs.push_back(tr);
    }
  }
  const double el = seconds_since(t0);
  pass = pass && el < 600.0;
  c.pass = pass;
  c.note = detail + fmt(", %.0f s vs 600", el);
  return c;
}

// --------------------------------------------------------------- check 10

Check check_limit_set_diagnostics() {
  Check c{10, "limit set diagnostics"};
  SpectralGrid g;
  g.modes_per_axis = 16;
  PhysicalParams pp;

  // Time-periodic forcing, period 1: window distances settle monotonically.
  Forcing f;
  ForcingTerm t;
  t.target = 'u';
  t.k1 = 1;
  t.k2 = 1;
  t.amp = {std::complex<double>(0.12, 0.0), std::complex<double>(0.0, 0.08)};
  t.kind = ProfileKind::sinusoid;
  t.omega = kTwoPi;
  f.add_term(t);
  const SpectralState y0 = random_state(g, 1010, 0.5, 0.5);
  GalerkinConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 12.0;
  cfg.record_stride = 10;
  const Trajectory tr = simulate(y0, f, pp, cfg);
  const auto pts = omega_limit_approx(tr, 4.0, 1.0, 1.0, 0.25);
  std::vector<double> d;
  for (const auto& pt : pts) d.push_back(pt.dist);
  const auto mon = omega_limit_monotone_check(d);
  g_runs.push_back(tr);

  // Unforced: the section norm decays at essentially the spectral rate.
  Forcing none;
  const SpectralState z0 = random_state(g, 2020, 0.8, 0.5);
  GalerkinConfig c2;
  c2.dt = 1e-3;
  c2.t_end = 8.0;
  c2.record_stride = 50;
  const Trajectory dec = simulate(z0, none, pp, c2);
  const std::size_t w = std::size_t(std::llround(1.0 / dec.dt_sample)) + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int ti = 1; ti <= 6; ++ti) {
    const double dist = section_norm_neg(dec, std::size_t(ti) * 20, w, 0.25);
    const double x = double(ti), yv = std::log(dist);
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    ++n;
  }
  const double rate =
      -(double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
  const double lam = poincare_constant(pp, g);
  g_runs.push_back(dec);

  c.pass = mon.pass && !d.empty() && rate >= 0.95 * lam;
  c.note = fmt("%zu distances, noise %.1e, excess %.1e, decay rate %.3f vs %.3f",
               d.size(), mon.noise, mon.worst_excess, rate, 0.95 * lam);
  return c;
}

// --------------------------------------------------------------- check 11

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

bool states_equal(const SpectralState& a, const SpectralState& b) {
  return a.u == b.u && a.b == b.b;
}

Check check_persistence(const std::string& tool, const fs::path& scratch) {
  Check c{11, "persistence and determinism"};
  bool pass = true;
  std::string note;

  SpectralGrid g;
  g.modes_per_axis = 16;
  PhysicalParams pp;
  pp.p = 1.7;
  pp.mu = 2.5;
  const Forcing f = ensemble_forcing(3);
  GalerkinConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  cfg.record_stride = 10;
  const Trajectory tr =
      simulate(random_state(g, 31, 0.7, 0.5), f, pp, cfg);

  // Round trip is bit exact.
  const fs::path file = scratch / "roundtrip.bmhd";
  write_trajectory(file.string(), tr);
  const Trajectory back = read_trajectory(file.string());
  bool same = back.size() == tr.size() && back.grid == tr.grid &&
              back.dt_sample == tr.dt_sample;
  for (std::size_t i = 0; same && i < tr.size(); ++i)
    same = states_equal(back.states[i], tr.states[i]);
  pass = pass && same;
  note += same ? "round trip exact" : "round trip differs";

  // A corrupted byte is rejected.
  auto bytes = slurp(file);
  bytes[bytes.size() / 2] = char(bytes[bytes.size() / 2] ^ 0x5A);
  const fs::path bad = scratch / "corrupt.bmhd";
  std::ofstream(bad, std::ios::binary).write(bytes.data(), long(bytes.size()));
  bool rejected = false;
  try {
    read_trajectory(bad.string());
  } catch (const std::exception&) {
    rejected = true;
  }
  pass = pass && rejected;
  note += rejected ? ", corruption rejected" : ", corruption accepted";

  // Identical seeds give byte-identical files.
  const fs::path o1 = scratch / "det1.bmhd", o2 = scratch / "det2.bmhd";
  write_trajectory(o1.string(), simulate(random_state(g, 31, 0.7, 0.5), f, pp, cfg));
  write_trajectory(o2.string(), simulate(random_state(g, 31, 0.7, 0.5), f, pp, cfg));
  const bool lib_same = slurp(o1) == slurp(o2);
  pass = pass && lib_same;
  note += lib_same ? ", library reruns identical" : ", library reruns differ";

  if (!tool.empty()) {
    const fs::path cfgf = scratch / "det.cfg";
    std::ofstream out(cfgf);
    out << "[grid]\nmodes_per_axis = 16\n\n[params]\np = 1.7\nmu = 2.5\n\n"
        << "[forcing]\nterms = 1\n1.target = u\n1.k = 1 0\n"
        << "1.amplitude = 0 0 0.24 0\n1.profile = constant\n\n"
        << "[solver]\ndt = 0.002\nt_end = 0.1\nrecord_stride = 10\n"
        << "seed = 31\ninitial_amplitude = 0.7\n";
    out.close();
    const fs::path c1 = scratch / "cli1.bmhd", c2 = scratch / "cli2.bmhd";
    const std::string base = "\"" + tool + "\" simulate \"" + cfgf.string() +
                             "\" -o \"";
    const int r1 = std::system((base + c1.string() + "\"").c_str());
    const int r2 = std::system((base + c2.string() + "\"").c_str());
    const bool cli_same = r1 == 0 && r2 == 0 && slurp(c1) == slurp(c2) &&
                          !slurp(c1).empty();
    pass = pass && cli_same;
    note += cli_same ? ", cli reruns identical" : ", cli reruns differ";
  }
  c.pass = pass;
  c.note = note;
  return c;
}

// ---------------------------------------------------------------- check 8

Check check_apriori_sweep() {
  Check c{8, "a priori energy bound on all runs"};
  bool pass = !g_runs.empty();
  double worst = std::numeric_limits<double>::infinity();
  for (const Trajectory& tr : g_runs) {
    const auto rep = check_apriori_bound(tr);
    pass = pass && rep.pass;
    worst = std::min(worst, rep.worst_margin);
  }
  c.pass = pass;
  c.note = fmt("%zu runs, worst margin %.2e", g_runs.size(), worst);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::string tool;
  fs::path scratch = fs::temp_directory_path() / "bmhd_acceptance";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--tool") tool = argv[i + 1];
    else if (key == "--scratch") scratch = argv[i + 1];
  }
  std::error_code ec;
  fs::create_directories(scratch, ec);

  std::vector<Check> checks;
  checks.push_back(check_trilinear_identities());
  checks.push_back(check_operator_monotonicity());
  checks.push_back(check_constitutive_bounds());
  checks.push_back(check_single_mode_decay());
  checks.push_back(check_residual_refinement());
  checks.push_back(check_energy_inequality());
  checks.push_back(check_forcing_intensity());
  checks.push_back(check_absorbing_entry());
  checks.push_back(check_limit_set_diagnostics());
  checks.push_back(check_persistence(tool, scratch));
  checks.push_back(check_apriori_sweep());

  std::sort(checks.begin(), checks.end(),
            [](const Check& a, const Check& b) { return a.id < b.id; });
  int failures = 0;
  for (const Check& c : checks) {
    if (!c.pass) ++failures;
    std::printf("[%s] %02d %s (%s)\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.note.c_str());
  }
  std::printf("%zu checks, %d failed\n", checks.size(), failures);
  return failures == 0 ? 0 : 1;
}
