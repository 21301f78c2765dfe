// Command-line driver.  Subcommands cover the whole workflow: integrate a
// run to disk, check the energy identities on a recorded run, probe the
// operator identities, measure absorption into the data-driven ball, and
// track window distances toward the limit set.
//
// Exit codes: 0 checks passed, 1 a check failed, 2 usage or configuration
// error, 3 the integration blew up.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <future>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bmhd/bmhd.hpp"

namespace {

int worker_threads() {
  const char* env = std::getenv("BMHD_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1) {
    std::fprintf(stderr, "warning: ignoring invalid BMHD_THREADS=%s\n", env);
    return 1;
  }
  return int(n);
}

void require_matching_metadata(const bmhd::Trajectory& traj,
                               const bmhd::RunConfig& rc) {
  if (traj.grid != rc.grid)
    throw std::runtime_error("trajectory grid does not match the config");
  const auto& a = traj.params;
  const auto& b = rc.params;
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (!close(a.kappa0, b.kappa0) || !close(a.kappa1, b.kappa1) ||
      !close(a.mu, b.mu) || !close(a.S, b.S) || !close(a.epsilon, b.epsilon) ||
      !close(a.p, b.p))
    throw std::runtime_error("trajectory parameters do not match the config");
}

// A recorded file carries no forcing or projection level; both come from
// the config it was produced with.
bmhd::Trajectory load_run(const std::string& file, const bmhd::RunConfig& rc) {
  bmhd::Trajectory traj = bmhd::read_trajectory(file);
  require_matching_metadata(traj, rc);
  traj.forcing = rc.forcing;
  traj.config.cutoff = rc.solver.cutoff;
  return traj;
}

int cmd_simulate(const std::string& cfg_path, const std::string& out_path) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  const bmhd::SpectralState y0 =
      bmhd::random_state(rc.grid, rc.solver.seed, rc.initial_amplitude,
                         rc.initial_decay, rc.solver.cutoff);
  const bmhd::Trajectory traj =
      bmhd::simulate(y0, rc.forcing, rc.params, rc.solver);
  bmhd::write_trajectory(out_path, traj);
  std::printf("recorded %zu frames, step %.17g, final |y|_H = %.17g\n",
              traj.size(), traj.dt_sample,
              bmhd::h_norm(traj.states.back()));
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_verify_energy(const std::string& file, const std::string& cfg_path,
                      double tol, const std::string& csv) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  const bmhd::Trajectory traj = load_run(file, rc);
  const bmhd::EnergySeries es = bmhd::energy_series(traj);
  double scale = 1.0, worst = 0.0;
  for (std::size_t i = 0; i < es.t.size(); ++i)
    scale = std::max(scale, 1.0 + es.v_sq[i] + es.ap_pair[i] +
                                std::abs(es.g_pair[i]));
  for (double r : es.residual) worst = std::max(worst, std::abs(r));
  if (!csv.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < es.t.size(); ++i)
      rows.push_back({es.t[i], es.h_sq[i], es.v_sq[i], es.ap_pair[i],
                      es.g_pair[i], es.residual[i]});
    bmhd::csv_write(csv, {"t", "h_sq", "v_sq", "ap_pair", "g_pair", "residual"},
                    rows);
    std::printf("wrote %s\n", csv.c_str());
  }
  const bool pass = worst <= tol * scale;
  std::printf("balance residual: max %.6e, scale %.6e, tol %.1e -> %s\n",
              worst, scale, tol, pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int cmd_verify_inequality(const std::string& file, const std::string& cfg_path,
                          double tol) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  const bmhd::Trajectory traj = load_run(file, rc);
  const double lam = bmhd::poincare_constant(rc.params, rc.grid);
  const double omega =
      bmhd::omega_lambda(rc.forcing, rc.params, rc.grid, lam, rc.horizon(),
                         rc.solver.cutoff);
  const auto rep = bmhd::verify_energy_inequality(traj, omega, tol);
  std::printf("lambda = %.17g, Omega = %.17g\n", lam, omega);
  std::printf(
      "exponential inequality: %zu pairs, worst margin %.6e at (tau, t) = "
      "(%.6g, %.6g) -> %s\n",
      rep.pairs_checked, rep.worst_margin, rep.tau_worst, rep.t_worst,
      rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_verify_apriori(const std::string& file, const std::string& cfg_path,
                       double tol) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  const bmhd::Trajectory traj = load_run(file, rc);
  const auto rep = bmhd::check_apriori_bound(traj, tol);
  std::printf("a priori bound: worst margin %.6e at t = %.6g -> %s\n",
              rep.worst_margin, rep.t_worst, rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_props_operators(const std::string& cfg_path, int samples,
                        std::uint64_t seed) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  const auto& g = rc.grid;
  const auto& pp = rc.params;
  bool all = true;
  auto line = [&](const char* what, double value, double tol) {
    const bool ok = value <= tol;
    all = all && ok;
    std::printf("%-34s %.3e (tol %.1e) -> %s\n", what, value, tol,
                ok ? "PASS" : "FAIL");
  };

  double pairing = 0.0, dual = 0.0, anti = 0.0, riesz = 0.0;
  for (int j = 0; j < samples; ++j) {
    const auto s1 = bmhd::random_state(g, seed + 4 * std::uint64_t(j));
    const auto s2 = bmhd::random_state(g, seed + 4 * std::uint64_t(j) + 1);
    const auto s3 = bmhd::random_state(g, seed + 4 * std::uint64_t(j) + 2);
    const double v2 = bmhd::v_norm_sq(s1, pp);
    pairing = std::max(
        pairing, std::abs(bmhd::pair_dual(bmhd::apply_A(s1, pp), s1) - v2) / v2);
    dual = std::max(dual, std::abs(bmhd::dual_norm(bmhd::apply_A(s1, pp), pp) -
                                   bmhd::v_norm(s1, pp)) /
                              bmhd::v_norm(s1, pp));
    const double b0 = bmhd::trilinear_b0(s1, s2, s2, pp);
    anti = std::max(anti, std::abs(b0) / (bmhd::h_norm(s1) *
                                          bmhd::v_norm_sq(s2, pp)));
    const double lhs = bmhd::pair_dual(bmhd::apply_B(s1, s2, pp), s3);
    const double rhs = bmhd::trilinear_b0(s1, s2, s3, pp);
    const double den = bmhd::h_norm(s1) * bmhd::v_norm(s2, pp) *
                       bmhd::v_norm(s3, pp);
    riesz = std::max(riesz, std::abs(lhs - rhs) / den);
  }
  line("pairing <A y, y> = |y|_V^2", pairing, 1e-12);
  line("dual norm |A y|_{V*} = |y|_V", dual, 1e-12);
  line("antisymmetry b0(y, z, z) = 0", anti, 1e-12);
  line("form matches operator", riesz, 1e-12);

  const auto mono = bmhd::verify_monotonicity(pp, g, samples, seed + 1000000);
  line("stress operator monotone", std::max(0.0, -mono.min_normalized), 1e-12);
  const auto bounds = bmhd::verify_constitutive_bounds(pp, samples, seed);
  std::printf("%-34s nu1 = %.6g, nu2 = %.6g -> %s\n",
              "tensor ellipticity range", bounds.nu1_hat, bounds.nu2_hat,
              bounds.pass ? "PASS" : "FAIL");
  all = all && bounds.pass;

  std::printf("operators: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}

int cmd_absorbing(const std::string& cfg_path, int ensemble,
                  const std::string& csv) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  struct Row {
    std::uint64_t seed;
    bmhd::AbsorbingEstimate est;
    bmhd::AbsorbingReport rep;
  };
  auto one = [&](std::uint64_t seed) {
    const auto y0 = bmhd::random_state(rc.grid, seed, rc.initial_amplitude,
                                       rc.initial_decay, rc.solver.cutoff);
    const auto traj = bmhd::simulate(y0, rc.forcing, rc.params, rc.solver);
    Row row;
    row.seed = seed;
    row.est = bmhd::absorbing_estimate(rc.params, rc.grid, rc.forcing,
                                       bmhd::h_norm_sq(traj.states.front()),
                                       rc.horizon(), rc.solver.cutoff);
    row.rep = bmhd::verify_absorbing(traj, row.est);
    return row;
  };

  const int threads = worker_threads();
  std::vector<Row> rows;
  rows.resize(std::size_t(ensemble));
  for (int base = 0; base < ensemble; base += threads) {
    std::vector<std::future<Row>> batch;
    for (int j = base; j < std::min(ensemble, base + threads); ++j)
      batch.push_back(std::async(std::launch::async, one,
                                 rc.solver.seed + std::uint64_t(j)));
    for (int j = base; j < std::min(ensemble, base + threads); ++j)
      rows[std::size_t(j)] = batch[std::size_t(j - base)].get();
  }

  bool all = true;
  std::vector<std::vector<double>> csv_rows;
  for (const auto& row : rows) {
    all = all && row.rep.pass;
    std::printf(
        "seed %llu: |y0|^2 = %.6g, R0 = %.6g, entry %.4g (allowed %.4g), "
        "tail margin %.3e -> %s\n",
        static_cast<unsigned long long>(row.seed), row.est.y0_sq, row.est.R0,
        row.rep.entry_measured, row.rep.entry_allowed, row.rep.att_set1_worst,
        row.rep.pass ? "PASS" : "FAIL");
    csv_rows.push_back({double(row.seed), row.est.y0_sq, row.est.lambda,
                        row.est.omega, row.est.R0, row.est.entry_time,
                        row.rep.entry_measured, row.rep.entry_allowed,
                        row.rep.att_set1_worst, row.rep.stay_worst,
                        row.rep.pass ? 1.0 : 0.0});
  }
  if (!csv.empty()) {
    bmhd::csv_write(csv,
                    {"seed", "y0_sq", "lambda", "omega", "R0", "entry_pred",
                     "entry_meas", "entry_allowed", "tail_margin",
                     "stay_margin", "pass"},
                    csv_rows);
    std::printf("wrote %s\n", csv.c_str());
  }
  std::printf("absorbing: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}

int cmd_attractor(const std::string& file, const std::string& cfg_path,
                  double delta, double window, const std::string& csv) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  const bmhd::Trajectory traj = load_run(file, rc);
  const double d = delta >= 0.0 ? delta : rc.delta;
  const double span = window > 0.0 ? window : rc.window_span;
  const auto pts =
      bmhd::omega_limit_approx(traj, rc.t_cutoff, rc.spacing, span, d);
  if (pts.empty())
    throw std::runtime_error("run too short for two windows after the cutoff");
  std::vector<double> dist;
  std::vector<std::vector<double>> rows;
  for (const auto& p : pts) {
    dist.push_back(p.dist);
    rows.push_back({p.t, p.dist});
    std::printf("t = %8.4g  dist = %.10e\n", p.t, p.dist);
  }
  if (!csv.empty()) {
    bmhd::csv_write(csv, {"t", "dist"}, rows);
    std::printf("wrote %s\n", csv.c_str());
  }
  const auto rep = bmhd::omega_limit_monotone_check(dist);
  std::printf(
      "window distances: noise %.3e, worst excess %.3e -> %s\n", rep.noise,
      rep.worst_excess, rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_spectrum(const std::string& cfg_path, int count) {
  const bmhd::RunConfig rc = bmhd::load_config(cfg_path);
  const auto table = bmhd::spectrum_tables(rc.params, rc.grid);
  std::printf("lambda = %.17g, %zu eigenvalues retained\n",
              bmhd::poincare_constant(rc.params, rc.grid), table.size());
  const std::size_t n = std::min<std::size_t>(table.size(), std::size_t(count));
  for (std::size_t i = 0; i < n; ++i)
    std::printf("%4zu  %c (%3d, %3d)  %.17g\n", i, table[i].family,
                table[i].k1, table[i].k2, table[i].value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral laboratory for a coupled dissipative system"};
  app.require_subcommand(1);

  std::string cfg_path, file_path, out_path, csv_path;
  double tol = 1e-6, energy_tol = 1e-2;
  double delta = -1.0, window = -1.0;
  int samples = 200, ensemble = 3, count = 16;
  std::uint64_t seed = 42;

  auto* sim = app.add_subcommand("simulate", "integrate a run and record it");
  sim->add_option("config", cfg_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("-o,--output", out_path, "output trajectory file")
      ->required();

  auto* verify = app.add_subcommand("verify", "check identities on a run");
  verify->require_subcommand(1);
  auto* ve = verify->add_subcommand("energy", "discrete balance residual");
  auto* vi = verify->add_subcommand("inequality", "exponential inequality");
  auto* va = verify->add_subcommand("apriori", "a priori bound");
  for (auto* v : {ve, vi, va}) {
    v->add_option("file", file_path, "recorded trajectory")
        ->required()
        ->check(CLI::ExistingFile);
    v->add_option("config", cfg_path, "config the run was produced with")
        ->required()
        ->check(CLI::ExistingFile);
  }
  ve->add_option("--tol", energy_tol, "relative residual tolerance");
  ve->add_option("-o,--output", csv_path, "write the series as CSV");
  vi->add_option("--tol", tol, "relative margin tolerance");
  va->add_option("--tol", tol, "relative margin tolerance");

  auto* props = app.add_subcommand("props", "randomized structure checks");
  props->require_subcommand(1);
  auto* po = props->add_subcommand("operators", "operator identities");
  po->add_option("config", cfg_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  po->add_option("--samples", samples, "random samples per identity");
  po->add_option("--seed", seed, "base seed");

  auto* ab = app.add_subcommand("absorbing", "absorbing estimate vs. runs");
  ab->add_option("config", cfg_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  ab->add_option("--ensemble", ensemble, "number of seeded runs");
  ab->add_option("-o,--output", csv_path, "write per-run results as CSV");

  auto* at = app.add_subcommand("attractor", "window distances on a run");
  at->add_option("file", file_path, "recorded trajectory")
      ->required()
      ->check(CLI::ExistingFile);
  at->add_option("config", cfg_path, "config the run was produced with")
      ->required()
      ->check(CLI::ExistingFile);
  at->add_option("--delta", delta, "fractional exponent override");
  at->add_option("--window", window, "window span override");
  at->add_option("-o,--output", csv_path, "write distances as CSV");

  auto* sp = app.add_subcommand("spectrum", "operator eigenvalue table");
  sp->add_option("config", cfg_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sp->add_option("--count", count, "entries to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(cfg_path, out_path);
    if (ve->parsed())
      return cmd_verify_energy(file_path, cfg_path, energy_tol, csv_path);
    if (vi->parsed()) return cmd_verify_inequality(file_path, cfg_path, tol);
    if (va->parsed()) return cmd_verify_apriori(file_path, cfg_path, tol);
    if (po->parsed()) return cmd_props_operators(cfg_path, samples, seed);
    if (ab->parsed()) return cmd_absorbing(cfg_path, ensemble, csv_path);
    if (at->parsed())
      return cmd_attractor(file_path, cfg_path, delta, window, csv_path);
    if (sp->parsed()) return cmd_spectrum(cfg_path, count);
  } catch (const bmhd::blow_up_error& e) {
    std::fprintf(stderr, "blow-up at t = %.6g: %s\n", e.time, e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
