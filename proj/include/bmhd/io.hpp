#pragma once
// On-disk formats: the BMHD1 trajectory container, the run configuration
// file, and small CSV helpers.
//
// BMHD1 layout, little-endian throughout:
//   bytes 0..4   magic "BMHD1"
//   u32          container version (1)
//   u32          spatial dimension (2)
//   u32          modes per axis
//   u32          dealias rule (0 = two_thirds, 1 = three_halves_pad)
//   f64          box length
//   f64 x 6      kappa0, kappa1, mu, S, epsilon, p
//   u64          frame count
//   f64          recording step
//   frames       time f64, then per retained mode in lexicographic
//                (k1, k2) order: u1 re, u1 im, u2 re, u2 im,
//                b1 re, b1 im, b2 re, b2 im
//   u32          CRC-32 (zlib polynomial) of every preceding byte
//
// Readers reject wrong magic, truncation, and checksum mismatch, so a
// trajectory either round-trips bit for bit or fails loudly.

#include <zlib.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "galerkin.hpp"

namespace bmhd {

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

// ── binary container ────────────────────────────────────────────────────────

namespace detail {

class CrcWriter {
 public:
  explicit CrcWriter(const std::string& path)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), std::streamsize(n));
    crc_ = crc32(crc_, static_cast<const Bytef*>(p), uInt(n));
  }
  template <class T>
  void put(T v) {
    raw(&v, sizeof v);
  }
  void finish() {
    const std::uint32_t c = std::uint32_t(crc_);
    out_.write(reinterpret_cast<const char*>(&c), sizeof c);
    out_.flush();
    if (!out_) throw std::runtime_error("write failed");
  }

 private:
  std::ofstream out_;
  uLong crc_ = crc32(0L, Z_NULL, 0);
};

class CrcReader {
 public:
  explicit CrcReader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open for reading: " + path);
  }
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), std::streamsize(n));
    if (std::size_t(in_.gcount()) != n)
      throw std::runtime_error("truncated file");
    crc_ = crc32(crc_, static_cast<const Bytef*>(p), uInt(n));
  }
  template <class T>
  T get() {
    T v;
    raw(&v, sizeof v);
    return v;
  }
  void check_footer() {
    std::uint32_t stored;
    in_.read(reinterpret_cast<char*>(&stored), sizeof stored);
    if (std::size_t(in_.gcount()) != sizeof stored)
      throw std::runtime_error("truncated file");
    if (stored != std::uint32_t(crc_))
      throw std::runtime_error("checksum mismatch");
    if (in_.peek() != std::char_traits<char>::eof())
      throw std::runtime_error("trailing bytes after checksum");
  }

 private:
  std::ifstream in_;
  uLong crc_ = crc32(0L, Z_NULL, 0);
};

}  // namespace detail

inline void write_trajectory(const std::string& path, const Trajectory& traj) {
  detail::CrcWriter w(path);
  w.raw("BMHD1", 5);
  w.put<std::uint32_t>(1);
  w.put<std::uint32_t>(2);
  w.put<std::uint32_t>(std::uint32_t(traj.grid.modes_per_axis));
  w.put<std::uint32_t>(traj.grid.rule == DealiasRule::two_thirds ? 0 : 1);
  w.put<double>(traj.grid.box);
  const auto& pp = traj.params;
  for (double v : {pp.kappa0, pp.kappa1, pp.mu, pp.S, pp.epsilon, pp.p})
    w.put<double>(v);
  w.put<std::uint64_t>(traj.states.size());
  w.put<double>(traj.dt_sample);
  const int nm = traj.grid.n_modes();
  for (std::size_t f = 0; f < traj.states.size(); ++f) {
    w.put<double>(traj.time(f));
    const auto& s = traj.states[f];
    for (int i = 0; i < nm; ++i) {
      for (int c = 0; c < 2; ++c) {
        w.put<double>(s.u[2 * i + c].real());
        w.put<double>(s.u[2 * i + c].imag());
      }
      for (int c = 0; c < 2; ++c) {
        w.put<double>(s.b[2 * i + c].real());
        w.put<double>(s.b[2 * i + c].imag());
      }
    }
  }
  w.finish();
}

inline Trajectory read_trajectory(const std::string& path) {
  detail::CrcReader r(path);
  char magic[5];
  r.raw(magic, 5);
  if (std::memcmp(magic, "BMHD1", 5) != 0)
    throw std::runtime_error("not a BMHD1 file");
  if (r.get<std::uint32_t>() != 1)
    throw std::runtime_error("unsupported container version");
  if (r.get<std::uint32_t>() != 2)
    throw std::runtime_error("unsupported spatial dimension");
  Trajectory traj;
  traj.grid.modes_per_axis = int(r.get<std::uint32_t>());
  const std::uint32_t rule = r.get<std::uint32_t>();
  if (rule > 1) throw std::runtime_error("unknown dealias rule id");
  traj.grid.rule =
      rule == 0 ? DealiasRule::two_thirds : DealiasRule::three_halves_pad;
  traj.grid.box = r.get<double>();
  traj.grid.validate();
  auto& pp = traj.params;
  pp.kappa0 = r.get<double>();
  pp.kappa1 = r.get<double>();
  pp.mu = r.get<double>();
  pp.S = r.get<double>();
  pp.epsilon = r.get<double>();
  pp.p = r.get<double>();
  pp.validate();
  const std::uint64_t frames = r.get<std::uint64_t>();
  if (frames > (std::uint64_t(1) << 32))
    throw std::runtime_error("implausible frame count");
  traj.dt_sample = r.get<double>();
  if (frames > 1 && !(traj.dt_sample > 0.0))
    throw std::runtime_error("recording step must be positive");
  const int nm = traj.grid.n_modes();
  traj.states.reserve(frames);
  for (std::uint64_t f = 0; f < frames; ++f) {
    const double t = r.get<double>();
    if (std::abs(t - traj.dt_sample * double(f)) > 1e-9 * (1.0 + std::abs(t)))
      throw std::runtime_error("frame time off the recording grid");
    SpectralState s(traj.grid);
    for (int i = 0; i < nm; ++i) {
      for (int c = 0; c < 2; ++c) {
        const double re = r.get<double>(), im = r.get<double>();
        s.u[2 * i + c] = {re, im};
      }
      for (int c = 0; c < 2; ++c) {
        const double re = r.get<double>(), im = r.get<double>();
        s.b[2 * i + c] = {re, im};
      }
    }
    traj.states.push_back(std::move(s));
  }
  r.check_footer();
  traj.config.dt = traj.dt_sample;
  traj.config.record_stride = 1;
  traj.config.t_end = traj.span();
  return traj;
}

// ── run configuration ───────────────────────────────────────────────────────
//
// INI-style text: [section] headers, key = value lines, '#' or ';'
// comments.  Unknown sections or keys are errors; a mistyped key should
// never silently fall back to a default.

struct RunConfig {
  SpectralGrid grid;
  PhysicalParams params;
  Forcing forcing;
  GalerkinConfig solver;
  double initial_amplitude = 1.0;
  double initial_decay = 0.5;
  double delta = 0.25;
  double window_span = 1.0;
  double t_cutoff = 0.0;
  double spacing = 1.0;
  double t_horizon = -1.0;  // forcing scan horizon; defaults to t_end

  double horizon() const { return t_horizon > 0.0 ? t_horizon : solver.t_end; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("config: bad number for '" + key + "': " + v);
}

inline long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("config: bad integer for '" + key + "': " + v);
}

inline std::vector<double> parse_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(key, tok));
  if (out.empty()) throw std::runtime_error("config: empty list for '" + key + "'");
  return out;
}

inline ForcingTerm parse_forcing_term(
    const std::map<std::string, std::string>& kv, int idx) {
  const std::string pre = std::to_string(idx) + ".";
  auto need = [&](const std::string& suffix) -> const std::string& {
    const auto it = kv.find(pre + suffix);
    if (it == kv.end())
      throw std::runtime_error("config: forcing term " + std::to_string(idx) +
                               " missing '" + suffix + "'");
    return it->second;
  };
  auto maybe = [&](const std::string& suffix) {
    const auto it = kv.find(pre + suffix);
    return it == kv.end() ? std::string() : it->second;
  };

  ForcingTerm term;
  const std::string target = need("target");
  if (target != "u" && target != "b")
    throw std::runtime_error("config: forcing target must be u or b");
  term.target = target[0];
  const auto k = parse_list(pre + "k", need("k"));
  if (k.size() != 2)
    throw std::runtime_error("config: forcing k needs two integers");
  term.k1 = int(std::llround(k[0]));
  term.k2 = int(std::llround(k[1]));
  const auto a = parse_list(pre + "amplitude", need("amplitude"));
  if (a.size() != 4)
    throw std::runtime_error(
        "config: forcing amplitude needs four floats (re1 im1 re2 im2)");
  term.amp[0] = {a[0], a[1]};
  term.amp[1] = {a[2], a[3]};

  const std::string profile = need("profile");
  if (profile == "constant") {
    term.kind = ProfileKind::constant;
  } else if (profile == "sinusoid") {
    term.kind = ProfileKind::sinusoid;
    term.omega = parse_double(pre + "omega", need("omega"));
    const std::string ph = maybe("phase");
    term.phase = ph.empty() ? 0.0 : parse_double(pre + "phase", ph);
  } else if (profile == "decaying") {
    term.kind = ProfileKind::decaying;
    term.rate = parse_double(pre + "rate", need("rate"));
  } else if (profile == "tabulated") {
    term.kind = ProfileKind::tabulated;
    term.times = parse_list(pre + "times", need("times"));
    term.values = parse_list(pre + "values", need("values"));
  } else {
    throw std::runtime_error("config: unknown forcing profile: " + profile);
  }
  return term;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  // section -> key -> value, insertion checked for duplicates
  std::map<std::string, std::map<std::string, std::string>> data;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: bad section header at line " +
                                 std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw std::runtime_error("config: expected key = value at line " +
                               std::to_string(lineno));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " +
                               std::to_string(lineno));
    if (!data[section].emplace(key, val).second)
      throw std::runtime_error("config: duplicate key '" + key + "' in [" +
                               section + "]");
  }

  RunConfig rc;
  auto take_section = [&](const std::string& name)
      -> std::map<std::string, std::string> {
    const auto it = data.find(name);
    if (it == data.end()) return {};
    auto kv = std::move(it->second);
    data.erase(it);
    return kv;
  };
  auto reject_leftovers = [](const std::string& name,
                             const std::map<std::string, std::string>& kv) {
    if (!kv.empty())
      throw std::runtime_error("config: unknown key '" + kv.begin()->first +
                               "' in [" + name + "]");
  };
  auto pop = [](std::map<std::string, std::string>& kv,
                const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = std::move(it->second);
    kv.erase(it);
    return v;
  };

  {
    auto kv = take_section("grid");
    if (auto v = pop(kv, "modes_per_axis"); !v.empty())
      rc.grid.modes_per_axis = int(detail::parse_int("modes_per_axis", v));
    if (auto v = pop(kv, "dealias"); !v.empty()) {
      if (v == "two_thirds")
        rc.grid.rule = DealiasRule::two_thirds;
      else if (v == "three_halves_pad")
        rc.grid.rule = DealiasRule::three_halves_pad;
      else
        throw std::runtime_error("config: unknown dealias rule: " + v);
    }
    if (auto v = pop(kv, "box"); !v.empty())
      rc.grid.box = detail::parse_double("box", v);
    reject_leftovers("grid", kv);
    rc.grid.validate();
  }
  {
    auto kv = take_section("params");
    const std::pair<const char*, double*> fields[] = {
        {"kappa0", &rc.params.kappa0}, {"kappa1", &rc.params.kappa1},
        {"mu", &rc.params.mu},         {"S", &rc.params.S},
        {"epsilon", &rc.params.epsilon}, {"p", &rc.params.p}};
    for (const auto& [name, slot] : fields)
      if (auto v = pop(kv, name); !v.empty())
        *slot = detail::parse_double(name, v);
    reject_leftovers("params", kv);
    rc.params.validate();
  }
  {
    auto kv = take_section("forcing");
    if (auto v = pop(kv, "terms"); !v.empty()) {
      const long n = detail::parse_int("terms", v);
      if (n < 0 || n > 4096)
        throw std::runtime_error("config: implausible forcing term count");
      for (long i = 1; i <= n; ++i) {
        const ForcingTerm term = detail::parse_forcing_term(kv, int(i));
        rc.forcing.add_term(term);
        const std::string pre = std::to_string(i) + ".";
        for (const char* suffix : {"target", "k", "amplitude", "profile",
                                   "omega", "phase", "rate", "times", "values"})
          kv.erase(pre + suffix);
      }
    }
    reject_leftovers("forcing", kv);
  }
  {
    auto kv = take_section("solver");
    if (auto v = pop(kv, "cutoff"); !v.empty())
      rc.solver.cutoff = int(detail::parse_int("cutoff", v));
    if (auto v = pop(kv, "scheme"); !v.empty())
      rc.solver.scheme = scheme_from_string(v);
    if (auto v = pop(kv, "dt"); !v.empty())
      rc.solver.dt = detail::parse_double("dt", v);
    if (auto v = pop(kv, "t_end"); !v.empty())
      rc.solver.t_end = detail::parse_double("t_end", v);
    if (auto v = pop(kv, "record_stride"); !v.empty())
      rc.solver.record_stride = int(detail::parse_int("record_stride", v));
    if (auto v = pop(kv, "seed"); !v.empty())
      rc.solver.seed = std::uint64_t(detail::parse_int("seed", v));
    if (auto v = pop(kv, "initial_amplitude"); !v.empty())
      rc.initial_amplitude = detail::parse_double("initial_amplitude", v);
    if (auto v = pop(kv, "initial_decay"); !v.empty())
      rc.initial_decay = detail::parse_double("initial_decay", v);
    reject_leftovers("solver", kv);
    rc.solver.validate();
  }
  {
    auto kv = take_section("analysis");
    if (auto v = pop(kv, "delta"); !v.empty())
      rc.delta = detail::parse_double("delta", v);
    if (auto v = pop(kv, "window_span"); !v.empty())
      rc.window_span = detail::parse_double("window_span", v);
    if (auto v = pop(kv, "t_cutoff"); !v.empty())
      rc.t_cutoff = detail::parse_double("t_cutoff", v);
    if (auto v = pop(kv, "spacing"); !v.empty())
      rc.spacing = detail::parse_double("spacing", v);
    if (auto v = pop(kv, "t_horizon"); !v.empty())
      rc.t_horizon = detail::parse_double("t_horizon", v);
    reject_leftovers("analysis", kv);
  }
  if (!data.empty())
    throw std::runtime_error("config: unknown section [" +
                             data.begin()->first + "]");
  return rc;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return parse_config(in);
}

// ── CSV ─────────────────────────────────────────────────────────────────────

inline std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void csv_write(const std::string& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_full(row[i]);
    out << "\n";
  }
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace bmhd
