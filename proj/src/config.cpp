#include "sshion/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>

#include "sshion/errors.hpp"
#include "sshion/io.hpp"

namespace sshion {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  const auto at = s.find("pi");
  if (at == std::string_view::npos) return to_double(s);
  std::string_view coef = trim(s.substr(0, at));
  std::string_view rest = trim(s.substr(at + 2));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (!coef.empty()) {
    const auto v = to_double(coef);
    if (!v) return std::nullopt;
    c = *v;
  }
  double den = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') return std::nullopt;
    const auto v = to_double(rest.substr(1));
    if (!v || *v == 0.0) return std::nullopt;
    den = *v;
  }
  return c * std::numbers::pi / den;
}

struct Context {
  int line;
  std::string key;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::config, "line " + std::to_string(line) + ": key '" + key + "': " + what);
  }
};

double need_number(const Context& ctx, std::string_view v) {
  const auto x = parse_number(v);
  if (!x || !std::isfinite(*x)) ctx.error("expected a finite number, got '" + std::string(v) + "'");
  return *x;
}

long long need_integer(const Context& ctx, std::string_view v) {
  v = trim(v);
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    ctx.error("expected an integer, got '" + std::string(v) + "'");
  }
  return x;
}

bool need_bool(const Context& ctx, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  ctx.error("expected true or false, got '" + std::string(v) + "'");
}

const std::set<std::string_view> kSweepable = {
    "n_sites",   "g",           "t_c",         "delta_band",  "eta",         "phi",
    "omega_rabi", "omega_drive", "delta",      "omega_ratio", "drive_ratio", "t_final"};

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::couplings: return "couplings";
    case Experiment::spectrum: return "spectrum";
    case Experiment::edge: return "edge";
    case Experiment::zak: return "zak";
    case Experiment::locsweep: return "locsweep";
    case Experiment::survival: return "survival";
    case Experiment::groundstate: return "groundstate";
    case Experiment::hartreefock: return "hartreefock";
    case Experiment::floquet_verify: return "floquet-verify";
  }
  return "spectrum";
}

Experiment experiment_from_string(std::string_view name) {
  for (Experiment e : {Experiment::couplings, Experiment::spectrum, Experiment::edge, Experiment::zak,
                       Experiment::locsweep, Experiment::survival, Experiment::groundstate,
                       Experiment::hartreefock, Experiment::floquet_verify}) {
    if (to_string(e) == name) return e;
  }
  fail(ErrorKind::config, "unknown experiment '" + std::string(name) + "'");
}

std::vector<double> Sweep::values() const {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    v[i] = i + 1 == points ? stop : start + (stop - start) * i / (points - 1);
  }
  return v;
}

bool is_sweepable(std::string_view key) { return kSweepable.count(key) > 0; }

void set_parameter(RunConfig& c, std::string_view key, double value) {
  if (key == "n_sites") {
    c.model.n_sites = static_cast<int>(std::lround(value));
  } else if (key == "g") {
    c.model.g = value;
  } else if (key == "t_c") {
    c.model.t_c = value;
  } else if (key == "delta_band") {
    c.model.delta_band = value;
  } else if (key == "eta") {
    c.model.eta = value;
    c.target_dimerization.reset();
  } else if (key == "phi") {
    c.model.phi = value;
  } else if (key == "omega_rabi") {
    c.model.omega_rabi = value;
  } else if (key == "omega_drive") {
    c.model.omega_drive = value;
  } else if (key == "delta") {
    c.target_dimerization = value;
  } else if (key == "omega_ratio") {
    c.omega_ratio = value;
  } else if (key == "drive_ratio") {
    c.drive_ratio = value;
  } else if (key == "t_final") {
    c.t_final = value;
  } else {
    fail(ErrorKind::config, "parameter '" + std::string(key) + "' cannot be swept");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, int> seen;
  std::optional<std::string> sweep_param;
  std::optional<double> sweep_start, sweep_stop;
  std::optional<long long> sweep_points;
  bool have_experiment = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      fail(ErrorKind::config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, sep)));
    const std::string_view value = unquote(trim(line.substr(sep + 1)));
    const Context ctx{line_no, key};
    if (key.empty()) ctx.error("empty key");
    if (value.empty()) ctx.error("missing value");
    if (const auto [it, fresh] = seen.emplace(key, line_no); !fresh) {
      ctx.error("duplicate key (first set on line " + std::to_string(it->second) + ")");
    }

    if (key == "experiment") {
      try {
        c.experiment = experiment_from_string(value);
      } catch (const Error& e) {
        ctx.error(e.what());
      }
      have_experiment = true;
    } else if (key == "n_sites") {
      const long long n = need_integer(ctx, value);
      if (n < 2 || n > 100000) ctx.error("must lie in 2..100000");
      c.model.n_sites = static_cast<int>(n);
    } else if (key == "g" || key == "t_c" || key == "delta_band" || key == "eta" || key == "phi" ||
               key == "omega_rabi" || key == "omega_drive" || key == "delta" || key == "omega_ratio" ||
               key == "drive_ratio" || key == "t_final") {
      set_parameter(c, key, need_number(ctx, value));
    } else if (key == "kd") {
      c.model.kd = need_number(ctx, value);
    } else if (key == "coupling_form") {
      try {
        c.model.coupling_form = coupling_form_from_string(value);
      } catch (const Error& e) {
        ctx.error(e.what());
      }
    } else if (key == "output_dir") {
      c.output_dir = std::string(value);
    } else if (key == "seed") {
      const long long s = need_integer(ctx, value);
      if (s < 0) ctx.error("must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "format") {
      if (value == "csv") {
        c.format = OutputFormat::csv;
      } else if (value == "json") {
        c.format = OutputFormat::json;
      } else {
        ctx.error("expected csv or json");
      }
    } else if (key == "m_cells") {
      const long long m = need_integer(ctx, value);
      if (m < 2 || m > 1000000) ctx.error("must lie in 2..1000000");
      c.m_cells = static_cast<int>(m);
    } else if (key == "include_anomalous") {
      c.include_anomalous = need_bool(ctx, value);
    } else if (key == "self_consistent") {
      c.self_consistent = need_bool(ctx, value);
    } else if (key == "sweep_param") {
      if (!is_sweepable(value)) ctx.error("'" + std::string(value) + "' cannot be swept");
      sweep_param = std::string(value);
    } else if (key == "sweep_start") {
      sweep_start = need_number(ctx, value);
    } else if (key == "sweep_stop") {
      sweep_stop = need_number(ctx, value);
    } else if (key == "sweep_points") {
      sweep_points = need_integer(ctx, value);
    } else {
      ctx.error("unknown key");
    }
  }

  if (!have_experiment) fail(ErrorKind::config, "missing required key 'experiment'");
  if (seen.count("eta") && seen.count("delta")) {
    fail(ErrorKind::config, "keys 'eta' and 'delta' are mutually exclusive");
  }
  const bool any_sweep = sweep_param || sweep_start || sweep_stop || sweep_points;
  if (any_sweep) {
    if (!sweep_param || !sweep_start || !sweep_stop || !sweep_points) {
      fail(ErrorKind::config, "a sweep needs sweep_param, sweep_start, sweep_stop and sweep_points");
    }
    if (*sweep_points < 2) fail(ErrorKind::config, "key 'sweep_points': a sweep needs at least 2 points");
    if (*sweep_points > 100000) fail(ErrorKind::config, "key 'sweep_points': at most 100000 points");
    c.sweep = Sweep{*sweep_param, *sweep_start, *sweep_stop, static_cast<int>(*sweep_points)};
  }

  try {
    c.model.validate();
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("out of range: ") + e.what());
  }
  if (c.target_dimerization && !(std::fabs(*c.target_dimerization) < 1.0)) {
    fail(ErrorKind::config, "key 'delta': dimerization must lie in (-1, 1)");
  }
  if (!(c.omega_ratio > 0.0) || !(c.drive_ratio > 0.0)) {
    fail(ErrorKind::config, "omega_ratio and drive_ratio must be positive");
  }
  if (!(c.t_final >= 0.0)) fail(ErrorKind::config, "key 't_final': must be non-negative");
  return c;
}

std::string RunConfig::canonical() const {
  std::string s;
  auto add = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
  add("experiment", std::string(to_string(experiment)));
  add("n_sites", std::to_string(model.n_sites));
  add("g", format_number(model.g));
  add("t_c", format_number(model.t_c));
  add("delta_band", format_number(model.delta_band));
  add("eta", format_number(model.eta));
  add("phi", format_number(model.phi));
  add("kd", format_number(model.kd));
  add("omega_rabi", format_number(model.omega_rabi));
  add("omega_drive", format_number(model.omega_drive));
  add("coupling_form", std::string(to_string(model.coupling_form)));
  if (target_dimerization) add("delta", format_number(*target_dimerization));
  if (sweep) {
    add("sweep_param", sweep->param);
    add("sweep_start", format_number(sweep->start));
    add("sweep_stop", format_number(sweep->stop));
    add("sweep_points", std::to_string(sweep->points));
  }
  add("seed", std::to_string(seed));
  add("format", format == OutputFormat::csv ? "csv" : "json");
  add("m_cells", std::to_string(m_cells));
  add("omega_ratio", format_number(omega_ratio));
  add("drive_ratio", format_number(drive_ratio));
  add("t_final", format_number(t_final));
  add("include_anomalous", include_anomalous ? "true" : "false");
  add("self_consistent", self_consistent ? "true" : "false");
  return s;
}

}  // namespace sshion
