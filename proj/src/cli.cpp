#include "savwave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace savwave::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Run:
      return "run";
    case Mode::ConvergeTime:
      return "converge-time";
    case Mode::ConvergeSpace:
      return "converge-space";
    case Mode::Energy:
      return "energy";
  }
  return "run";
}

Mode parse_mode(std::string_view name) {
  if (name == "run") return Mode::Run;
  if (name == "converge-time") return Mode::ConvergeTime;
  if (name == "converge-space") return Mode::ConvergeSpace;
  if (name == "energy") return Mode::Energy;
  throw ConfigError("key 'mode': unknown mode '" + std::string(name) +
                    "' (expected run, converge-time, converge-space or energy)");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "alpha", "kappa", "gamma1", "gamma2", "potential", "c0",       "example", "nx",
      "tau",   "steps", "T",      "xmin",   "xmax",      "ymin",     "ymax",    "mode",
      "tau_list", "n_list", "gamma_list", "outdir", "n_ref", "k_ref"};
  return keys;
}

Example RunConfig::example() const {
  return initial == Initial::Example2 ? Example::Example2 : Example::Example1;
}

StudyConfig RunConfig::study() const {
  StudyConfig s;
  s.problem = problem;
  s.example = example();
  s.n_ref = n_ref;
  s.k_ref = k_ref;
  s.tau_list = tau_list;
  s.n_list = n_list;
  return s;
}

namespace {

double get_number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError("key '" + key + "': expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("key '" + key + "': must be finite");
  return x;
}

int as_int(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e9) return static_cast<int>(x);
  }
  throw ConfigError("key '" + key + "': expected an integer");
}

int get_int(const json& doc, const std::string& key) { return as_int(doc.at(key), key); }

std::string get_string(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError("key '" + key + "': expected a string");
  return v.get<std::string>();
}

template <typename T>
T or_default(const json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key)) return fallback;
  if constexpr (std::is_same_v<T, int>)
    return get_int(doc, key);
  else if constexpr (std::is_same_v<T, double>)
    return get_number(doc, key);
  else
    return get_string(doc, key);
}

Initial parse_initial(const std::string& name) {
  if (name == "example1") return Initial::Example1;
  if (name == "example2") return Initial::Example2;
  if (name == "zero") return Initial::Zero;
  throw ConfigError("key 'example': unknown example '" + name +
                    "' (expected example1, example2 or zero)");
}

std::string format_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string optional_cell(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : doc.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown key '" + key + "'");

  if (!doc.contains("mode")) throw ConfigError("key 'mode': required");
  if (!doc.contains("example")) throw ConfigError("key 'example': required");

  RunConfig cfg;
  cfg.mode = parse_mode(get_string(doc, "mode"));
  cfg.initial = parse_initial(get_string(doc, "example"));

  const bool second = cfg.initial == Initial::Example2;
  const double half = second ? 10.0 : 16.0;
  Problem& p = cfg.problem;
  p.alpha = or_default(doc, "alpha", 1.2);
  p.kappa = or_default(doc, "kappa", 1.0);
  p.gamma1 = or_default(doc, "gamma1", 0.0);
  p.gamma2 = or_default(doc, "gamma2", 0.0);
  p.T = or_default(doc, "T", second ? 8.0 : 1.0);
  try {
    p.potential = parse_potential(
        or_default<std::string>(doc, "potential", second ? "double_well" : "sine_gordon"));
  } catch (const ProblemError& e) {
    throw ConfigError(std::string("key 'potential': ") + e.what());
  }

  const int nx = or_default(doc, "nx", 64);
  try {
    p.grid = Grid(nx, or_default(doc, "xmin", -half), or_default(doc, "xmax", half),
                  or_default(doc, "ymin", -half), or_default(doc, "ymax", half));
  } catch (const SpectralError& e) {
    throw ConfigError(std::string("keys 'nx'/'xmin'..'ymax': ") + e.what());
  }
  p.c0 = or_default(doc, "c0", default_c0(p.potential, p.grid));
  try {
    p.validate();
  } catch (const ProblemError& e) {
    throw ConfigError(e.what());
  }

  if (doc.contains("tau") && doc.contains("steps"))
    throw ConfigError("keys 'tau' and 'steps': give at most one");
  try {
    if (doc.contains("tau")) {
      cfg.tau = get_number(doc, "tau");
      cfg.steps = step_count(p.T, cfg.tau);
    } else {
      cfg.steps = or_default(doc, "steps", 100);
      if (cfg.steps < 1) throw ConfigError("key 'steps': must be positive");
      cfg.tau = p.T / cfg.steps;
    }
  } catch (const NonIntegerStepCount& e) {
    throw ConfigError(std::string("key 'tau': ") + e.what());
  }

  cfg.tau_list = {0.1, 0.05, 0.025};
  if (doc.contains("tau_list")) {
    const json& v = doc.at("tau_list");
    if (!v.is_array() || v.empty()) throw ConfigError("key 'tau_list': expected a non-empty array");
    cfg.tau_list.clear();
    for (const json& x : v) {
      if (!x.is_number() || !(x.get<double>() > 0.0))
        throw ConfigError("key 'tau_list': entries must be positive numbers");
      cfg.tau_list.push_back(x.get<double>());
    }
  }
  cfg.n_list = {4, 8, 16, 32};
  if (doc.contains("n_list")) {
    const json& v = doc.at("n_list");
    if (!v.is_array() || v.empty()) throw ConfigError("key 'n_list': expected a non-empty array");
    cfg.n_list.clear();
    for (const json& x : v) {
      const int n = as_int(x, "n_list");
      if (n < 2 || n % 2 != 0) throw ConfigError("key 'n_list': entries must be even and >= 2");
      cfg.n_list.push_back(n);
    }
  }
  cfg.gamma_list = {{0.0, 0.0}, {0.0, 0.5}, {0.5, 0.0}, {0.5, 0.5}};
  if (doc.contains("gamma_list")) {
    const json& v = doc.at("gamma_list");
    if (!v.is_array() || v.empty())
      throw ConfigError("key 'gamma_list': expected a non-empty array of [gamma1, gamma2]");
    cfg.gamma_list.clear();
    for (const json& x : v) {
      if (!x.is_array() || x.size() != 2 || !x[0].is_number() || !x[1].is_number())
        throw ConfigError("key 'gamma_list': entries must be [gamma1, gamma2] pairs");
      const double g1 = x[0].get<double>(), g2 = x[1].get<double>();
      if (!(g1 >= 0.0) || !(g2 >= 0.0))
        throw ConfigError("key 'gamma_list': damping coefficients must be non-negative");
      cfg.gamma_list.emplace_back(g1, g2);
    }
  }

  cfg.outdir = or_default<std::string>(doc, "outdir", ".");
  cfg.n_ref = or_default(doc, "n_ref", 64);
  if (cfg.n_ref < 2 || cfg.n_ref % 2 != 0) throw ConfigError("key 'n_ref': must be even and >= 2");
  cfg.k_ref = or_default(doc, "k_ref", 1000);
  if (cfg.k_ref < 1) throw ConfigError("key 'k_ref': must be positive");

  if (cfg.mode == Mode::ConvergeTime) {
    const double tau_ref = p.T / cfg.k_ref;
    for (double tau : cfg.tau_list) {
      if (tau < tau_ref) throw ConfigError("key 'tau_list': every tau must be >= T/k_ref");
      try {
        step_count(p.T, tau);
      } catch (const NonIntegerStepCount& e) {
        throw ConfigError(std::string("key 'tau_list': ") + e.what());
      }
    }
  }
  if (cfg.mode == Mode::ConvergeSpace) {
    for (int n : cfg.n_list)
      if (n > cfg.n_ref) throw ConfigError("key 'n_list': every N must be <= n_ref");
  }
  if (cfg.initial == Initial::Zero && cfg.mode != Mode::Run)
    throw ConfigError("key 'example': zero initial data is only available in run mode");
  return cfg;
}

json load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
}

json merge_config(json base, const json& overlay) {
  if (base.is_null()) base = json::object();
  if (overlay.contains("tau")) base.erase("steps");
  if (overlay.contains("steps")) base.erase("tau");
  for (const auto& [key, value] : overlay.items()) base[key] = value;
  return base;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string energy_csv(const std::vector<EnergyRecord>& records) {
  std::ostringstream out;
  out << "step,time,H,kinetic,fractional,sav,dissipation_rhs,H_drop\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const EnergyRecord& r = records[k];
    const double drop = k == 0 ? 0.0 : records[k - 1].H - r.H;
    out << r.n << ',' << format_number(r.t) << ',' << format_number(r.H) << ','
        << format_number(r.kinetic) << ',' << format_number(r.fractional) << ','
        << format_number(r.sav) << ',' << format_number(r.dissipation_rhs) << ','
        << format_number(drop) << '\n';
  }
  return out.str();
}

std::string errors_time_csv(const std::vector<ErrorRow>& rows) {
  std::ostringstream out;
  out << "tau,e_u_inf,rate_u,e_v_inf,rate_v,e_r,rate_r\n";
  for (const ErrorRow& r : rows) {
    out << format_number(r.param) << ',' << format_number(r.e_u_inf) << ','
        << optional_cell(r.rate_u) << ',' << format_number(r.e_v_inf) << ','
        << optional_cell(r.rate_v) << ',' << format_number(r.e_r) << ','
        << optional_cell(r.rate_r) << '\n';
  }
  return out.str();
}

std::string errors_space_csv(const std::vector<ErrorRow>& rows) {
  std::ostringstream out;
  out << "N,e_u_seminorm,rate_semi,e_u_l2,rate_u,e_v_l2,rate_v\n";
  for (const ErrorRow& r : rows) {
    out << static_cast<int>(r.param) << ',' << format_number(r.e_u_seminorm) << ','
        << optional_cell(r.rate_semi) << ',' << format_number(r.e_u_l2) << ','
        << optional_cell(r.rate_u_l2) << ',' << format_number(r.e_v_l2) << ','
        << optional_cell(r.rate_v_l2) << '\n';
  }
  return out.str();
}

void write_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.close();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string energy_ledger_name(double gamma1, double gamma2) {
  return "energy_g1_" + format_short(gamma1) + "_g2_" + format_short(gamma2) + ".csv";
}

int execute(const RunConfig& cfg, std::ostream* log) {
  const Problem& p = cfg.problem;
  switch (cfg.mode) {
    case Mode::Run: {
      RunResult result = [&] {
        if (cfg.initial == Initial::Zero) {
          const Field zero(p.grid);
          return run(p, zero, zero, cfg.tau);
        }
        const InitialData init = initial_state(cfg.example(), p);
        if (log && !init.warning.empty()) *log << "warning: " << init.warning << '\n';
        return run(p, init.u0, init.v0, cfg.tau);
      }();
      const fs::path out = cfg.outdir / "energy.csv";
      write_atomic(out, energy_csv(result.ledger));
      if (log) {
        const EnergyLedger s = summarize_ledger(p.gamma1, p.gamma2, result.ledger);
        *log << "run: " << cfg.steps << " steps, H0 = " << format_number(result.ledger.front().H)
             << ", H_end = " << format_number(result.ledger.back().H)
             << ", identity defect = " << s.max_identity_defect << " -> " << out.string() << '\n';
      }
      return 0;
    }
    case Mode::ConvergeTime: {
      const auto rows = temporal_study(cfg.study());
      const fs::path out = cfg.outdir / "errors_time.csv";
      write_atomic(out, errors_time_csv(rows));
      if (log) *log << "converge-time: " << rows.size() << " rows -> " << out.string() << '\n';
      return 0;
    }
    case Mode::ConvergeSpace: {
      const auto rows = spatial_study(cfg.study());
      const fs::path out = cfg.outdir / "errors_space.csv";
      write_atomic(out, errors_space_csv(rows));
      if (log) *log << "converge-space: " << rows.size() << " rows -> " << out.string() << '\n';
      return 0;
    }
    case Mode::Energy: {
      const auto ledgers = energy_study(p, cfg.example(), cfg.tau, cfg.gamma_list);
      int code = 0;
      for (const EnergyLedger& l : ledgers) {
        const fs::path out = cfg.outdir / energy_ledger_name(l.gamma1, l.gamma2);
        write_atomic(out, energy_csv(l.records));
        const bool damped = l.gamma1 > 0.0 || l.gamma2 > 0.0;
        if (damped && !l.monotone) code = 3;
        if (log) {
          *log << "energy (" << l.gamma1 << ", " << l.gamma2 << "): drift "
               << l.max_relative_drift << ", max increase " << l.max_relative_increase
               << (damped && !l.monotone ? " [NOT MONOTONE]" : "") << " -> " << out.string()
               << '\n';
        }
      }
      return code;
    }
  }
  return 1;
}

}  // namespace savwave::cli
