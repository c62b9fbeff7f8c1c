#pragma once

// Run configuration: a flat "key = value" document. Keys are lowercase with
// hyphens, '#' starts a comment, unknown or repeated keys are errors.

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "novikov/exact.hpp"
#include "novikov/io.hpp"
#include "novikov/stepper.hpp"

namespace novikov {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialData { Peakon, PeriodicPeakon, MollifiedPeakon, GaussianPotentials, FromFile };

enum class WeakSource { Solver, Exact };

struct RunConfig {
  SolverConfig solver{.final_time = 1.0, .dt = 1e-3, .cfl = std::nullopt, .length = 40.0,
                      .points = 2048, .dealias = Dealias::Auto, .record_every = 10};
  InitialData initial = InitialData::MollifiedPeakon;
  double c = 1.0;
  int mollifier_n = 32;
  double x0 = 20.0;
  double width = 1.0;
  double amplitude = 1.0;
  std::string input_file;
  unsigned long long seed = 0;

  // peakon-validate
  double tolerance = 0.05;

  // weak-check
  WeakSource weak_source = WeakSource::Solver;
  /// Residuals pass when |r| <= weak_bound * sup|u, v| * st * sx.
  double weak_bound = 1e-5;
  int phi_nt = 3;
  int phi_nx = 3;
  double phi_st = 0.2;
  double phi_sx = 1.0;
  int phi_random = 0;

  // mollify-study
  std::vector<int> ks{4, 8, 16, 32};

  // depend
  std::vector<double> deltas{1e-2, 5e-3, 2.5e-3};
  double perturbation_width = 1.0;
  double perturbation_center = 20.0;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a finite number, got '" + text + "'");
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

inline const std::map<std::string, InitialData>& initial_names() {
  static const std::map<std::string, InitialData> names{
      {"peakon", InitialData::Peakon},
      {"periodic-peakon", InitialData::PeriodicPeakon},
      {"mollified-peakon", InitialData::MollifiedPeakon},
      {"gaussian-potentials", InitialData::GaussianPotentials},
      {"from-file", InitialData::FromFile}};
  return names;
}

inline std::string initial_name(InitialData d) {
  for (const auto& [name, value] : initial_names()) if (value == d) return name;
  return "?";
}

inline std::string dealias_name(Dealias d) {
  switch (d) {
    case Dealias::Off:
      return "off";
    case Dealias::TwoThirds:
      return "on";
    case Dealias::Auto:
      break;
  }
  return "auto";
}

}  // namespace detail

/// Collects key/value pairs, then resolves them into a RunConfig.
class ConfigBuilder {
 public:
  void add_document(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string body = detail::trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
      }
      const std::string key = detail::trim(body.substr(0, eq));
      if (values_.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      set(key, detail::trim(body.substr(eq + 1)));
    }
  }

  /// Applies a KEY=VALUE override, replacing any value from the document.
  void add_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not KEY=VALUE");
    set(detail::trim(assignment.substr(0, eq)), detail::trim(assignment.substr(eq + 1)));
  }

  RunConfig build() const;

 private:
  void set(const std::string& key, const std::string& value) {
    if (key.empty()) throw ConfigError("empty key");
    for (char ch : key) {
      if (!((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '-')) {
        throw ConfigError("key '" + key + "' must be lowercase with hyphens");
      }
    }
    if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
    values_[key] = value;
  }

  static const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "final-time", "dt",        "cfl",        "length",     "points",      "dealias",
        "record-every", "initial", "c",          "mollifier-n", "x0",         "width",
        "amplitude",  "input-file", "seed",      "tolerance",  "weak-source", "weak-bound",
        "phi-nt",     "phi-nx",    "phi-st",     "phi-sx",     "phi-random",  "ks",
        "deltas",     "perturbation-width", "perturbation-center"};
    return keys;
  }

  std::map<std::string, std::string> values_;
};

inline RunConfig ConfigBuilder::build() const {
  using detail::parse_double;
  RunConfig cfg;
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  };
  auto number = [&](const char* key, double& dst) {
    if (auto v = get(key)) dst = parse_double(key, *v);
  };

  if (auto v = get("initial")) {
    auto it = detail::initial_names().find(*v);
    if (it == detail::initial_names().end()) throw ConfigError("key 'initial': unknown selector '" + *v + "'");
    cfg.initial = it->second;
  }

  number("final-time", cfg.solver.final_time);
  number("dt", cfg.solver.dt);
  if (auto v = get("cfl"); v && *v != "none") cfg.solver.cfl = parse_double("cfl", *v);
  if (cfg.initial == InitialData::PeriodicPeakon) {
    if (auto v = get("length")) {
      if (!is_two_pi(parse_double("length", *v))) {
        throw ConfigError("periodic-peakon requires length = 2*pi, got " + *v);
      }
    }
    cfg.solver.length = 2.0 * std::numbers::pi;
  } else {
    number("length", cfg.solver.length);
  }
  if (auto v = get("points")) cfg.solver.points = detail::parse_int<std::size_t>("points", *v);
  if (auto v = get("dealias")) {
    if (*v == "auto") cfg.solver.dealias = Dealias::Auto;
    else if (*v == "on") cfg.solver.dealias = Dealias::TwoThirds;
    else if (*v == "off") cfg.solver.dealias = Dealias::Off;
    else throw ConfigError("key 'dealias': expected auto, on or off");
  }
  if (auto v = get("record-every")) cfg.solver.record_every = detail::parse_int<std::size_t>("record-every", *v);
  try {
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  number("c", cfg.c);
  if (!(cfg.c > 0.0)) throw ConfigError("key 'c' must be positive");
  if (auto v = get("mollifier-n")) cfg.mollifier_n = detail::parse_int<int>("mollifier-n", *v);
  cfg.x0 = 0.5 * cfg.solver.length;
  number("x0", cfg.x0);
  number("width", cfg.width);
  number("amplitude", cfg.amplitude);
  if (!(cfg.width > 0.0)) throw ConfigError("key 'width' must be positive");
  if (!(cfg.amplitude >= 0.0)) throw ConfigError("key 'amplitude' must be non-negative");
  if (auto v = get("input-file")) cfg.input_file = *v;
  if (auto v = get("seed")) cfg.seed = detail::parse_int<unsigned long long>("seed", *v);

  const Grid grid = cfg.solver.grid();
  if (cfg.initial == InitialData::MollifiedPeakon && !mollifier_resolved(cfg.mollifier_n, grid)) {
    throw ConfigError("mollifier-n " + std::to_string(cfg.mollifier_n) + " is not resolved by the grid");
  }
  if (cfg.initial == InitialData::FromFile && cfg.input_file.empty()) {
    throw ConfigError("initial = from-file requires input-file");
  }

  number("tolerance", cfg.tolerance);
  if (!(cfg.tolerance >= 0.0)) throw ConfigError("key 'tolerance' must be non-negative");
  if (auto v = get("weak-source")) {
    if (*v == "solver") cfg.weak_source = WeakSource::Solver;
    else if (*v == "exact") cfg.weak_source = WeakSource::Exact;
    else throw ConfigError("key 'weak-source': expected solver or exact");
  }
  if (cfg.weak_source == WeakSource::Exact && cfg.initial != InitialData::PeriodicPeakon) {
    throw ConfigError("weak-source = exact needs initial = periodic-peakon");
  }
  number("weak-bound", cfg.weak_bound);
  if (!(cfg.weak_bound >= 0.0)) throw ConfigError("key 'weak-bound' must be non-negative");
  if (auto v = get("phi-nt")) cfg.phi_nt = detail::parse_int<int>("phi-nt", *v);
  if (auto v = get("phi-nx")) cfg.phi_nx = detail::parse_int<int>("phi-nx", *v);
  if (auto v = get("phi-random")) cfg.phi_random = detail::parse_int<int>("phi-random", *v);
  number("phi-st", cfg.phi_st);
  number("phi-sx", cfg.phi_sx);
  if (cfg.phi_nt < 1 || cfg.phi_nx < 1 || cfg.phi_random < 0) {
    throw ConfigError("phi-nt and phi-nx must be >= 1 and phi-random >= 0");
  }

  if (auto v = get("ks")) cfg.ks = detail::parse_list<int>("ks", *v, detail::parse_int<int>);
  for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
    if (cfg.ks[i] < 1 || (i > 0 && cfg.ks[i] <= cfg.ks[i - 1])) {
      throw ConfigError("key 'ks' must be strictly increasing positive integers");
    }
  }
  if (auto v = get("deltas")) cfg.deltas = detail::parse_list<double>("deltas", *v, parse_double);
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
    if (!(cfg.deltas[i] > 0.0)) throw ConfigError("key 'deltas': every delta must be positive");
    if (i > 0 && !(cfg.deltas[i] < cfg.deltas[i - 1])) throw ConfigError("key 'deltas' must be decreasing");
  }
  number("perturbation-width", cfg.perturbation_width);
  if (!(cfg.perturbation_width > 0.0)) throw ConfigError("key 'perturbation-width' must be positive");
  cfg.perturbation_center = cfg.x0;
  number("perturbation-center", cfg.perturbation_center);
  return cfg;
}

inline RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  ConfigBuilder b;
  b.add_document(text);
  for (const auto& o : overrides) b.add_override(o);
  return b.build();
}

/// Fully resolved configuration, defaults included, in a form parse_config
/// reads back to the same RunConfig.
inline std::string echo_config(const RunConfig& cfg) {
  using io::format_double;
  std::ostringstream os;
  auto line = [&](const char* key, const std::string& value) { os << key << " = " << value << '\n'; };
  auto list = [](const auto& values, auto fmt) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + fmt(values[i]);
    return s;
  };
  os << "# resolved configuration\n";
  line("final-time", format_double(cfg.solver.final_time));
  line("dt", format_double(cfg.solver.dt));
  line("cfl", cfg.solver.cfl ? format_double(*cfg.solver.cfl) : "none");
  line("length", format_double(cfg.solver.length));
  line("points", std::to_string(cfg.solver.points));
  line("dealias", detail::dealias_name(cfg.solver.dealias));
  line("record-every", std::to_string(cfg.solver.record_every));
  line("initial", detail::initial_name(cfg.initial));
  line("c", format_double(cfg.c));
  line("mollifier-n", std::to_string(cfg.mollifier_n));
  line("x0", format_double(cfg.x0));
  line("width", format_double(cfg.width));
  line("amplitude", format_double(cfg.amplitude));
  if (!cfg.input_file.empty()) line("input-file", cfg.input_file);
  line("seed", std::to_string(cfg.seed));
  line("tolerance", format_double(cfg.tolerance));
  line("weak-source", cfg.weak_source == WeakSource::Exact ? "exact" : "solver");
  line("weak-bound", format_double(cfg.weak_bound));
  line("phi-nt", std::to_string(cfg.phi_nt));
  line("phi-nx", std::to_string(cfg.phi_nx));
  line("phi-st", format_double(cfg.phi_st));
  line("phi-sx", format_double(cfg.phi_sx));
  line("phi-random", std::to_string(cfg.phi_random));
  line("ks", list(cfg.ks, [](int k) { return std::to_string(k); }));
  line("deltas", list(cfg.deltas, [](double d) { return format_double(d); }));
  line("perturbation-width", format_double(cfg.perturbation_width));
  line("perturbation-center", format_double(cfg.perturbation_center));
  return os.str();
}

}  // namespace novikov
