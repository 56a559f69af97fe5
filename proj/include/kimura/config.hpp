#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kimura/density.hpp"
#include "kimura/model.hpp"

namespace kimura {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { run, eoc_space, eoc_time, jump_table, decay };

inline const char* mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::run: return "run";
    case RunMode::eoc_space: return "eoc-space";
    case RunMode::eoc_time: return "eoc-time";
    case RunMode::jump_table: return "jump-table";
    case RunMode::decay: return "decay";
  }
  return "unknown";
}

/// Everything a CLI invocation needs.  The mode comes from the verb; the
/// remaining fields come from the key=value config file, with defaults
/// matching the headline experiments.
struct ExperimentConfig {
  RunMode mode = RunMode::run;
  std::string density = "6x(1-x)";
  std::vector<double> vprime;  // ascending coefficients; empty means no selection
  double kappa = 2.0;
  int n = 999;
  double tau = 1e-3;
  double final_time = 1.0;
  std::string outdir = ".";
  int stride = 10;
  std::string label;

  // eoc-space: grid sizes to compare and the reference grid size.
  std::vector<int> levels = {50, 100, 200, 400, 800};
  int ref_n = 1600;

  // eoc-time: time steps to compare and the reference time step.
  std::vector<double> taus = {0.016, 0.008, 0.004, 0.002, 0.001};
  double ref_tau = 5e-4;

  long steps() const { return std::lround(final_time / tau); }

  std::string effective_label() const {
    return label.empty() ? std::string(mode_name(mode)) : label;
  }

  ModelSpec model() const {
    if (vprime.empty()) return ModelSpec::diffusion(kappa);
    return ModelSpec(kappa, FitnessPotential(vprime));
  }

  InitialDensity initial_density() const { return InitialDensity::from_key(density); }

  void validate() const {
    if (!InitialDensity::is_builtin(density)) {
      throw ConfigError("unknown density '" + density + "'");
    }
    if (n < 2) throw ConfigError("n must be at least 2");
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    if (!(final_time >= 0.0)) throw ConfigError("final_time must be non-negative");
    if (stride < 1) throw ConfigError("stride must be at least 1");
    if (mode != RunMode::eoc_time) require_divides(tau, "tau");
    if (mode == RunMode::eoc_space) {
      if (levels.empty()) throw ConfigError("levels must not be empty");
      for (size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 2) throw ConfigError("levels entries must be at least 2");
        if (ref_n % levels[i] != 0) {
          throw ConfigError("reference grid " + std::to_string(ref_n) +
                            " is not a refinement of level " + std::to_string(levels[i]));
        }
        if (i > 0 && levels[i] != 2 * levels[i - 1]) {
          throw ConfigError("levels must double so the observed orders are meaningful");
        }
      }
      if (ref_n < 2) throw ConfigError("ref_n must be at least 2");
    }
    if (mode == RunMode::eoc_time) {
      if (taus.empty()) throw ConfigError("taus must not be empty");
      for (size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0)) throw ConfigError("taus entries must be positive");
        require_divides(taus[i], "taus entry");
        if (i > 0 && std::abs(taus[i] - 0.5 * taus[i - 1]) > 1e-12 * taus[i - 1]) {
          throw ConfigError("taus must halve so the observed orders are meaningful");
        }
      }
      if (!(ref_tau > 0.0)) throw ConfigError("ref_tau must be positive");
      require_divides(ref_tau, "ref_tau");
    }
  }

 private:
  void require_divides(double step, const char* what) const {
    const long k = std::lround(final_time / step);
    if (std::abs(static_cast<double>(k) * step - final_time) > 1e-12) {
      throw ConfigError(std::string("final_time is not an integer multiple of ") + what);
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

inline ConfigError value_error(int line, const std::string& key, const char* expected) {
  return ConfigError("config line " + std::to_string(line) + ": value for '" + key +
                     "' is not " + expected);
}

inline double parse_double_value(std::string_view v, int line, const std::string& key) {
  const std::string s(v);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty() || !std::isfinite(x)) {
    throw value_error(line, key, "a number");
  }
  return x;
}

inline int parse_int_value(std::string_view v, int line, const std::string& key) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw value_error(line, key, "an integer");
  }
  return x;
}

inline std::vector<std::string> split_list(std::string_view v) {
  std::string s(v);
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream iss(s);
  std::vector<std::string> out;
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Parses a flat key=value stream.  Lines are independent; '#' starts a
/// comment; unknown keys are rejected with their line number so typos fail
/// loudly instead of silently running the default experiment.
inline ExperimentConfig parse_config(std::istream& in, RunMode mode) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    line += 1;
    std::string_view sv(raw);
    if (const size_t hash = sv.find('#'); hash != std::string_view::npos) {
      sv = sv.substr(0, hash);
    }
    sv = detail::trim(sv);
    if (sv.empty()) continue;
    const size_t eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line) + ": expected key=value");
    }
    const std::string key(detail::trim(sv.substr(0, eq)));
    const std::string_view value = detail::trim(sv.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line) + ": empty key");
    }
    if (key == "density") {
      cfg.density = std::string(value);
    } else if (key == "vprime") {
      if (value == "zero") {
        cfg.vprime.clear();
      } else {
        cfg.vprime.clear();
        for (const std::string& tok : detail::split_list(value)) {
          cfg.vprime.push_back(detail::parse_double_value(tok, line, key));
        }
        if (cfg.vprime.empty()) throw detail::value_error(line, key, "a coefficient list");
      }
    } else if (key == "kappa") {
      cfg.kappa = detail::parse_double_value(value, line, key);
    } else if (key == "n") {
      cfg.n = detail::parse_int_value(value, line, key);
    } else if (key == "tau") {
      cfg.tau = detail::parse_double_value(value, line, key);
    } else if (key == "final_time") {
      cfg.final_time = detail::parse_double_value(value, line, key);
    } else if (key == "outdir") {
      cfg.outdir = std::string(value);
    } else if (key == "stride") {
      cfg.stride = detail::parse_int_value(value, line, key);
    } else if (key == "label") {
      cfg.label = std::string(value);
    } else if (key == "levels") {
      cfg.levels.clear();
      for (const std::string& tok : detail::split_list(value)) {
        cfg.levels.push_back(detail::parse_int_value(tok, line, key));
      }
    } else if (key == "ref_n") {
      cfg.ref_n = detail::parse_int_value(value, line, key);
    } else if (key == "taus") {
      cfg.taus.clear();
      for (const std::string& tok : detail::split_list(value)) {
        cfg.taus.push_back(detail::parse_double_value(tok, line, key));
      }
    } else if (key == "ref_tau") {
      cfg.ref_tau = detail::parse_double_value(value, line, key);
    } else {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key +
                        "'");
    }
  }
  if (const char* env = std::getenv("KIMURA_OUTDIR"); env != nullptr && *env != '\0') {
    cfg.outdir = env;
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path, RunMode mode) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse_config(in, mode);
}

}  // namespace kimura
