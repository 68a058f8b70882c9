#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "risconn/scenario.hpp"

namespace risconn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run needs: scenario shape, radio parameters, and the
/// experiment plan. Absent keys fall back to the defaults below; dBm/dB
/// inputs are converted to linear watts at ingestion.
struct Config {
  int ue_count = 15;
  int uav_count = 10;
  int ris_count = 3;
  double area_w_m = 150.0;
  double area_h_m = 150.0;
  double uav_alt_m = 50.0;
  double ris_alt_m = 20.0;
  std::uint64_t seed = 1;
  RadioParams params;
  std::vector<Point3> ris_positions;  // optional override; first ris_count entries are used

  int iterations = 500;
  std::vector<std::string> methods = {"original", "random", "relax_round", "greedy"};
  std::string sweep;                // "", ue_count, uav_count, ris_count, thr_ris_db
  std::vector<double> sweep_values;
  bool weighted_base = false;
  bool strict_coverage = false;
  bool allow_redundant = false;
  bool plain_rounding = false;
  int relax_iters = 300;
  double relax_tol = 1e-7;
  bool timing = false;  // wall-clock capture is opt-in so output stays byte-reproducible
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_number(const std::string& value, int line, const std::string& key) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": field '" + key +
                      "' is not numeric: '" + value + "'");
  }
  if (pos != value.size()) {
    throw ConfigError("line " + std::to_string(line) + ": field '" + key +
                      "' has trailing junk: '" + value + "'");
  }
  return out;
}

inline long long parse_int(const std::string& value, int line, const std::string& key) {
  const double d = parse_number(value, line, key);
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-9) {
    throw ConfigError("line " + std::to_string(line) + ": field '" + key +
                      "' must be an integer: '" + value + "'");
  }
  return static_cast<long long>(r);
}

inline bool parse_bool(const std::string& value, int line, const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("line " + std::to_string(line) + ": field '" + key +
                    "' must be true or false: '" + value + "'");
}

inline std::vector<std::string> split(const std::string& value, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, sep)) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

inline const std::set<std::string>& known_methods() {
  static const std::set<std::string> m = {"original", "random",     "relax_round",
                                          "greedy",   "exhaustive", "bounds"};
  return m;
}

}  // namespace detail

/// Post-parse validation plus derived defaults (the RIS pairing range
/// defaults to the area diagonal so it never binds unless configured).
inline void finalize_config(Config& c, bool reach_was_set) {
  if (!reach_was_set) c.params.ris_reach_m = std::hypot(c.area_w_m, c.area_h_m);
  if (c.ue_count < 1) throw ConfigError("ue_count must be >= 1");
  if (c.uav_count < 1) throw ConfigError("uav_count must be >= 1");
  if (c.ris_count < 0) throw ConfigError("ris_count must be >= 0");
  if (!(c.area_w_m > 0.0) || !(c.area_h_m > 0.0)) throw ConfigError("area must be positive");
  if (c.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (c.relax_iters < 1) throw ConfigError("relax_iters must be >= 1");
  if (!(c.relax_tol > 0.0)) throw ConfigError("relax_tol must be > 0");
  if (c.methods.empty()) throw ConfigError("methods must not be empty");
  for (const auto& m : c.methods) {
    if (detail::known_methods().count(m) == 0) throw ConfigError("unknown method: " + m);
  }
  if (!c.sweep.empty() && c.sweep != "ue_count" && c.sweep != "uav_count" &&
      c.sweep != "ris_count" && c.sweep != "thr_ris_db") {
    throw ConfigError("sweep must be one of ue_count, uav_count, ris_count, thr_ris_db");
  }
  if (!c.sweep.empty() && c.sweep_values.empty()) {
    throw ConfigError("sweep set but sweep_values is empty");
  }
  for (std::size_t i = 1; i < c.sweep_values.size(); ++i) {
    if (!(c.sweep_values[i] > c.sweep_values[i - 1])) {
      throw ConfigError("sweep_values must be strictly increasing");
    }
  }
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Parses the flat key-value config format: one `key = value` per line,
/// `#` starts a comment. Unknown keys are collected and reported together.
inline Config load_config(const std::string& text) {
  Config c;
  bool reach_set = false;
  std::vector<std::string> unknown;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value': '" +
                        line + "'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    }

    auto num = [&] { return detail::parse_number(value, line_no, key); };
    auto integer = [&] { return detail::parse_int(value, line_no, key); };
    auto boolean = [&] { return detail::parse_bool(value, line_no, key); };

    if (key == "ue_count") {
      c.ue_count = static_cast<int>(integer());
    } else if (key == "uav_count") {
      c.uav_count = static_cast<int>(integer());
    } else if (key == "ris_count") {
      c.ris_count = static_cast<int>(integer());
    } else if (key == "area_w_m") {
      c.area_w_m = num();
    } else if (key == "area_h_m") {
      c.area_h_m = num();
    } else if (key == "uav_alt_m") {
      c.uav_alt_m = num();
    } else if (key == "ris_alt_m") {
      c.ris_alt_m = num();
    } else if (key == "seed") {
      const long long s = integer();
      if (s < 0) throw ConfigError("line " + std::to_string(line_no) + ": seed must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "iterations") {
      c.iterations = static_cast<int>(integer());
    } else if (key == "carrier_hz") {
      c.params.carrier_freq_hz = num();
    } else if (key == "alpha") {
      c.params.pathloss_exponent = num();
    } else if (key == "ue_power_w") {
      c.params.ue_power_w = num();
    } else if (key == "uav_power_w") {
      c.params.uav_power_w = num();
    } else if (key == "noise_dbm") {
      c.params.noise_w = watts_from_dbm(num());
    } else if (key == "beta0") {
      c.params.ref_pathloss = num();
    } else if (key == "m_rows") {
      c.params.ris_rows = static_cast<int>(integer());
    } else if (key == "m_cols") {
      c.params.ris_cols = static_cast<int>(integer());
    } else if (key == "d_b_m") {
      c.params.row_spacing_m = num();
    } else if (key == "d_c_m") {
      c.params.col_spacing_m = num();
    } else if (key == "thr_ue_uav_db") {
      c.params.thr_ue_uav_db = num();
    } else if (key == "thr_uav_uav_db") {
      c.params.thr_uav_uav_db = num();
    } else if (key == "thr_ris_db") {
      c.params.thr_ris_db = num();
    } else if (key == "ris_reach_m") {
      c.params.ris_reach_m = num();
      reach_set = true;
    } else if (key == "epsilon") {
      c.params.epsilon = num();
    } else if (key == "methods") {
      c.methods = detail::split(value, ',');
    } else if (key == "weighted_base") {
      c.weighted_base = boolean();
    } else if (key == "strict_coverage") {
      c.strict_coverage = boolean();
    } else if (key == "allow_redundant") {
      c.allow_redundant = boolean();
    } else if (key == "plain_rounding") {
      c.plain_rounding = boolean();
    } else if (key == "timing") {
      c.timing = boolean();
    } else if (key == "relax_iters") {
      c.relax_iters = static_cast<int>(integer());
    } else if (key == "relax_tol") {
      c.relax_tol = num();
    } else if (key == "sweep") {
      c.sweep = value;
    } else if (key == "sweep_values") {
      c.sweep_values.clear();
      for (const auto& item : detail::split(value, ',')) {
        c.sweep_values.push_back(detail::parse_number(item, line_no, key));
      }
    } else if (key == "ris_positions") {
      // semicolon list of x:y pairs, altitude comes from ris_alt_m
      c.ris_positions.clear();
      for (const auto& pair : detail::split(value, ';')) {
        const auto xy = detail::split(pair, ':');
        if (xy.size() != 2) {
          throw ConfigError("line " + std::to_string(line_no) +
                            ": ris_positions entries must be x:y pairs");
        }
        c.ris_positions.push_back({detail::parse_number(xy[0], line_no, key),
                                   detail::parse_number(xy[1], line_no, key), 0.0});
      }
    } else {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  finalize_config(c, reach_set);
  return c;
}

inline Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return load_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Builds a scenario from a config. An explicit ris_positions list overrides
/// the Halton default; its first ris_count entries are used so that
/// ris_count sweeps still grow the deployment instead of reshuffling it.
inline Scenario make_scenario(const Config& c, std::uint64_t seed) {
  Scenario s = generate_random(seed, c.ue_count, c.uav_count, c.ris_count, c.area_w_m,
                               c.area_h_m, c.uav_alt_m, c.ris_alt_m, c.params);
  if (!c.ris_positions.empty()) {
    if (static_cast<int>(c.ris_positions.size()) < c.ris_count) {
      throw std::invalid_argument("make_scenario: ris_positions has fewer entries than ris_count");
    }
    s.riss.assign(c.ris_positions.begin(), c.ris_positions.begin() + c.ris_count);
    for (auto& p : s.riss) p.z = c.ris_alt_m;
  }
  return s;
}

}  // namespace risconn
