#pragma once

// Run configuration: a flat UTF-8 key=value format with '#' comments and
// dotted keys for analysis options. Unknown keys are errors, not warnings,
// and parse -> serialize -> parse is lossless.

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mht/params.hpp"

namespace mht {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  ModelVariant variant = ModelVariant::Mht;
  DimensionalParams params;  // defaults: the reference parameter set, q=700, s=1.25
  std::string analysis;      // simulate | equilibria | hopf | collapse | region-map | basin
  std::string out_dir = "out";
  std::vector<std::string> formats = {"json", "csv", "svg"};
  int threads = 1;

  // simulate
  double sim_t_end = 40.0;
  int sim_samples = 2000;
  double sim_rel_tol = 1e-8;
  double sim_abs_tol = 1e-10;
  std::vector<std::pair<double, double>> sim_ics = {{100.0, 2.0}};

  // hopf
  double hopf_q_min = 400.0, hopf_q_max = 900.0;
  double hopf_step = 2.5;
  int hopf_max_points = 4000;

  // collapse
  double collapse_q_min = 100.0, collapse_q_max = 20000.0;

  // region-map
  double region_q_min = 400.0, region_q_max = 900.0;
  double region_s_min = 0.5, region_s_max = 2.0;
  int region_nq = 60, region_ns = 60;
  bool region_probe = true;

  // basin
  double basin_prey_min = 0.0, basin_prey_max = 0.0;  // 0,0 => (0, K]
  double basin_predator_min = 0.0, basin_predator_max = 0.0;
  int basin_nx = 100, basin_ny = 100;
  double basin_rel_tol = 1e-8;
  std::uint64_t basin_max_steps = 300'000;

  void validate() const {
    try {
      params.validate();
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
    static const std::set<std::string> analyses = {"simulate", "equilibria", "hopf",
                                                   "collapse", "region-map", "basin"};
    if (!analysis.empty() && !analyses.count(analysis))
      throw ConfigError("unknown analysis '" + analysis + "'");
    for (const auto& f : formats)
      if (f != "json" && f != "csv" && f != "svg")
        throw ConfigError("unknown output format '" + f + "'");
    if (threads < 0) throw ConfigError("threads must be nonnegative");
    if (sim_samples < 2) throw ConfigError("simulate.samples must be at least 2");
    if (sim_ics.empty()) throw ConfigError("simulate.ic must list at least one point");
    if (!(hopf_q_min > 0) || !(hopf_q_max > hopf_q_min))
      throw ConfigError("hopf.q_min/q_max must satisfy 0 < q_min < q_max");
    if (!(collapse_q_min > 0) || !(collapse_q_max > collapse_q_min))
      throw ConfigError("collapse.q_min/q_max must satisfy 0 < q_min < q_max");
    if (region_nq < 1 || region_ns < 1) throw ConfigError("region-map grid must be positive");
    if (basin_nx < 1 || basin_ny < 1) throw ConfigError("basin grid must be positive");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_number(key, v);
  if (x != std::floor(x)) throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<int>(x);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false");
}

inline std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == delim) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::vector<std::pair<double, double>> parse_ic_list(const std::string& key,
                                                            const std::string& v) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : split(v, ',')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 2)
      throw ConfigError("key '" + key + "': expected prey:predator pairs, got '" + item + "'");
    out.emplace_back(parse_number(key, parts[0]), parse_number(key, parts[1]));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

}  // namespace detail

/// Parse a configuration document. Unknown keys raise ConfigError naming the
/// offending key.
inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");

    using detail::parse_bool;
    using detail::parse_ic_list;
    using detail::parse_int;
    using detail::parse_number;

    if (key == "variant") {
      try {
        cfg.variant = variant_from_name(val);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("key 'variant': ") + e.what());
      }
    } else if (key == "r") cfg.params.r = parse_number(key, val);
    else if (key == "K") cfg.params.K = parse_number(key, val);
    else if (key == "q") cfg.params.q = parse_number(key, val);
    else if (key == "a") cfg.params.a = parse_number(key, val);
    else if (key == "s") cfg.params.s = parse_number(key, val);
    else if (key == "n") cfg.params.n = parse_number(key, val);
    else if (key == "c") cfg.params.c = parse_number(key, val);
    else if (key == "m") cfg.params.m = parse_number(key, val);
    else if (key == "analysis") cfg.analysis = val;
    else if (key == "output.dir") cfg.out_dir = val;
    else if (key == "output.formats") cfg.formats = detail::split(val, ',');
    else if (key == "threads") cfg.threads = parse_int(key, val);
    else if (key == "simulate.t_end") cfg.sim_t_end = parse_number(key, val);
    else if (key == "simulate.samples") cfg.sim_samples = parse_int(key, val);
    else if (key == "simulate.rel_tol") cfg.sim_rel_tol = parse_number(key, val);
    else if (key == "simulate.abs_tol") cfg.sim_abs_tol = parse_number(key, val);
    else if (key == "simulate.ic") cfg.sim_ics = parse_ic_list(key, val);
    else if (key == "hopf.q_min") cfg.hopf_q_min = parse_number(key, val);
    else if (key == "hopf.q_max") cfg.hopf_q_max = parse_number(key, val);
    else if (key == "hopf.step") cfg.hopf_step = parse_number(key, val);
    else if (key == "hopf.max_points") cfg.hopf_max_points = parse_int(key, val);
    else if (key == "collapse.q_min") cfg.collapse_q_min = parse_number(key, val);
    else if (key == "collapse.q_max") cfg.collapse_q_max = parse_number(key, val);
    else if (key == "region-map.q_min") cfg.region_q_min = parse_number(key, val);
    else if (key == "region-map.q_max") cfg.region_q_max = parse_number(key, val);
    else if (key == "region-map.s_min") cfg.region_s_min = parse_number(key, val);
    else if (key == "region-map.s_max") cfg.region_s_max = parse_number(key, val);
    else if (key == "region-map.nq") cfg.region_nq = parse_int(key, val);
    else if (key == "region-map.ns") cfg.region_ns = parse_int(key, val);
    else if (key == "region-map.probe") cfg.region_probe = parse_bool(key, val);
    else if (key == "basin.prey_min") cfg.basin_prey_min = parse_number(key, val);
    else if (key == "basin.prey_max") cfg.basin_prey_max = parse_number(key, val);
    else if (key == "basin.predator_min") cfg.basin_predator_min = parse_number(key, val);
    else if (key == "basin.predator_max") cfg.basin_predator_max = parse_number(key, val);
    else if (key == "basin.nx") cfg.basin_nx = parse_int(key, val);
    else if (key == "basin.ny") cfg.basin_ny = parse_int(key, val);
    else if (key == "basin.rel_tol") cfg.basin_rel_tol = parse_number(key, val);
    else if (key == "basin.max_steps") cfg.basin_max_steps = parse_int(key, val);
    else throw ConfigError("unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

/// Canonical serialisation; parse(serialize_config(c)) reproduces c exactly.
inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "variant = " << variant_name(c.variant) << "\n";
  out << "r = " << fmt_double(c.params.r) << "\n";
  out << "K = " << fmt_double(c.params.K) << "\n";
  out << "q = " << fmt_double(c.params.q) << "\n";
  out << "a = " << fmt_double(c.params.a) << "\n";
  out << "s = " << fmt_double(c.params.s) << "\n";
  out << "n = " << fmt_double(c.params.n) << "\n";
  out << "c = " << fmt_double(c.params.c) << "\n";
  out << "m = " << fmt_double(c.params.m) << "\n";
  if (!c.analysis.empty()) out << "analysis = " << c.analysis << "\n";
  out << "output.dir = " << c.out_dir << "\n";
  out << "output.formats = ";
  for (std::size_t i = 0; i < c.formats.size(); ++i)
    out << (i ? "," : "") << c.formats[i];
  out << "\n";
  out << "threads = " << c.threads << "\n";
  out << "simulate.t_end = " << fmt_double(c.sim_t_end) << "\n";
  out << "simulate.samples = " << c.sim_samples << "\n";
  out << "simulate.rel_tol = " << fmt_double(c.sim_rel_tol) << "\n";
  out << "simulate.abs_tol = " << fmt_double(c.sim_abs_tol) << "\n";
  out << "simulate.ic = ";
  for (std::size_t i = 0; i < c.sim_ics.size(); ++i)
    out << (i ? ", " : "") << fmt_double(c.sim_ics[i].first) << ":"
        << fmt_double(c.sim_ics[i].second);
  out << "\n";
  out << "hopf.q_min = " << fmt_double(c.hopf_q_min) << "\n";
  out << "hopf.q_max = " << fmt_double(c.hopf_q_max) << "\n";
  out << "hopf.step = " << fmt_double(c.hopf_step) << "\n";
  out << "hopf.max_points = " << c.hopf_max_points << "\n";
  out << "collapse.q_min = " << fmt_double(c.collapse_q_min) << "\n";
  out << "collapse.q_max = " << fmt_double(c.collapse_q_max) << "\n";
  out << "region-map.q_min = " << fmt_double(c.region_q_min) << "\n";
  out << "region-map.q_max = " << fmt_double(c.region_q_max) << "\n";
  out << "region-map.s_min = " << fmt_double(c.region_s_min) << "\n";
  out << "region-map.s_max = " << fmt_double(c.region_s_max) << "\n";
  out << "region-map.nq = " << c.region_nq << "\n";
  out << "region-map.ns = " << c.region_ns << "\n";
  out << "region-map.probe = " << (c.region_probe ? "true" : "false") << "\n";
  out << "basin.prey_min = " << fmt_double(c.basin_prey_min) << "\n";
  out << "basin.prey_max = " << fmt_double(c.basin_prey_max) << "\n";
  out << "basin.predator_min = " << fmt_double(c.basin_predator_min) << "\n";
  out << "basin.predator_max = " << fmt_double(c.basin_predator_max) << "\n";
  out << "basin.nx = " << c.basin_nx << "\n";
  out << "basin.ny = " << c.basin_ny << "\n";
  out << "basin.rel_tol = " << fmt_double(c.basin_rel_tol) << "\n";
  out << "basin.max_steps = " << c.basin_max_steps << "\n";
  return out.str();
}

}  // namespace mht
