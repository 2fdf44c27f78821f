#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace sl2pc {

// Everything a verification run depends on. Unknown keys are rejected so a
// typo cannot silently fall back to a default.
struct Config {
  std::uint64_t seed = 1;
  int threads = 1;
  double tol_scale = 1;
  bool report_runtime = false;  // runtimes break byte-identical reports

  std::map<std::string, double> tol = {
      {"exact", 0},
      {"core_ulps", 1e-12},
      {"flow_rk4", 1e-8},
      {"flow_closed_form", 1e-10},
      {"flow_conservation", 1e-10},
      {"retract_limit", 1e-6},
      {"retract_normality", 1e-9},
      {"retract_norm", 1e-10},
      {"desing", 1e-10},
      {"homotopy_t", 1e-5},
      {"homotopy_inf_factor", 5},
      {"su2", 1e-4},
      {"refinement_growth", 0.05},
  };
  std::map<std::string, int> samples = {
      {"core_points", 2000},
      {"flow_points", 200},
      {"rk4_steps", 10000},
      {"retract_points", 500},
      {"desing_points", 1000},
      {"homotopy_t_configs", 100},
      {"homotopy_inf_configs", 25},
      {"su2_configs", 10},
      {"norm_ring_inputs", 20},
      {"theta_grid", 2001},
  };
  std::map<std::string, double> quadrature = {
      {"finite_t_tol", 1e-10},
      {"skeleton_tol", 1e-7},
      {"s3_strength", 8},
      {"ball_strength", 12},
      {"su2_nt", 8},
  };
  int max_degree = 7;
  int degree_cap = 8;
  std::string flat_family;  // empty: bundled family

  double tolerance(const std::string& key) const {
    auto it = tol.find(key);
    if (it == tol.end()) throw Error(Errc::config_invalid, "no tolerance '" + key + "'");
    return it->second * tol_scale;
  }
  int sample(const std::string& key) const {
    auto it = samples.find(key);
    if (it == samples.end()) throw Error(Errc::config_invalid, "no sample count '" + key + "'");
    return it->second;
  }
  double quad(const std::string& key) const {
    auto it = quadrature.find(key);
    if (it == quadrature.end()) throw Error(Errc::config_invalid, "no quadrature setting '" + key + "'");
    return it->second;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["threads"] = threads;
    j["tol_scale"] = tol_scale;
    j["report_runtime"] = report_runtime;
    j["tolerances"] = tol;
    j["samples"] = samples;
    j["quadrature"] = quadrature;
    j["degrees"] = {{"max_degree", max_degree}, {"degree_cap", degree_cap}};
    j["flat_family"] = flat_family;
    return j;
  }

  // FNV-1a of the canonical dump; threads is excluded since it cannot change results
  std::string hash() const {
    auto j = to_json();
    j.erase("threads");
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : j.dump()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }
};

namespace detail {

template <class T>
void merge_map(std::map<std::string, T>& dst, const nlohmann::json& src, const char* what) {
  if (!src.is_object()) throw Error(Errc::config_invalid, std::string(what) + " must be an object");
  for (auto& [k, v] : src.items()) {
    if (!dst.count(k)) throw Error(Errc::config_invalid, std::string("unknown ") + what + " key '" + k + "'");
    if (!v.is_number()) throw Error(Errc::config_invalid, std::string(what) + "." + k + " must be a number");
    dst[k] = v.template get<T>();
  }
}

}  // namespace detail

inline Config config_from_json(const nlohmann::json& j) {
  Config c;
  if (!j.is_object()) throw Error(Errc::config_invalid, "config must be a JSON object");
  try {
    for (auto& [k, v] : j.items()) {
      if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "threads") c.threads = v.get<int>();
      else if (k == "tol_scale") c.tol_scale = v.get<double>();
      else if (k == "report_runtime") c.report_runtime = v.get<bool>();
      else if (k == "tolerances") detail::merge_map(c.tol, v, "tolerances");
      else if (k == "samples") detail::merge_map(c.samples, v, "samples");
      else if (k == "quadrature") detail::merge_map(c.quadrature, v, "quadrature");
      else if (k == "degrees") {
        for (auto& [dk, dv] : v.items()) {
          if (dk == "max_degree") c.max_degree = dv.get<int>();
          else if (dk == "degree_cap") c.degree_cap = dv.get<int>();
          else throw Error(Errc::config_invalid, "unknown degrees key '" + dk + "'");
        }
      } else if (k == "flat_family") c.flat_family = v.get<std::string>();
      else throw Error(Errc::config_invalid, "unknown config key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_invalid, e.what());
  }
  if (c.threads < 1) throw Error(Errc::config_invalid, "threads must be >= 1");
  if (!(c.tol_scale > 0)) throw Error(Errc::config_invalid, "tol_scale must be positive");
  if (c.max_degree < 0 || c.max_degree > c.degree_cap) throw Error(Errc::config_invalid, "max_degree outside [0, degree_cap]");
  for (auto& [k, v] : c.samples)
    if (v < 1) throw Error(Errc::config_invalid, "samples." + k + " must be >= 1");
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_invalid, "cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::config_invalid, std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace sl2pc
