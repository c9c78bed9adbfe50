#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conespectra/geometry.hpp"

namespace conespectra {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  std::string path;  // field path, e.g. "cone.family"
  ConfigError(std::string p, const std::string& msg)
      : std::runtime_error(msg + " (at " + p + ")"), path(std::move(p)) {}
};

enum class Analysis { Skin, Spectrum, Exponents, Bounds, Hardy, Cover, Lp, Residual };

struct RunConfig {
  std::uint64_t seed = 1;
  double w = 1.0;
  int mesh_n = 4000;
  std::vector<double> windows = {5.0, 10.0, 20.0};
  std::vector<double> eps_schedule;  // default geometric 1e-2 * 2^-i, 6 terms
  int cloud_samples = 10000;
  double cloud_r_min = 0.1;
  double cloud_r_max = 10.0;
  double cover_xi = 0.05;
  std::string cloud_points_csv;     // optional external cloud (points file)
  std::string cloud_adjacency_csv;  // optional external cloud (adjacency file)
  std::string cover_csv;            // optional cover dump path
  std::vector<double> lp_p = {1.0, 1.3};
  std::vector<double> lp_q = {1.2};
  std::vector<ConeSpec> cones;
  std::string kind_name = "conformal";
  double s_constant = 0.0;
  int n_shift = 0;
  std::vector<double> lambdas = {0.0};
  std::vector<Analysis> analyses;
  std::string format = "json";
  std::string out_path = "-";
  int jobs = 0;  // 0: hardware concurrency
};

RunConfig parse_config(const ordered_json& doc);
RunConfig load_config_file(const std::string& path);

struct Report {
  ordered_json doc;
  int analysis_errors = 0;
  bool all_verdicts_pass = true;
};

// Executes the requested analyses per (cone, lambda) sweep cell in
// dependency order; deterministic for a fixed document and seed.
Report run_config(const RunConfig& config);

// JSON with every float at 17 significant digits, fixed key order.
std::string dump_json17(const ordered_json& doc, int indent = 2);

// One row per sweep cell; fixed header
// cone,family,p,q,m,n,kind,lambda,w,mu,alpha_plus,alpha_minus,k_direct,k_cover,all_bounds_pass
std::string report_to_csv(const Report& report);

// Writes the report in the requested format; "-" for stdout.
void emit(const Report& report, const std::string& format, const std::string& path);

}  // namespace conespectra
