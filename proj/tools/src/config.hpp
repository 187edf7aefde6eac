#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mosharp/convergence.hpp"

namespace mosharp::cli {

struct ProbeSpec {
  std::string kind;  ///< remainder, mollified-energy, poincare or commutation
  std::vector<Point> points;
  std::vector<double> radii;
  std::vector<double> deltas;
  double h = 0.0;  ///< grid spacing of the probe grid; defaults to grid.h0
  double epsilon = 0.25;
  std::optional<double> frozen_constant;
  double poincare_bound = 1.0;
  double slack_tolerance = 1e-8;
};

/// A validated run configuration. Every error names the offending field path.
struct RunConfig {
  nlohmann::json document;
  std::string canonical;  ///< compact dump with sorted keys; the hash input
  std::string hash;       ///< SHA-256 of `canonical`, lowercase hex

  int dimension = 1;
  std::optional<MusielakOrliczFunction> phi;
  std::optional<TestFunction> function;
  SweepSettings sweep;
  int r_min_cells = 2;
  ProbeSpec probe;
  std::string csv_name;
  std::string manifest_name;
  std::string report_name;
};

/// Throws ConfigError for unreadable files, malformed JSON and schema violations.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& document);

MusielakOrliczFunction parse_phi(const nlohmann::json& node, int dimension, const std::string& path);

}  // namespace mosharp::cli
