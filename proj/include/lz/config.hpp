#pragma once

#include <json.hpp>
#include <string>

#include "lz/clifford.hpp"
#include "lz/metric.hpp"

namespace lz {

// Resolved experiment configuration: defaults filled in, inputs validated.
struct ExperimentConfig {
  nlohmann::json raw;       // resolved config (round-trips losslessly)
  MetricFamily metric;
  bool has_metric = false;
  CliffordRep rep;
  TwistPotential twist;
  // grid
  double L = 2.5;
  int m = 32;
  // contour
  double theta = 3 * 3.14159265358979323846 / 4;
  double eps = 1.0;
  double rtrunc = 1e4;
  int nodes_per_unit = 16;
  std::uint64_t seed = 1;

  static ExperimentConfig parse(const std::string& json_text, bool need_metric);
};

MetricFamily metric_from_json(const nlohmann::json& j);
TwistPotential twist_from_json(const nlohmann::json& j);

}  // namespace lz
