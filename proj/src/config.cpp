#include "lz/config.hpp"

namespace lz {

using nlohmann::json;

MetricFamily metric_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("\"metric\" must be an object");
  if (!j.contains("family")) throw ConfigError("metric: missing \"family\"");
  std::string fam = j.at("family").get<std::string>();
  int n = j.value("dimension", 2);
  json par = j.value("params", json::object());
  if (fam == "minkowski") return MetricFamily::minkowski(n);
  if (fam == "conformal_bump") {
    double a = par.value("amplitude", 0.1);
    std::string profile = par.value("profile", "compact");
    if (profile == "compact")
      return MetricFamily::conformal_bump(n, a, par.value("radius", 1.0), true);
    if (profile == "gaussian")
      return MetricFamily::conformal_bump(n, a, 0.0, false, par.value("width", 1.0));
    throw ConfigError("metric: unknown conformal profile \"" + profile + "\"");
  }
  if (fam == "warped") return MetricFamily::warped(n, par.value("rate", 1.0));
  throw ConfigError("metric: unknown family \"" + fam + "\"");
}

TwistPotential twist_from_json(const json& j) {
  TwistPotential tw;
  if (j.is_null()) return tw;
  if (!j.is_object()) throw ConfigError("\"clifford.twist\" must be object or null");
  std::string type = j.value("type", "u1");
  if (type != "u1") throw ConfigError("twist: only type \"u1\" is supported");
  std::string pot = j.value("potential", "uniform_field");
  json par = j.value("params", json::object());
  if (pot == "uniform_field")
    tw.kind = TwistPotential::Kind::uniform_field;
  else if (pot == "uniform_field_compact")
    tw.kind = TwistPotential::Kind::uniform_field_compact;
  else
    throw ConfigError("twist: unknown potential \"" + pot + "\"");
  tw.c = par.value("c", 0.5);
  tw.radius = par.value("radius", 2.0);
  return tw;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, bool need_metric) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  ExperimentConfig cfg;
  if (j.contains("metric")) {
    cfg.metric = metric_from_json(j.at("metric"));
    cfg.has_metric = true;
  } else if (need_metric) {
    throw ConfigError("config: missing required key \"metric\"");
  }

  json cl = j.value("clifford", json::object());
  cfg.twist = twist_from_json(cl.value("twist", json()));
  if (cfg.has_metric) cfg.rep = build_gamma(cfg.metric.dim(), 1);

  json grid = j.value("grid", json::object());
  cfg.L = grid.value("L", cfg.L);
  cfg.m = grid.value("m", cfg.m);
  if (cfg.m < 4 || cfg.m % 2 != 0) throw ConfigError("grid: m must be even and >= 4");
  if (!(cfg.L > 0)) throw ConfigError("grid: L must be > 0");

  json ct = j.value("contour", json::object());
  cfg.theta = ct.value("theta", cfg.theta);
  cfg.eps = ct.value("epsilon", cfg.eps);
  cfg.rtrunc = ct.value("rtrunc", cfg.rtrunc);
  cfg.nodes_per_unit = ct.value("nodes_per_unit", cfg.nodes_per_unit);

  cfg.seed = j.value("seed", 1);

  // resolved config for the manifest
  cfg.raw = j;
  cfg.raw["grid"] = {{"L", cfg.L}, {"m", cfg.m}};
  cfg.raw["contour"] = {{"theta", cfg.theta},
                        {"epsilon", cfg.eps},
                        {"rtrunc", cfg.rtrunc},
                        {"nodes_per_unit", cfg.nodes_per_unit}};
  cfg.raw["seed"] = cfg.seed;
  return cfg;
}

}  // namespace lz
