#include "lz/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lz/config.hpp"
#include "lz/dynamics.hpp"
#include "lz/gammafn.hpp"
#include "lz/hadamard.hpp"
#include "lz/numerics.hpp"
#include "lz/power.hpp"
#include "lz/transport.hpp"

namespace lz {

using nlohmann::json;
using cd = std::complex<double>;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Emitter {
  std::filesystem::path dir;
  json manifest_outputs = json::array();

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(errc::config, "cannot write " + (dir / name).string());
    f << text;
    manifest_outputs.push_back(name);
  }
  void write_json(const std::string& name, const json& j) {
    write_text(name, j.dump(2) + "\n");
  }
  void write_csv(const std::string& name, const std::string& header,
                 const std::vector<std::vector<double>>& rows) {
    std::string out = header + "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ",";
        out += fmt(r[i]);
      }
      out += "\n";
    }
    write_text(name, out);
  }
};

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

// ------------------------------------------------------- subcommands

void run_curvature(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("curvature", json::object());
  double extent = p.value("extent", 1.5);
  int samples = p.value("samples", 9);
  const int n = cfg.metric.dim();
  std::vector<std::vector<double>> rows;
  std::vector<int> idx(n, 0);
  long total = 1;
  for (int i = 0; i < n; ++i) total *= samples;
  for (long f = 0; f < total; ++f) {
    long r = f;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
      int k = static_cast<int>(r % samples);
      r /= samples;
      x[i] = samples == 1 ? 0.0 : -extent + 2.0 * extent * k / (samples - 1);
    }
    auto c = curvature_at(cfg.metric, x);
    std::vector<double> row(x.data(), x.data() + n);
    row.push_back(c.scalar);
    row.push_back(c.sqrtg);
    rows.push_back(row);
  }
  std::string header;
  for (int i = 0; i < n; ++i) header += "x" + std::to_string(i) + ",";
  header += "R_g,sqrt_g";
  em.write_csv("curvature.csv", header, rows);
}

void run_blcheck(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("blcheck", json::object());
  int m = p.value("m", 32);
  double sigma = p.value("sigma", 0.6);
  auto grid = SectionGrid::zeros(cfg.metric.dim(), m, cfg.rep.N, cfg.L);
  auto u = test_section(grid, sigma);
  auto r1 = bochner_lichnerowicz_residual(cfg.metric, cfg.rep, cfg.twist, u);
  auto grid2 = SectionGrid::zeros(cfg.metric.dim(), 2 * m, cfg.rep.N, cfg.L);
  auto u2 = test_section(grid2, sigma);
  auto r2 = bochner_lichnerowicz_residual(cfg.metric, cfg.rep, cfg.twist, u2);
  json out{{"hx", r1.hx},
           {"residual", r1.residual},
           {"hx_half", r2.hx},
           {"residual_half", r2.residual}};
  if (r1.residual > 1e-13 && r2.residual > 0)
    out["order_estimate"] = std::log2(r1.residual / r2.residual);
  else
    out["order_estimate"] = nullptr;  // both sides agree to roundoff
  em.write_json("blcheck.json", out);
}

void run_hadamard(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("hadamard", json::object());
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(cfg.metric.dim());
  if (p.contains("x0")) {
    auto v = p.at("x0").get<std::vector<double>>();
    if (static_cast<int>(v.size()) != cfg.metric.dim())
      throw ConfigError("hadamard: x0 has wrong dimension");
    for (int i = 0; i < cfg.metric.dim(); ++i) x0[i] = v[i];
  }
  double hloc = p.value("hloc", 0.04);
  int levels = p.value("levels", 3);
  auto rep = transport_u1_origin(cfg.metric, cfg.rep, cfg.twist, x0, hloc, levels);
  json out{{"x0", std::vector<double>(x0.data(), x0.data() + x0.size())},
           {"R_g", rep.scalar_curvature},
           {"u1_numeric", matrix_to_json(rep.u1_numeric)},
           {"u1_predicted", matrix_to_json(rep.pred_contraction)},
           {"u1_predicted_twoform", matrix_to_json(rep.pred_twoform)},
           {"rel_error", rep.rel_err_contraction},
           {"rel_error_twoform", rep.rel_err_twoform},
           {"contraction_matches", rep.contraction_matches},
           {"est_error", rep.est_error}};
  em.write_json("hadamard.json", out);
}

void run_zeta_flat(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("zeta_flat", json::object());
  int n = p.value("n", 2);
  double eps = p.value("eps", 1.0);
  double re0 = p.value("re_min", 1.05);
  double re1 = p.value("re_max", 4.0);
  double im = p.value("im", 0.0);
  int count = p.value("count", 60);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < count; ++i) {
    cd alpha(re0 + (re1 - re0) * i / std::max(1, count - 1), im);
    cd v = flat_zeta_density(n, alpha, eps);
    rows.push_back({alpha.real(), alpha.imag(), v.real(), v.imag()});
  }
  em.write_csv("zeta_flat.csv", "alpha_re,alpha_im,value_re,value_im", rows);
}

LatticeOperator assemble_from(const ExperimentConfig& cfg) {
  return assemble(cfg.metric, cfg.rep, cfg.twist, cfg.m, cfg.L);
}

void run_assemble(const ExperimentConfig& cfg, Emitter& em) {
  auto op = assemble_from(cfg);
  auto defect = adjoint_defect(op);
  json out{{"dim", op.dim()},
           {"nonzeros", static_cast<long long>(op.P.nonZeros())},
           {"provenance", op.provenance},
           {"hx", op.hx()},
           {"adjoint_defect", defect.norm},
           {"adjoint_defect_outside_support", defect.norm_outside}};
  em.write_json("assemble.json", out);
}

void run_power(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("power", json::object());
  cd alpha(p.value("alpha_re", 1.0), p.value("alpha_im", 0.0));
  auto op = assemble_from(cfg);
  SparseLatticeOperator sp(op);
  double rt = std::max(cfg.rtrunc, 2.5 * sp.norm_bound());
  Contour ct = build_contour(cfg.eps, cfg.theta, rt, cfg.nodes_per_unit);
  // delta source at the node nearest the origin
  std::vector<int> kc(op.n, op.m / 2);
  SectionGrid proto = op.proto();
  long node = proto.flat(kc);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(op.dim(), op.N);
  for (int c = 0; c < op.N; ++c) rhs(node * op.N + c, c) = 1.0;
  Eigen::MatrixXcd blk = complex_power_apply(sp, cfg.eps, alpha, ct, rhs);
  cd tr = 0;
  for (int c = 0; c < op.N; ++c) tr += blk(node * op.N + c, c);
  json out{{"alpha", {alpha.real(), alpha.imag()}},
           {"epsilon", cfg.eps},
           {"theta", cfg.theta},
           {"rtrunc", rt},
           {"contour_nodes", static_cast<long long>(ct.size())},
           {"diag_trace", {tr.real(), tr.imag()}},
           {"column_norm", blk.norm()}};
  em.write_json("power.json", out);
}

void run_zeta(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("zeta", json::object());
  auto op = assemble_from(cfg);
  std::vector<cd> alphas;
  if (p.contains("alphas"))
    for (auto& a : p.at("alphas"))
      alphas.push_back(cd(a.at(0).get<double>(), a.at(1).get<double>()));
  else
    for (double re : {0.5, 1.0, 2.0, 3.0}) alphas.push_back(cd(re, 0));
  std::vector<std::vector<int>> pts;
  if (p.contains("points"))
    for (auto& q : p.at("points")) pts.push_back(q.get<std::vector<int>>());
  else
    pts.push_back(std::vector<int>(op.n, op.m / 2));
  SparseLatticeOperator sp(op);
  double rt = std::max(cfg.rtrunc, 2.5 * sp.norm_bound());
  Contour ct = build_contour(cfg.eps, cfg.theta, rt, cfg.nodes_per_unit);
  auto samples = zeta_diagonal(op, cfg.eps, alphas, pts, ct);
  std::vector<std::vector<double>> rows;
  for (const auto& zs : samples) {
    std::vector<double> row{zs.alpha.real(), zs.alpha.imag()};
    for (int i = 0; i < zs.x.size(); ++i) row.push_back(zs.x[i]);
    row.push_back(zs.value.real());
    row.push_back(zs.value.imag());
    rows.push_back(row);
  }
  std::string header = "alpha_re,alpha_im";
  for (int i = 0; i < op.n; ++i) header += ",x" + std::to_string(i);
  header += ",trace_re,trace_im";
  em.write_csv("zeta.csv", header, rows);
}

void run_ambiguity(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("ambiguity", json::object());
  int dim = p.value("dim", 60);
  cd lam(p.value("eig_re", 0.5), p.value("eig_im", 1.2));
  bool jordan = p.value("jordan", false);
  auto pm = plant_matrix(dim, {{lam, jordan ? 2 : 1}}, cfg.seed);
  DenseOperator op(pm.matrix());
  double rt = std::max(cfg.rtrunc, 2.5 * op.norm_bound());
  Contour a = build_contour(cfg.eps, cfg.theta, rt, cfg.nodes_per_unit);
  Contour b = build_contour(cfg.eps, cfg.theta, rt, cfg.nodes_per_unit,
                            {{lam, 0.35, true}});
  cd alpha(p.value("alpha_re", 1.5), 0.0);
  auto repo = contour_ambiguity(op, cfg.eps, alpha, a, b);
  json out{{"dim", dim},
           {"eigenvalue", {lam.real(), lam.imag()}},
           {"jordan", jordan},
           {"alpha", {alpha.real(), alpha.imag()}},
           {"numerical_rank", repo.numerical_rank},
           {"difference_norm", repo.norm}};
  json sv = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(8, repo.singular_values.size());
       ++i)
    sv.push_back(repo.singular_values[i]);
  out["leading_singular_values"] = sv;
  em.write_json("ambiguity.json", out);
}

void run_flow(const ExperimentConfig& cfg, Emitter& em) {
  json p = cfg.raw.value("flow", json::object());
  int seeds = p.value("seeds", 50);
  double tmax = p.value("tmax", 200.0);
  auto verdict = nontrapping_check(cfg.metric, seeds, tmax, cfg.seed);
  json out{{"verdict", verdict.value == NonTrappingVerdict::Value::certified
                           ? "certified"
                           : "inconclusive"},
           {"seeds", verdict.seeds},
           {"escaped_both_ways", verdict.escaped_both_ways},
           {"radial_sets_certified", verdict.sets.all_certified()}};
  json comps = json::array();
  auto add = [&](const RadialComponent& c) {
    comps.push_back({{"label", c.label},
                     {"theta", c.theta_star},
                     {"mu_sign", c.mu_sign},
                     {"beta_L", c.beta_L},
                     {"beta_rho", c.beta_rho},
                     {"beta_inf", c.beta_inf},
                     {"certified", c.certified()}});
  };
  for (auto& c : verdict.sets.sinks) add(c);
  for (auto& c : verdict.sets.sources) add(c);
  out["components"] = comps;
  em.write_json("flow.json", out);

  // one recorded trajectory for plotting
  RadialSetReport sets = verdict.sets;
  PhasePoint q;
  q.boundary_chart = true;
  q.rho = 0.1;
  q.theta = 0.3;
  q.tau = 0.0;
  double c2 = std::cos(2 * q.theta);
  q.mu = 1.0;
  q.tau = 0.0;
  // land on Char: p = tau^2 - ... solve p=0 in tau given mu
  // p = (xi0^2 - xi1^2); with tau=-xi.yhat, mu=xi.yperp:
  // p = tau^2 cos2th ... simpler: Newton from tau = mu * tan-ish seed
  for (int it = 0; it < 60; ++it) {
    PhasePoint probe = q;
    double pv = principal_symbol(cfg.metric, probe);
    if (std::abs(pv) < 1e-12) break;
    PhasePoint dq = q;
    dq.tau += 1e-7;
    double d = (principal_symbol(cfg.metric, dq) - pv) / 1e-7;
    q.tau -= pv / d;
  }
  (void)c2;
  FlowOptions fo;
  fo.t_max = tmax;
  fo.record = true;
  auto traj = flow_integrate(cfg.metric, sets, q, +1, fo);
  std::vector<std::vector<double>> rows;
  for (const auto& r : traj.samples)
    rows.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  em.write_csv("trajectory.csv", "t,rho,theta,tau,mu,rho_inf,p", rows);
}

}  // namespace

void run_experiment(const std::string& config_json, const std::string& subcommand,
                    const std::string& out_dir, long long seed_override) {
  bool need_metric = subcommand != "zeta-flat" && subcommand != "ambiguity";
  ExperimentConfig cfg = ExperimentConfig::parse(config_json, need_metric);
  if (seed_override >= 0) {
    cfg.seed = static_cast<std::uint64_t>(seed_override);
    cfg.raw["seed"] = cfg.seed;
  }

  Emitter em;
  em.dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(em.dir);

  if (subcommand == "curvature")
    run_curvature(cfg, em);
  else if (subcommand == "blcheck")
    run_blcheck(cfg, em);
  else if (subcommand == "hadamard")
    run_hadamard(cfg, em);
  else if (subcommand == "zeta-flat")
    run_zeta_flat(cfg, em);
  else if (subcommand == "assemble")
    run_assemble(cfg, em);
  else if (subcommand == "power")
    run_power(cfg, em);
  else if (subcommand == "zeta")
    run_zeta(cfg, em);
  else if (subcommand == "ambiguity")
    run_ambiguity(cfg, em);
  else if (subcommand == "flow")
    run_flow(cfg, em);
  else
    throw ConfigError("unknown subcommand \"" + subcommand + "\"");

  json manifest{{"subcommand", subcommand},
                {"seed", cfg.seed},
                {"version", "0.1.0"},
                {"config", cfg.raw},
                {"outputs", em.manifest_outputs}};
  std::ofstream f(em.dir / "manifest.json", std::ios::binary);
  f << manifest.dump(2) << "\n";
}

}  // namespace lz
