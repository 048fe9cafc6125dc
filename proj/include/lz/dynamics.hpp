#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lz/metric.hpp"
#include "lz/rng.hpp"

namespace lz {

// Point of the radially compactified scattering phase space (n = 2 boundary
// chart): interior coordinates (x, xi) or boundary-adapted (rho, y, tau, mu)
// with the covector written tau d rho/rho^2 + mu dy/rho; rho = 1/|x|.
struct PhasePoint {
  bool boundary_chart = false;
  // interior
  Eigen::VectorXd x, xi;
  // boundary (n = 2): y = (cos theta, sin theta)
  double rho = 0, theta = 0, tau = 0, mu = 0;

  double rho_infty() const;  // <(tau,mu)>^{-1} in the boundary chart
};

PhasePoint to_boundary_chart(const PhasePoint& interior);
PhasePoint to_interior_chart(const PhasePoint& boundary);

// principal symbol p = g^{mu nu}(x) xi_mu xi_nu in the active chart
double principal_symbol(const MetricFamily& fam, const PhasePoint& q);

// rescaled Hamilton field Hbar_p = rho^{-1} rho_inf H_p, components in the
// active chart: interior (xdot, xidot), boundary (rhodot, thetadot, taudot,
// mudot).  At rho_inf = 0 the smooth extension of the classical symbol is
// evaluated.
Eigen::VectorXd rescaled_hamilton_field(const MetricFamily& fam, const PhasePoint& q);

// ------------------------------------------------------------- radial sets

struct RadialComponent {
  std::string label;           // "L+" or "L-"
  double theta_star = 0;       // boundary null direction
  int mu_sign = +1;
  std::vector<Eigen::Vector4d> points;  // (rho=0, theta, tau, mu) samples
  double beta_L = 0;      // min transverse linearization rate
  double beta_rho = 0;    // -+ Hbar rho / rho
  double beta_inf = 0;    // sup |Hbar rho_inf/(beta_rho rho_inf)| near the set
  double field_norm = 0;  // sup ||Hbar|| on the set
  double dp_norm = 0;     // min |dp| on the set
  bool cond_a = false, cond_b = false, cond_c = false, cond_d = false;
  bool certified() const { return cond_a && cond_b && cond_c && cond_d; }
};

struct RadialSetReport {
  std::vector<RadialComponent> sinks;    // L+
  std::vector<RadialComponent> sources;  // L-
  bool all_certified() const;
};

// Locate and classify the radial sets at base infinity (n = 2).  When
// `reverse_flow` is set the Hamilton field is negated, which swaps the
// L+/L- labels (time-orientation flip).
RadialSetReport radial_set_classify(const MetricFamily& fam, double tol_dyn = 1e-6,
                                    bool reverse_flow = false);

// --------------------------------------------------------------- the flow

enum class Terminal { to_sink, to_source, left_domain, budget_exhausted, on_set };

struct FlowResult {
  Terminal terminal = Terminal::budget_exhausted;
  std::string component;                 // label of the reached component
  std::vector<Eigen::VectorXd> samples;  // rows: t, rho, theta, tau, mu, rho_inf, p
  double p_drift = 0;                    // |p(t) - p(0)| worst case
};

struct FlowOptions {
  double t_max = 200;
  double tol_dyn = 1e-6;
  double rho_barrier = 1e-8;
  int max_samples = 400;
  bool record = false;
};

// integrate the rescaled Hamilton flow forward (dir=+1) or backward (dir=-1),
// classifying the terminal behavior against the radial-set report
FlowResult flow_integrate(const MetricFamily& fam, const RadialSetReport& sets,
                          const PhasePoint& start, int dir, const FlowOptions& opt);

// --------------------------------------------------------- non-trapping

struct SeedLog {
  PhasePoint seed;
  Terminal forward, backward;
  std::string fwd_component, bwd_component;
};

struct NonTrappingVerdict {
  enum class Value { certified, inconclusive } value = Value::inconclusive;
  int seeds = 0;
  int escaped_both_ways = 0;
  std::vector<SeedLog> log;
  RadialSetReport sets;
};

NonTrappingVerdict nontrapping_check(const MetricFamily& fam, int seeds,
                                     double t_max, std::uint64_t seed,
                                     double tol_dyn = 1e-6);

}  // namespace lz
