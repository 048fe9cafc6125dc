#include "lz/dynamics.hpp"

#include <cmath>

#include "lz/numerics.hpp"
#include "lz/ode.hpp"

namespace lz {

using Eigen::Vector4d;
using Eigen::VectorXd;
using cd = std::complex<double>;

double PhasePoint::rho_infty() const {
  if (!boundary_chart) {
    double t = 1.0 + xi.squaredNorm();
    return 1.0 / std::sqrt(t);
  }
  return 1.0 / std::sqrt(1.0 + tau * tau + mu * mu);
}

PhasePoint to_boundary_chart(const PhasePoint& q) {
  if (q.boundary_chart) return q;
  if (q.x.size() != 2) throw Unsupported("boundary chart implemented for n = 2");
  PhasePoint b;
  b.boundary_chart = true;
  double r = q.x.norm();
  if (r < 1e-300) throw InvalidInput("boundary chart undefined at the origin");
  b.rho = 1.0 / r;
  b.theta = std::atan2(q.x[1], q.x[0]);
  Eigen::Vector2d yhat(std::cos(b.theta), std::sin(b.theta));
  Eigen::Vector2d yperp(-yhat[1], yhat[0]);
  b.tau = -(q.xi[0] * yhat[0] + q.xi[1] * yhat[1]);
  b.mu = q.xi[0] * yperp[0] + q.xi[1] * yperp[1];
  return b;
}

PhasePoint to_interior_chart(const PhasePoint& q) {
  if (!q.boundary_chart) return q;
  if (!(q.rho > 0)) throw InvalidInput("interior chart needs rho > 0");
  PhasePoint in;
  in.boundary_chart = false;
  Eigen::Vector2d yhat(std::cos(q.theta), std::sin(q.theta));
  Eigen::Vector2d yperp(-yhat[1], yhat[0]);
  in.x = yhat / q.rho;
  in.xi = -q.tau * yhat + q.mu * yperp;
  return in;
}

namespace {

inline double real_of(double v) { return v; }
inline double real_of(const cd& v) { return v.real(); }

// boundary-chart symbol, templated for complex-step derivatives:
// p(rho, theta, tau, mu) = g^{ab}(x) xi_a xi_b with x = yhat/rho,
// xi = -tau yhat + mu yperp; at rho = 0 the flat tail is exact.
template <class T>
T symbol_boundary(const MetricFamily& fam, T rho, T theta, T tau, T mu) {
  using std::cos;
  using std::sin;
  T yh0 = cos(theta), yh1 = sin(theta);
  T xi0 = -tau * yh0 + mu * (-yh1);
  T xi1 = -tau * yh1 + mu * yh0;
  T ginv[4];
  double rr = real_of(rho);
  if (rr <= 1e-14) {
    ginv[0] = T(1);
    ginv[1] = ginv[2] = T(0);
    ginv[3] = T(-1);
  } else {
    T x[2] = {yh0 / rho, yh1 / rho};
    T g[4];
    fam.metric_T(x, g);
    T det = g[0] * g[3] - g[1] * g[2];
    ginv[0] = g[3] / det;
    ginv[1] = -g[1] / det;
    ginv[2] = -g[2] / det;
    ginv[3] = g[0] / det;
  }
  return ginv[0] * xi0 * xi0 + (ginv[1] + ginv[2]) * xi0 * xi1 +
         ginv[3] * xi1 * xi1;
}

struct BoundaryDerivs {
  double p;
  double dp_rho, dp_theta, dp_tau, dp_mu;
};

BoundaryDerivs symbol_derivs(const MetricFamily& fam, double rho, double theta,
                             double tau, double mu) {
  const double h = 1e-100;
  BoundaryDerivs d;
  d.p = symbol_boundary<double>(fam, rho, theta, tau, mu);
  d.dp_rho =
      symbol_boundary<cd>(fam, cd(rho, h), cd(theta, 0), cd(tau, 0), cd(mu, 0))
          .imag() /
      h;
  d.dp_theta =
      symbol_boundary<cd>(fam, cd(rho, 0), cd(theta, h), cd(tau, 0), cd(mu, 0))
          .imag() /
      h;
  d.dp_tau =
      symbol_boundary<cd>(fam, cd(rho, 0), cd(theta, 0), cd(tau, h), cd(mu, 0))
          .imag() /
      h;
  d.dp_mu =
      symbol_boundary<cd>(fam, cd(rho, 0), cd(theta, 0), cd(tau, 0), cd(mu, h))
          .imag() /
      h;
  return d;
}

// complex step through rho at the boundary needs the flat-tail branch to be
// analytic; for rho near 0 the symbol is rho-independent (compact support) or
// smooth (Schwartz tail), so one-sided real steps suffice there
BoundaryDerivs symbol_derivs_safe(const MetricFamily& fam, double rho,
                                  double theta, double tau, double mu) {
  if (rho > 1e-12 && rho * fam.perturbation_radius() < 0.99 &&
      fam.flat_tail_exact()) {
    // exactly flat: p has no rho dependence here
    BoundaryDerivs d = symbol_derivs(fam, 0.0, theta, tau, mu);
    d.dp_rho = 0.0;
    return d;
  }
  if (rho <= 1e-12) {
    BoundaryDerivs d = symbol_derivs(fam, 0.0, theta, tau, mu);
    d.dp_rho = fam.flat_tail_exact()
                   ? 0.0
                   : (symbol_boundary<double>(fam, 2e-12, theta, tau, mu) - d.p) /
                         2e-12;
    return d;
  }
  return symbol_derivs(fam, rho, theta, tau, mu);
}

// Hbar components (rhodot, thetadot, taudot, mudot)
Vector4d hbar_boundary(const MetricFamily& fam, double rho, double theta,
                       double tau, double mu) {
  auto d = symbol_derivs_safe(fam, rho, theta, tau, mu);
  double ri = 1.0 / std::sqrt(1.0 + tau * tau + mu * mu);
  Vector4d v;
  v[0] = ri * rho * d.dp_tau;
  v[1] = ri * d.dp_mu;
  v[2] = -ri * (rho * d.dp_rho + mu * d.dp_mu);
  v[3] = ri * (d.dp_tau * mu - d.dp_theta);
  return v;
}

}  // namespace

double principal_symbol(const MetricFamily& fam, const PhasePoint& q) {
  if (q.boundary_chart)
    return symbol_boundary<double>(fam, q.rho, q.theta, q.tau, q.mu);
  Eigen::MatrixXd gi = fam.inverse_metric(q.x);
  return q.xi.dot(gi * q.xi);
}

VectorXd rescaled_hamilton_field(const MetricFamily& fam, const PhasePoint& q) {
  if (q.boundary_chart) {
    Vector4d v = hbar_boundary(fam, q.rho, q.theta, q.tau, q.mu);
    return v;
  }
  // interior: plain Hamilton field times the rescaling rho^{-1} rho_inf
  const int n = fam.dim();
  VectorXd out(2 * n);
  Eigen::MatrixXd gi = fam.inverse_metric(q.x);
  VectorXd xdot = 2.0 * gi * q.xi;
  VectorXd xidot(n);
  const double h = 1e-100;
  for (int k = 0; k < n; ++k) {
    std::vector<cd> xc(n);
    for (int i = 0; i < n; ++i) xc[i] = cd(q.x[i], i == k ? h : 0.0);
    std::vector<cd> g(n * n);
    fam.metric_T(xc.data(), g.data());
    // d_k g^{-1} = -g^{-1} (d_k g) g^{-1}
    Eigen::MatrixXcd gm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gm(i, j) = g[i * n + j];
    Eigen::MatrixXd dg = gm.imag() / h;
    Eigen::MatrixXd dgi = -gi * dg * gi;
    xidot[k] = -q.xi.dot(dgi * q.xi);
  }
  double rho = 1.0 / std::max(q.x.norm(), 1e-300);
  double scale = q.rho_infty() / rho;
  out.segment(0, n) = scale * xdot;
  out.segment(n, n) = scale * xidot;
  return out;
}

namespace {

// flat-model radial directions: theta with yhat eta-null
std::vector<double> flat_null_angles() {
  return {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4};
}

Eigen::Matrix4d hbar_jacobian(const MetricFamily& fam, const Vector4d& q) {
  Eigen::Matrix4d J;
  const double step = 1e-6;
  for (int c = 0; c < 4; ++c) {
    Vector4d qp = q, qm = q;
    qp[c] += step;
    qm[c] -= step;
    if (c == 0) qm[0] = std::max(0.0, qm[0]);  // rho >= 0
    Vector4d fp = hbar_boundary(fam, qp[0], qp[1], qp[2], qp[3]);
    Vector4d fm = hbar_boundary(fam, qm[0], qm[1], qm[2], qm[3]);
    J.col(c) = (fp - fm) / (qp[c] - qm[c]);
  }
  return J;
}

RadialComponent classify_component(const MetricFamily& fam, double theta_star,
                                   int mu_sign, double tol, bool reverse) {
  RadialComponent comp;
  comp.theta_star = theta_star;
  comp.mu_sign = mu_sign;
  comp.field_norm = 0;
  comp.dp_norm = std::numeric_limits<double>::infinity();

  std::vector<double> mus{0.5, 1.0, 2.0, 4.0};
  double min_beta_L = std::numeric_limits<double>::infinity();
  double min_beta_rho = std::numeric_limits<double>::infinity();
  double max_beta_inf = 0;
  int stable_sign = 0;

  for (double mu_abs : mus) {
    double mu = mu_sign * mu_abs;
    // Newton polish (theta, tau) at fixed mu on (dp_mu, p) = 0
    double th = theta_star, ta = 0.0;
    for (int it = 0; it < 30; ++it) {
      auto d = symbol_derivs_safe(fam, 0.0, th, ta, mu);
      Eigen::Vector2d F(d.dp_mu, d.p);
      if (F.norm() < 1e-13) break;
      const double hs = 1e-7;
      auto dth = symbol_derivs_safe(fam, 0.0, th + hs, ta, mu);
      auto dta = symbol_derivs_safe(fam, 0.0, th, ta + hs, mu);
      Eigen::Matrix2d Jm;
      Jm << (dth.dp_mu - d.dp_mu) / hs, (dta.dp_mu - d.dp_mu) / hs,
          (dth.p - d.p) / hs, (dta.p - d.p) / hs;
      Eigen::Vector2d delta = Jm.partialPivLu().solve(F);
      double damp = 1.0;
      if (delta.norm() > 0.3) damp = 0.3 / delta.norm();
      th -= damp * delta[0];
      ta -= damp * delta[1];
      if (it == 29) throw ClassificationFailure("radial-set root finding diverged");
    }
    Vector4d q(0.0, th, ta, mu);
    comp.points.push_back(q);

    Vector4d f = hbar_boundary(fam, q[0], q[1], q[2], q[3]);
    if (reverse) f = -f;
    comp.field_norm = std::max(comp.field_norm, f.norm());
    auto d = symbol_derivs_safe(fam, 0.0, th, ta, mu);
    double dpn = std::sqrt(d.dp_rho * d.dp_rho + d.dp_theta * d.dp_theta +
                           d.dp_tau * d.dp_tau + d.dp_mu * d.dp_mu);
    comp.dp_norm = std::min(comp.dp_norm, dpn);

    Eigen::Matrix4d J = hbar_jacobian(fam, q);
    if (reverse) J = -J;
    // one eigenvalue ~0 along the set (mu direction); transverse rates from
    // the remaining spectrum
    Eigen::EigenSolver<Eigen::Matrix4d> es(J);
    std::vector<double> re(4);
    for (int i = 0; i < 4; ++i) re[i] = es.eigenvalues()[i].real();
    std::sort(re.begin(), re.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    double worst_abs = 0;
    int sgn = 0;
    bool consistent = true;
    for (int i = 1; i < 4; ++i) {
      int s = re[i] > 0 ? +1 : -1;
      if (sgn == 0) sgn = s;
      if (s != sgn) consistent = false;
      worst_abs = worst_abs == 0 ? std::abs(re[i])
                                 : std::min(worst_abs, std::abs(re[i]));
    }
    if (!consistent) throw ClassificationFailure("mixed transverse spectrum");
    if (stable_sign == 0) stable_sign = sgn;
    if (sgn != stable_sign)
      throw ClassificationFailure("component changes type along the set");
    min_beta_L = std::min(min_beta_L, worst_abs);

    double beta_rho = -sgn * J(0, 0);  // Hbar rho = -+ beta rho
    min_beta_rho = std::min(min_beta_rho, std::abs(J(0, 0)));
    (void)beta_rho;

    // Hbar rho_inf / (beta rho_inf) near the set
    double ri0 = 1.0 / std::sqrt(1.0 + ta * ta + mu * mu);
    for (double dq : {1e-3, 3e-3}) {
      Vector4d qq = q;
      qq[2] += dq;  // displace off the set in tau
      Vector4d ff = hbar_boundary(fam, qq[0], qq[1], qq[2], qq[3]);
      if (reverse) ff = -ff;
      double ridot = -std::pow(1.0 + qq[2] * qq[2] + qq[3] * qq[3], -1.5) *
                     (qq[2] * ff[2] + qq[3] * ff[3]);
      double bi = std::abs(ridot / (std::max(std::abs(J(0, 0)), 1e-12) * ri0));
      max_beta_inf = std::max(max_beta_inf, bi);
    }
  }

  comp.beta_L = min_beta_L;
  comp.beta_rho = min_beta_rho;
  comp.beta_inf = max_beta_inf;
  comp.label = stable_sign < 0 ? "L+" : "L-";
  comp.cond_a = comp.field_norm < tol && comp.dp_norm > tol;
  comp.cond_b = comp.beta_L > 0;
  comp.cond_c = comp.beta_rho > 0;
  comp.cond_d = comp.beta_inf < 100 * tol;
  return comp;
}

}  // namespace

bool RadialSetReport::all_certified() const {
  if (sinks.empty() || sources.empty()) return false;
  for (const auto& c : sinks)
    if (!c.certified()) return false;
  for (const auto& c : sources)
    if (!c.certified()) return false;
  return true;
}

RadialSetReport radial_set_classify(const MetricFamily& fam, double tol_dyn,
                                    bool reverse_flow) {
  if (fam.dim() != 2) throw Unsupported("radial sets implemented for n = 2");
  RadialSetReport rep;
  for (double th : flat_null_angles())
    for (int s : {+1, -1}) {
      RadialComponent c = classify_component(fam, th, s, tol_dyn, reverse_flow);
      if (c.label == "L+")
        rep.sinks.push_back(std::move(c));
      else
        rep.sources.push_back(std::move(c));
    }
  return rep;
}

namespace {

double set_distance(const RadialSetReport& sets, const Vector4d& q,
                    std::string* which) {
  double best = std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<RadialComponent>& comps) {
    for (const auto& c : comps) {
      // distance transverse to the set: rho, theta (mod 2 pi), tau;
      // mu only via its sign matching
      double dth = std::remainder(q[1] - c.theta_star, 2 * kPi);
      if (q[3] * c.mu_sign < 0) continue;
      double d = std::sqrt(q[0] * q[0] + dth * dth + q[2] * q[2]);
      if (d < best) {
        best = d;
        if (which) *which = c.label + ("@" + std::to_string(c.theta_star));
      }
    }
  };
  scan(sets.sinks);
  scan(sets.sources);
  return best;
}

bool component_is_sink(const RadialSetReport& sets, const std::string& comp) {
  for (const auto& c : sets.sinks)
    if (comp.rfind(c.label + "@" + std::to_string(c.theta_star), 0) == 0) return true;
  return false;
}

}  // namespace

FlowResult flow_integrate(const MetricFamily& fam, const RadialSetReport& sets,
                          const PhasePoint& start, int dir, const FlowOptions& opt) {
  // Bicharacteristic mode: reject elliptic seeds.
  {
    double p0 = principal_symbol(fam, start);
    double scale =
        start.boundary_chart ? 1.0 + start.tau * start.tau + start.mu * start.mu
                             : 1.0 + start.xi.squaredNorm();
    if (std::abs(p0) > 1e-3 * scale)
      throw InvalidInput("seed not on the characteristic set");
  }
  const double rho_switch = 0.2;  // |x| = 5 chart handover
  const double p0 = principal_symbol(fam, start);

  FlowResult res;
  double budget = opt.t_max;
  double t_used = 0;
  double worst_drift = 0;
  double last_dist = std::numeric_limits<double>::infinity();
  long monotone = 0;
  std::string comp;
  bool converged = false;

  auto record_row = [&](double t, const Vector4d& q, double p) {
    if (!opt.record ||
        res.samples.size() >= static_cast<std::size_t>(opt.max_samples))
      return;
    PhasePoint pp;
    pp.boundary_chart = true;
    pp.rho = q[0];
    pp.theta = q[1];
    pp.tau = q[2];
    pp.mu = q[3];
    Eigen::VectorXd row(7);
    row << t, q[0], q[1], q[2], q[3], pp.rho_infty(), p;
    res.samples.push_back(row);
  };

  PhasePoint cur = start;
  OdeOptions oi;
  oi.rtol = 1e-10;
  oi.atol = 1e-12;
  oi.h_max = 0.5;

  for (int phase = 0; phase < 64 && t_used < budget && !converged; ++phase) {
    bool boundary = cur.boundary_chart
                        ? cur.rho <= rho_switch
                        : (1.0 / std::max(cur.x.norm(), 1e-300)) <= rho_switch;
    if (boundary) {
      PhasePoint q0 = cur.boundary_chart ? cur : to_boundary_chart(cur);
      Eigen::VectorXd y(4);
      y << q0.rho, q0.theta, q0.tau, q0.mu;
      auto rhs = [&](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
        Vector4d v =
            hbar_boundary(fam, std::max(yy[0], 0.0), yy[1], yy[2], yy[3]);
        dy = dir * v;
      };
      auto monitor = [&](double t, const Eigen::VectorXd& yy) -> StepAction {
        Vector4d q(std::max(yy[0], opt.rho_barrier * 1e-4), yy[1], yy[2], yy[3]);
        PhasePoint pp;
        pp.boundary_chart = true;
        pp.rho = q[0];
        pp.theta = q[1];
        pp.tau = q[2];
        pp.mu = q[3];
        double p = principal_symbol(fam, pp);
        worst_drift = std::max(worst_drift, std::abs(p - p0));
        record_row(t_used + t, q, p);
        std::string which;
        double d = set_distance(sets, q, &which);
        if (d < last_dist - 1e-14)
          ++monotone;
        else
          monotone = 0;
        last_dist = d;
        if (d < opt.tol_dyn && monotone >= 10) {
          comp = which;
          converged = true;
          return StepAction::stop;
        }
        if (yy[0] > 1.2 * rho_switch) return StepAction::stop;  // hand over
        return StepAction::cont;
      };
      auto r = integrate_ode(rhs, y, 0.0, budget - t_used, oi, monitor);
      t_used += r.t;
      cur.boundary_chart = true;
      cur.rho = std::max(r.y[0], 0.0);
      cur.theta = r.y[1];
      cur.tau = r.y[2];
      cur.mu = r.y[3];
      if (!r.stopped_by_monitor) break;  // budget exhausted
      if (converged) break;
    } else {
      // interior phase: plain Hamilton flow (orbit-equivalent reparametrization)
      PhasePoint q0 = cur.boundary_chart ? to_interior_chart(cur) : cur;
      const int n = fam.dim();
      Eigen::VectorXd y(2 * n);
      y << q0.x, q0.xi;
      auto rhs = [&](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
        PhasePoint pp;
        pp.boundary_chart = false;
        pp.x = yy.segment(0, n);
        pp.xi = yy.segment(n, n);
        Eigen::MatrixXd gi = fam.inverse_metric(pp.x);
        Eigen::VectorXd xdot = 2.0 * gi * pp.xi;
        Eigen::VectorXd xidot(n);
        const double h = 1e-100;
        for (int k = 0; k < n; ++k) {
          std::vector<cd> xc(n);
          for (int i = 0; i < n; ++i) xc[i] = cd(pp.x[i], i == k ? h : 0.0);
          std::vector<cd> g(n * n);
          fam.metric_T(xc.data(), g.data());
          Eigen::MatrixXcd gm(n, n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gm(i, j) = g[i * n + j];
          Eigen::MatrixXd dg = gm.imag() / h;
          Eigen::MatrixXd dgi = -gi * dg * gi;
          xidot[k] = -pp.xi.dot(dgi * pp.xi);
        }
        dy.resize(2 * n);
        dy.segment(0, n) = dir * xdot;
        dy.segment(n, n) = dir * xidot;
      };
      auto monitor = [&](double t, const Eigen::VectorXd& yy) -> StepAction {
        PhasePoint pp;
        pp.boundary_chart = false;
        pp.x = yy.segment(0, n);
        pp.xi = yy.segment(n, n);
        double p = principal_symbol(fam, pp);
        worst_drift = std::max(worst_drift, std::abs(p - p0));
        if (pp.x.norm() > 1.0 / rho_switch) return StepAction::stop;  // hand over
        (void)t;
        return StepAction::cont;
      };
      auto r = integrate_ode(rhs, y, 0.0, budget - t_used, oi, monitor);
      t_used += r.t;
      cur.boundary_chart = false;
      cur.x = r.y.segment(0, n);
      cur.xi = r.y.segment(n, n);
      if (!r.stopped_by_monitor) break;  // budget exhausted
    }
  }

  res.p_drift = worst_drift;
  if (converged) {
    res.component = comp;
    res.terminal =
        component_is_sink(sets, comp) ? Terminal::to_sink : Terminal::to_source;
  } else {
    res.terminal = Terminal::budget_exhausted;
  }
  return res;
}

NonTrappingVerdict nontrapping_check(const MetricFamily& fam, int seeds,
                                     double t_max, std::uint64_t seed,
                                     double tol_dyn) {
  NonTrappingVerdict v;
  v.sets = radial_set_classify(fam, tol_dyn);
  if (!v.sets.all_certified())
    throw ClassificationFailure("radial sets not certified");
  v.seeds = seeds;

  CounterRng rng(seed, 11);
  FlowOptions opt;
  opt.t_max = t_max;
  opt.tol_dyn = tol_dyn;

  bool all_ok = true;
  for (int s = 0; s < seeds; ++s) {
    // seed on Char_0: x in an annulus, xi' random, xi_0 from p = 0
    PhasePoint q;
    q.x = Eigen::VectorXd(2);
    double rr = rng.uniform(4 * s, 0.5, 3.0);
    double ang = rng.uniform(4 * s + 1, 0.0, 2 * kPi);
    q.x << rr * std::cos(ang), rr * std::sin(ang);
    double xi1 = rng.uniform(4 * s + 2, -2.0, 2.0);
    if (std::abs(xi1) < 0.05) xi1 = 0.05;
    Eigen::MatrixXd gi = fam.inverse_metric(q.x);
    // g^{00} xi0^2 + 2 g^{01} xi0 xi1 + g^{11} xi1^2 = 0
    double a = gi(0, 0), b = 2 * gi(0, 1) * xi1, c = gi(1, 1) * xi1 * xi1;
    double disc = b * b - 4 * a * c;
    if (disc < 0) continue;
    double root = (-b + (rng.uniform(4 * s + 3) < 0.5 ? 1 : -1) * std::sqrt(disc)) /
                  (2 * a);
    q.xi = Eigen::VectorXd(2);
    q.xi << root, xi1;

    SeedLog log;
    log.seed = q;
    auto fwd = flow_integrate(fam, v.sets, q, +1, opt);
    auto bwd = flow_integrate(fam, v.sets, q, -1, opt);
    log.forward = fwd.terminal;
    log.backward = bwd.terminal;
    log.fwd_component = fwd.component;
    log.bwd_component = bwd.component;
    v.log.push_back(log);
    bool ok = (fwd.terminal == Terminal::to_sink ||
               fwd.terminal == Terminal::to_source) &&
              (bwd.terminal == Terminal::to_sink ||
               bwd.terminal == Terminal::to_source);
    if (ok) ++v.escaped_both_ways;
    all_ok = all_ok && ok;
  }
  v.value = all_ok ? NonTrappingVerdict::Value::certified
                   : NonTrappingVerdict::Value::inconclusive;
  return v;
}

}  // namespace lz
