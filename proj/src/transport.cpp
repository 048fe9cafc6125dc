#include "lz/transport.hpp"

#include <cmath>
#include <map>

#include "lz/numerics.hpp"

namespace lz {

using Eigen::MatrixXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

double TransportState::max_route_deviation() const {
  double worst = 0;
  for (std::size_t j = 0; j < u.size(); ++j)
    for (std::size_t i = 0; i < r.size(); ++i)
      if (j < u_closed.size() && i < u_closed[j].size())
        worst = std::max(worst, (u[j][i] - u_closed[j][i]).norm());
  return worst;
}

FiberConnection make_fiber_connection(const MetricFamily& fam, const CliffordRep& rep,
                                      const TwistPotential& tw) {
  return [&fam, &rep, tw](const VectorXd& x, const VectorXd& xdot) -> MatrixXcd {
    auto conn = spin_connection(fam, rep, tw, x);
    MatrixXcd m = MatrixXcd::Zero(rep.N, rep.N);
    for (int mu = 0; mu < fam.dim(); ++mu)
      m += xdot[mu] *
           (conn.omega[mu] + conn.twist[mu] * MatrixXcd::Identity(rep.N, rep.N));
    return m;
  };
}

U0Field::U0Field(const MetricFamily& fam, const CliffordRep& rep,
                 const TwistPotential& tw, VectorXd x0, const OdeOptions& opt)
    : fam_(fam),
      rep_(rep),
      conn_(make_fiber_connection(fam, rep, tw)),
      x0_(std::move(x0)),
      sqrtg0_(fam.sqrt_abs_det(x0_)),
      flat_metric_(fam.kind() == MetricFamily::Kind::minkowski),
      opt_(opt) {}

MatrixXcd U0Field::at(const VectorXd& x) const {
  VectorXd z = flat_metric_ ? VectorXd(x - x0_) : log_map(fam_, x0_, x, opt_);
  double scal = 1.0;
  if (!flat_metric_) {
    double dj = std::abs(dexp(fam_, x0_, z, opt_).determinant());
    scal = std::sqrt(sqrtg0_ / (fam_.sqrt_abs_det(x) * dj));
  }
  if (z.norm() < 1e-13) return scal * MatrixXcd::Identity(rep_.N, rep_.N);
  return scal * fiber_transport(fam_, x0_, z, conn_, rep_.N, opt_);
}

MatrixXcd local_dirac_squared(
    const MetricFamily& fam, const CliffordRep& rep, const TwistPotential& tw,
    const VectorXd& center, double hloc,
    const std::function<MatrixXcd(const VectorXd&)>& field) {
  const int n = fam.dim();
  const int N = rep.N;

  // offsets needed: {0, +-e_mu} composed with {0, +-e_nu}
  std::vector<VectorXd> cross{VectorXd::Zero(n)};
  for (int mu = 0; mu < n; ++mu)
    for (int s : {+1, -1}) {
      VectorXd o = VectorXd::Zero(n);
      o[mu] = s;
      cross.push_back(o);
    }
  auto key = [n](const VectorXd& o) {
    long k = 0;
    for (int i = 0; i < n; ++i) k = k * 16 + static_cast<long>(std::lround(o[i])) + 8;
    return k;
  };
  std::map<long, MatrixXcd> values;
  std::vector<std::pair<long, VectorXd>> want;
  for (const auto& c1 : cross)
    for (const auto& c2 : cross) {
      VectorXd o = c1 + c2;
      long k = key(o);
      if (!values.count(k)) {
        values[k] = MatrixXcd();
        want.push_back({k, o});
      }
    }
  parallel_for(want.size(), [&](std::size_t i) {
    values[want[i].first] = field(center + hloc * want[i].second);
  });

  // connections on the first-order cross
  std::map<long, ConnectionData> conns;
  std::map<long, std::vector<MatrixXcd>> gammas;
  for (const auto& c1 : cross) {
    long k = key(c1);
    ConnectionData cn = spin_connection(fam, rep, tw, center + hloc * c1);
    std::vector<MatrixXcd> gt(n, MatrixXcd::Zero(N, N));
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a)
        gt[nu] += (a == 0 ? 1.0 : -1.0) * cn.vielbein(nu, a) * rep.gamma[a];
    conns.emplace(k, std::move(cn));
    gammas.emplace(k, std::move(gt));
  }

  auto dirac_at = [&](const VectorXd& off) -> MatrixXcd {
    long k = key(off);
    const ConnectionData& cn = conns.at(k);
    const std::vector<MatrixXcd>& gt = gammas.at(k);
    MatrixXcd acc = MatrixXcd::Zero(N, N);
    for (int nu = 0; nu < n; ++nu) {
      VectorXd op = off, om = off;
      op[nu] += 1;
      om[nu] -= 1;
      acc += gt[nu] * (values.at(key(op)) - values.at(key(om))) / (2 * hloc);
      acc += gt[nu] *
             (cn.omega[nu] + cn.twist[nu] * MatrixXcd::Identity(N, N)) *
             values.at(key(off));
    }
    return acc;
  };

  // second application at the center
  std::map<long, MatrixXcd> du;
  for (const auto& c1 : cross) du[key(c1)] = dirac_at(c1);
  const ConnectionData& c0 = conns.at(key(VectorXd::Zero(n)));
  const std::vector<MatrixXcd>& g0 = gammas.at(key(VectorXd::Zero(n)));
  MatrixXcd acc = MatrixXcd::Zero(N, N);
  for (int nu = 0; nu < n; ++nu) {
    VectorXd op = VectorXd::Zero(n), om = VectorXd::Zero(n);
    op[nu] = 1;
    om[nu] = -1;
    acc += g0[nu] * (du.at(key(op)) - du.at(key(om))) / (2 * hloc);
    acc += g0[nu] * (c0.omega[nu] + c0.twist[nu] * MatrixXcd::Identity(N, N)) *
           du.at(key(VectorXd::Zero(n)));
  }
  return acc;
}

MatrixXcd local_dirac_squared_richardson(
    const MetricFamily& fam, const CliffordRep& rep, const TwistPotential& tw,
    const VectorXd& center, double hloc, int levels,
    const std::function<MatrixXcd(const VectorXd&)>& field, double* err_estimate) {
  std::vector<MatrixXcd> tab(levels);
  for (int l = 0; l < levels; ++l)
    tab[l] = local_dirac_squared(fam, rep, tw, center, hloc / std::pow(2.0, l), field);
  // central differences have an even error series: h^2, h^4, ...
  for (int step = 1; step < levels; ++step) {
    double f = std::pow(4.0, step);
    for (int l = levels - 1; l >= step; --l)
      tab[l] = (f * tab[l] - tab[l - 1]) / (f - 1.0);
  }
  if (err_estimate)
    *err_estimate =
        levels >= 2 ? (tab[levels - 1] - tab[levels - 2]).norm() : 1.0;
  return tab[levels - 1];
}

namespace {

VectorXd rotate_in_plane(const VectorXd& omega, double theta) {
  // n = 2 tube construction
  VectorXd o(2);
  o << std::cos(theta) * omega[0] - std::sin(theta) * omega[1],
      std::sin(theta) * omega[0] + std::cos(theta) * omega[1];
  return o;
}

}  // namespace

TransportState transport_u0(const MetricFamily& fam, const CliffordRep& rep,
                            const TwistPotential& tw, const VectorXd& x0,
                            const VectorXd& omega, double r_max, int samples,
                            int tube_rays, double tube_halfangle) {
  const int n = fam.dim();
  if (n != 2 && tube_rays > 1)
    throw Unsupported("transport tubes are implemented for n = 2");
  if (tube_rays % 2 == 0) throw InvalidInput("tube needs an odd ray count");

  TransportState st;
  st.order = 0;
  st.x0 = x0;
  st.omega = omega / omega.norm();
  for (int j = 0; j < tube_rays; ++j)
    st.thetas.push_back(tube_rays == 1
                            ? 0.0
                            : tube_halfangle * (2.0 * j / (tube_rays - 1) - 1.0));

  auto conn = make_fiber_connection(fam, rep, tw);
  OdeOptions opt = U0Field::tight_opts();
  for (double th : st.thetas) {
    VectorXd dir = n == 2 ? rotate_in_plane(st.omega, th) : st.omega;
    auto ray = radial_trivialization(fam, x0, dir, r_max, samples,
                                     Eigen::MatrixXd::Identity(n, n), conn, rep.N,
                                     opt);
    if (st.r.empty()) st.r = std::vector<double>(ray.r.begin(), ray.r.end());
    std::vector<MatrixXcd> ode_route, closed_route;
    std::vector<double> hs;
    for (int i = 0; i < samples; ++i) {
      // closed form |g~(0)|^{1/4} |g~(r)|^{-1/4}
      double scal = std::sqrt(ray.sqrtg_normal[0] / ray.sqrtg_normal[i]);
      closed_route.push_back(scal * MatrixXcd::Identity(rep.N, rep.N));
      // ODE route 2 nabla_V u0 + h u0 = 0 integrated along the ray
      ode_route.push_back(ray.u0_ode[i] * MatrixXcd::Identity(rep.N, rep.N));
      hs.push_back(ray.h[i]);
    }
    st.u.push_back(ode_route);
    st.u_closed.push_back(closed_route);
    st.h.push_back(hs);
  }
  return st;
}

TransportState transport_uk(const MetricFamily& fam, const CliffordRep& rep,
                            const TwistPotential& tw, int k,
                            const TransportState& prev, double hloc) {
  if (k < 1) throw InvalidInput("transport_uk needs k >= 1");
  if (k != prev.order + 1)
    throw InvalidInput("prev must hold the coefficient of order k-1");
  if (k >= 2 && prev.thetas.size() < 3)
    throw InvalidInput("insufficient transverse sampling in prev");

  const int n = fam.dim();
  const int N = rep.N;
  TransportState st;
  st.order = k;
  st.x0 = prev.x0;
  st.omega = prev.omega;
  st.thetas = prev.thetas;
  st.r = prev.r;

  U0Field u0field(fam, rep, tw, prev.x0);
  auto fconn = make_fiber_connection(fam, rep, tw);
  OdeOptions opt = U0Field::tight_opts();

  // global-gauge section of order k-1
  auto prev_field = [&](const VectorXd& x) -> MatrixXcd {
    if (k == 1) return u0field.at(x);
    // radial-gauge samples of u_{k-1} interpolated in (r, theta)
    VectorXd z = log_map(fam, prev.x0, x, opt);
    double rr = z.norm();
    VectorXd dir = rr > 1e-14 ? VectorXd(z / rr) : prev.omega;
    double dth = std::atan2(prev.omega[0] * dir[1] - prev.omega[1] * dir[0],
                            prev.omega.dot(dir));
    // quadratic interpolation in theta, cubic in r
    auto interp_ray = [&](int ray, double r) -> MatrixXcd {
      const auto& rs = prev.r;
      std::size_t i1 = 1;
      while (i1 + 2 < rs.size() && rs[i1 + 1] < r) ++i1;
      std::size_t i0 = i1 - 1, i2 = i1 + 1;
      double l0 = (r - rs[i1]) * (r - rs[i2]) / ((rs[i0] - rs[i1]) * (rs[i0] - rs[i2]));
      double l1 = (r - rs[i0]) * (r - rs[i2]) / ((rs[i1] - rs[i0]) * (rs[i1] - rs[i2]));
      double l2 = (r - rs[i0]) * (r - rs[i1]) / ((rs[i2] - rs[i0]) * (rs[i2] - rs[i1]));
      return l0 * prev.u[ray][i0] + l1 * prev.u[ray][i1] + l2 * prev.u[ray][i2];
    };
    int rays = static_cast<int>(prev.thetas.size());
    int jc = 1;
    while (jc + 2 < rays && prev.thetas[jc + 1] < dth) ++jc;
    double t0 = prev.thetas[jc - 1], t1 = prev.thetas[jc], t2 = prev.thetas[jc + 1];
    double m0 = (dth - t1) * (dth - t2) / ((t0 - t1) * (t0 - t2));
    double m1 = (dth - t0) * (dth - t2) / ((t1 - t0) * (t1 - t2));
    double m2 = (dth - t0) * (dth - t1) / ((t2 - t0) * (t2 - t1));
    MatrixXcd urad = m0 * interp_ray(jc - 1, rr) + m1 * interp_ray(jc, rr) +
                     m2 * interp_ray(jc + 1, rr);
    MatrixXcd T = rr > 1e-14
                      ? fiber_transport(fam, prev.x0, z, fconn, N, opt)
                      : MatrixXcd::Identity(N, N);
    return T * urad;
  };

  const int samples = static_cast<int>(st.r.size());
  const double r_max = st.r.back();

  for (std::size_t ray = 0; ray < st.thetas.size(); ++ray) {
    VectorXd dir = n == 2 ? rotate_in_plane(st.omega, st.thetas[ray]) : st.omega;
    // f(r) = T(r)^{-1} (P u_{k-1})(x(r)) = -T^{-1} D^2 u_{k-1}
    std::vector<MatrixXcd> f(samples);
    std::vector<double> hprof(samples);
    for (int i = 0; i < samples; ++i) {
      double rr = st.r[i];
      VectorXd xi = rr > 0 ? exponential_map(fam, st.x0, rr * dir, opt).x
                           : VectorXd(st.x0);
      MatrixXcd d2 = local_dirac_squared_richardson(fam, rep, tw, xi, hloc, 2,
                                                    prev_field, nullptr);
      MatrixXcd T = rr > 0 ? fiber_transport(fam, st.x0, rr * dir, fconn, N, opt)
                           : MatrixXcd::Identity(N, N);
      f[i] = -T.partialPivLu().solve(d2);  // P = -D^2
      hprof[i] = prev.h.empty() ? 0.0 : prev.h[ray][i];
    }

    // Taylor start: u(0) = -f(0)/k, u'(0) = -f'(0)/(k+1),
    // u''(0)/2 = -[h2/2 u(0) + f''(0)/2]/(k+2)
    double dr = st.r[1] - st.r[0];
    MatrixXcd f0 = f[0];
    MatrixXcd f1 = (f[2] - 4.0 * f[1] + 3.0 * f[0]) / (-2.0 * dr);  // f'(0)
    MatrixXcd f2 = (f[2] - 2.0 * f[1] + f[0]) / (2.0 * dr * dr);    // f''(0)/2
    double h2 = samples > 2 ? hprof[2] / (st.r[2] * st.r[2]) : 0.0;
    MatrixXcd c0 = -f0 / k;
    MatrixXcd c1 = -f1 / (k + 1.0);
    MatrixXcd c2 = -((h2 / 2.0) * c0 + f2) / (k + 2.0);

    std::vector<MatrixXcd> uk(samples);
    uk[0] = c0;
    // integrate r u' = -(k + h/2) u - f from the Taylor start
    auto finterp = [&](double r) -> MatrixXcd {
      std::size_t i1 = 1;
      while (i1 + 2 < st.r.size() && st.r[i1 + 1] < r) ++i1;
      std::size_t i0 = i1 - 1, i2 = i1 + 1;
      double l0 = (r - st.r[i1]) * (r - st.r[i2]) /
                  ((st.r[i0] - st.r[i1]) * (st.r[i0] - st.r[i2]));
      double l1 = (r - st.r[i0]) * (r - st.r[i2]) /
                  ((st.r[i1] - st.r[i0]) * (st.r[i1] - st.r[i2]));
      double l2 = (r - st.r[i0]) * (r - st.r[i1]) /
                  ((st.r[i2] - st.r[i0]) * (st.r[i2] - st.r[i1]));
      return l0 * f[i0] + l1 * f[i1] + l2 * f[i2];
    };
    auto hinterp = [&](double r) -> double {
      // h ~ h2 r^2 near 0; linear between samples elsewhere
      std::size_t i = 1;
      while (i + 1 < st.r.size() && st.r[i] < r) ++i;
      double ra = st.r[i - 1], rb = st.r[i];
      double t = (r - ra) / (rb - ra);
      return (1 - t) * hprof[i - 1] + t * hprof[i];
    };
    auto rhs = [&](double r, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
      Eigen::Map<const MatrixXcd> U(
          reinterpret_cast<const cd*>(y.data()), N, N);
      MatrixXcd dU =
          (-(k + hinterp(r) / 2.0) * U - finterp(r)) / r;
      dy.resize(y.size());
      Eigen::Map<MatrixXcd>(reinterpret_cast<cd*>(dy.data()), N, N) = dU;
      return;
    };
    double r_start = std::max(dr, r_max / 20.0);
    MatrixXcd ustart = c0 + r_start * c1 + r_start * r_start * c2;
    Eigen::VectorXd y0(2 * N * N);
    Eigen::Map<MatrixXcd>(reinterpret_cast<cd*>(y0.data()), N, N) = ustart;

    OdeOptions oi;
    oi.rtol = 1e-10;
    oi.atol = 1e-13;
    double at = r_start;
    Eigen::VectorXd y = y0;
    for (int i = 1; i < samples; ++i) {
      double ri = st.r[i];
      if (ri <= r_start) {
        uk[i] = c0 + ri * c1 + ri * ri * c2;
        continue;
      }
      auto res = integrate_ode(rhs, y, at, ri, oi);
      y = res.y;
      at = ri;
      uk[i] = Eigen::Map<MatrixXcd>(reinterpret_cast<cd*>(y.data()), N, N);
    }
    st.u.push_back(uk);
    st.h.push_back(hprof);
  }
  return st;
}

U1Report transport_u1_origin(const MetricFamily& fam, const CliffordRep& rep,
                             const TwistPotential& tw, const VectorXd& x0,
                             double hloc, int levels) {
  U0Field field(fam, rep, tw, x0);
  U1Report rep_out;
  double err = 0;
  // u1(0) = -P u0(0) = +D^2 u0(0)
  rep_out.u1_numeric = local_dirac_squared_richardson(
      fam, rep, tw, x0, hloc, levels,
      [&](const VectorXd& x) { return field.at(x); }, &err);
  rep_out.est_error = err;

  auto curv = curvature_at(fam, x0);
  rep_out.scalar_curvature = curv.scalar;
  auto twc = twisting_curvature(fam, rep, tw, x0);
  MatrixXcd base =
      curv.scalar / 12.0 * MatrixXcd::Identity(rep.N, rep.N);
  rep_out.pred_contraction = base + twc.contraction;
  auto conn = spin_connection(fam, rep, tw, x0);
  cd f01 = 0;
  if (fam.dim() >= 2) {
    for (int mu = 0; mu < fam.dim(); ++mu)
      for (int nu = 0; nu < fam.dim(); ++nu)
        f01 += conn.vielbein(mu, 0) * conn.vielbein(nu, 1) * twc.two_form(mu, nu);
  }
  rep_out.pred_twoform = base + f01 * MatrixXcd::Identity(rep.N, rep.N);

  double scale = std::max({rep_out.pred_contraction.norm(),
                           rep_out.u1_numeric.norm(), 1e-30});
  rep_out.rel_err_contraction =
      (rep_out.u1_numeric - rep_out.pred_contraction).norm() / scale;
  double scale2 =
      std::max({rep_out.pred_twoform.norm(), rep_out.u1_numeric.norm(), 1e-30});
  rep_out.rel_err_twoform =
      (rep_out.u1_numeric - rep_out.pred_twoform).norm() / scale2;
  rep_out.contraction_matches =
      rep_out.rel_err_contraction <= rep_out.rel_err_twoform;
  return rep_out;
}

}  // namespace lz
