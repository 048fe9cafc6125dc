#include "lz/geodesic.hpp"

#include <cmath>

namespace lz {
namespace {

struct Layout {
  int n = 0;
  int N = 0;  // fiber dim, 0 = no fiber block
  bool frame = false;
  bool jacobi = false;
  bool logu0 = false;  // scalar transport log u0 (needs jacobi)
  int size() const {
    return 2 * n + (frame ? n * n : 0) + (jacobi ? 2 * n * n : 0) +
           (N ? 2 * N * N : 0) + (logu0 ? 1 : 0);
  }
  int off_frame() const { return 2 * n; }
  int off_jac() const { return off_frame() + (frame ? n * n : 0); }
  int off_fiber() const { return off_jac() + (jacobi ? 2 * n * n : 0); }
  int off_logu0() const { return off_fiber() + (N ? 2 * N * N : 0); }
};

struct GeoRhs {
  const MetricFamily* fam;
  Layout lay;
  FiberConnection conn;

  void operator()(double t_now, const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
    const int n = lay.n;
    (void)t_now;
    Eigen::VectorXd x = y.segment(0, n);
    Eigen::VectorXd v = y.segment(n, n);
    dy.setZero(y.size());
    dy.segment(0, n) = v;

    std::vector<Eigen::MatrixXd> gam;
    std::vector<std::vector<Eigen::MatrixXd>> dgam;
    if (lay.jacobi) {
      christoffel_and_derivative(*fam, x, gam, dgam);
    } else {
      gam = christoffel_at(*fam, x);
    }
    for (int l = 0; l < n; ++l) dy[n + l] = -v.dot(gam[l] * v);

    if (lay.frame) {
      Eigen::Map<const Eigen::MatrixXd> E(y.data() + lay.off_frame(), n, n);
      Eigen::Map<Eigen::MatrixXd> dE(dy.data() + lay.off_frame(), n, n);
      for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m) {
          double s = 0;
          for (int nu = 0; nu < n; ++nu) s += v[nu] * (gam[m].row(nu) * E.col(a))(0);
          dE(m, a) = -s;
        }
    }
    if (lay.jacobi) {
      Eigen::Map<const Eigen::MatrixXd> W(y.data() + lay.off_jac(), n, n);
      Eigen::Map<const Eigen::MatrixXd> Y(y.data() + lay.off_jac() + n * n, n, n);
      Eigen::Map<Eigen::MatrixXd> dW(dy.data() + lay.off_jac(), n, n);
      Eigen::Map<Eigen::MatrixXd> dY(dy.data() + lay.off_jac() + n * n, n, n);
      dW = Y;
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) {
          double s = 0;
          for (int sg = 0; sg < n; ++sg)
            s += W(sg, j) * v.dot(dgam[sg][m] * v);
          for (int nu = 0; nu < n; ++nu)
            s += 2.0 * (gam[m].row(nu) * Y.col(j))(0) * v[nu];
          dY(m, j) = -s;
        }
    }
    if (lay.N) {
      const int N = lay.N;
      Eigen::Map<const Eigen::MatrixXcd> U(
          reinterpret_cast<const std::complex<double>*>(y.data() + lay.off_fiber()),
          N, N);
      Eigen::Map<Eigen::MatrixXcd> dU(
          reinterpret_cast<std::complex<double>*>(dy.data() + lay.off_fiber()), N, N);
      dU = -(conn(x, v) * U);
    }
    if (lay.logu0) {
      // d log u0 / dt = -h/(2t) with the instantaneous transport scalar
      // h/t = d/dt log|g|^{1/2} + tr(W^{-1} Y) - n/t
      double d = 0;
      if (t_now > 1e-8) {
        Eigen::Map<const Eigen::MatrixXd> W(y.data() + lay.off_jac(), n, n);
        Eigen::Map<const Eigen::MatrixXd> Y(y.data() + lay.off_jac() + n * n, n, n);
        std::vector<Eigen::MatrixXd> dg;
        fam->d_metric(x, dg);
        Eigen::MatrixXd ginv = fam->inverse_metric(x);
        double dlg = 0;
        for (int l = 0; l < n; ++l) dlg += 0.5 * (ginv * dg[l]).trace() * v[l];
        double trwy = (W.partialPivLu().solve(Y)).trace();
        d = -0.5 * (dlg + trwy - static_cast<double>(n) / t_now);
      }
      dy[lay.off_logu0()] = d;
    }
  }
};

Eigen::VectorXd pack_initial(const Layout& lay, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& v,
                             const Eigen::MatrixXd* frame0) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(lay.size());
  y.segment(0, lay.n) = x0;
  y.segment(lay.n, lay.n) = v;
  if (lay.frame) {
    Eigen::Map<Eigen::MatrixXd> E(y.data() + lay.off_frame(), lay.n, lay.n);
    E = frame0 ? *frame0 : Eigen::MatrixXd::Identity(lay.n, lay.n);
  }
  if (lay.jacobi) {
    Eigen::Map<Eigen::MatrixXd> Y(y.data() + lay.off_jac() + lay.n * lay.n, lay.n,
                                  lay.n);
    Y.setIdentity();  // W(0)=0, Wdot(0)=Id
  }
  if (lay.N) {
    Eigen::Map<Eigen::MatrixXcd> U(
        reinterpret_cast<std::complex<double>*>(y.data() + lay.off_fiber()), lay.N,
        lay.N);
    U.setIdentity();
  }
  return y;
}

}  // namespace

double geodesic_energy(const MetricFamily& fam, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& xdot) {
  return xdot.dot(fam.metric(x) * xdot);
}

GeodesicState exponential_map(const MetricFamily& fam, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& v, const OdeOptions& opt) {
  const int n = fam.dim();
  Layout lay{n, 0, true, true};
  GeoRhs rhs{&fam, lay, {}};
  Eigen::VectorXd y0 = pack_initial(lay, x0, v, nullptr);
  OdeResult r;
  try {
    r = integrate_ode(rhs, y0, 0.0, 1.0, opt);
  } catch (const IntegrationFailure& e) {
    throw GeodesicFailure(e.what());
  }
  GeodesicState st;
  st.x0 = x0;
  st.v = v;
  st.t = r.t;
  st.x = r.y.segment(0, n);
  st.xdot = r.y.segment(n, n);
  st.frame = Eigen::Map<Eigen::MatrixXd>(r.y.data() + lay.off_frame(), n, n);
  Eigen::MatrixXd W = Eigen::Map<Eigen::MatrixXd>(r.y.data() + lay.off_jac(), n, n);
  st.jac = W;  // at t=1, Dexp(v) = W(1)/1
  return st;
}

Eigen::MatrixXd dexp(const MetricFamily& fam, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& v, const OdeOptions& opt) {
  if (v.norm() < 1e-14) return Eigen::MatrixXd::Identity(fam.dim(), fam.dim());
  return exponential_map(fam, x0, v, opt).jac;
}

Eigen::VectorXd log_map(const MetricFamily& fam, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& target, const OdeOptions& opt) {
  Eigen::VectorXd z = target - x0;
  for (int it = 0; it < 50; ++it) {
    GeodesicState st = exponential_map(fam, x0, z, opt);
    Eigen::VectorXd F = st.x - target;
    if (F.norm() < 1e-12 * (1.0 + target.norm())) return z;
    z -= st.jac.partialPivLu().solve(F);
  }
  throw GeodesicFailure("log_map: shooting did not converge");
}

Eigen::MatrixXcd fiber_transport(const MetricFamily& fam, const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& v, const FiberConnection& conn,
                                 int fiber_dim, const OdeOptions& opt) {
  const int n = fam.dim();
  Layout lay{n, fiber_dim, false, false};
  GeoRhs rhs{&fam, lay, conn};
  Eigen::VectorXd y0 = pack_initial(lay, x0, v, nullptr);
  OdeResult r = integrate_ode(rhs, y0, 0.0, 1.0, opt);
  return Eigen::Map<Eigen::MatrixXcd>(
      reinterpret_cast<std::complex<double>*>(r.y.data() + lay.off_fiber()),
      fiber_dim, fiber_dim);
}

RayTrivialization radial_trivialization(const MetricFamily& fam,
                                        const Eigen::VectorXd& x0,
                                        const Eigen::VectorXd& omega, double r_max,
                                        int samples, const Eigen::MatrixXd& frame0,
                                        const FiberConnection& conn, int fiber_dim,
                                        const OdeOptions& opt) {
  if (samples < 2) throw InvalidInput("need at least 2 samples");
  const int n = fam.dim();
  const int N = conn ? fiber_dim : 0;
  Layout lay{n, N, true, true, true};
  GeoRhs rhs{&fam, lay, conn};
  Eigen::VectorXd y = pack_initial(lay, x0, omega, &frame0);

  RayTrivialization out;
  out.x0 = x0;
  out.omega = omega;
  out.r.resize(samples);
  const double gram0 = (frame0.transpose() * fam.metric(x0) * frame0).determinant();

  double t = 0;
  for (int i = 0; i < samples; ++i) {
    double ri = r_max * i / (samples - 1);
    out.r[i] = ri;
    if (ri > t) {
      OdeResult rr;
      try {
        rr = integrate_ode(rhs, y, t, ri, opt);
      } catch (const IntegrationFailure& e) {
        throw GeodesicFailure(e.what());
      }
      y = rr.y;
      t = ri;
    }
    Eigen::VectorXd x = y.segment(0, n);
    Eigen::VectorXd v = y.segment(n, n);
    Eigen::MatrixXd E = Eigen::Map<Eigen::MatrixXd>(y.data() + lay.off_frame(), n, n);
    Eigen::MatrixXd W = Eigen::Map<Eigen::MatrixXd>(y.data() + lay.off_jac(), n, n);
    Eigen::MatrixXd Y =
        Eigen::Map<Eigen::MatrixXd>(y.data() + lay.off_jac() + n * n, n, n);

    // Frame must stay g-orthonormal.
    double gram = (E.transpose() * fam.metric(x) * E).determinant();
    if (std::abs(gram - gram0) > 1e-6 * (1.0 + std::abs(gram0)))
      throw GeodesicFailure("frame degenerated along ray");

    out.x.push_back(x);
    out.xdot.push_back(v);
    out.frame.push_back(E);
    if (N) {
      out.fiber.push_back(Eigen::Map<Eigen::MatrixXcd>(
          reinterpret_cast<std::complex<double>*>(y.data() + lay.off_fiber()), N, N));
    }

    out.u0_ode.push_back(std::exp(y[lay.off_logu0()]));
    double sg = fam.sqrt_abs_det(x);
    if (i == 0) {
      out.det_jac.push_back(1.0);
      out.sqrtg_normal.push_back(sg);
      out.h.push_back(0.0);
    } else {
      Eigen::MatrixXd Jt = W / t;
      double dj = Jt.determinant();
      out.det_jac.push_back(dj);
      out.sqrtg_normal.push_back(sg * std::abs(dj));
      // h = r d/dr log |g~|^{1/2}
      //   = r [ grad log|g|^{1/2} . xdot + tr(Jt^{-1} d/dr Jt) ]
      std::vector<Eigen::MatrixXd> dg;
      fam.d_metric(x, dg);
      Eigen::MatrixXd ginv = fam.inverse_metric(x);
      double dlog_g = 0;
      for (int l = 0; l < n; ++l) dlog_g += 0.5 * (ginv * dg[l]).trace() * v[l];
      Eigen::MatrixXd Jtp = Y / t - W / (t * t);
      double tr = (Jt.partialPivLu().solve(Jtp)).trace();
      out.h.push_back(t * (dlog_g + tr));
    }
  }
  return out;
}

}  // namespace lz
