#include "lz/curvature.hpp"

#include <cmath>

#include "lz/numerics.hpp"

namespace lz {
namespace {

std::vector<Eigen::MatrixXd> christoffel_from(const Eigen::MatrixXd& ginv,
                                              const std::vector<Eigen::MatrixXd>& dg) {
  const int n = ginv.rows();
  std::vector<Eigen::MatrixXd> gam(n, Eigen::MatrixXd::Zero(n, n));
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int sg = 0; sg < n; ++sg)
          s += ginv(l, sg) * (dg[m](sg, k) + dg[k](sg, m) - dg[sg](m, k));
        gam[l](m, k) = 0.5 * s;
      }
  return gam;
}

void d_metric_fd(const MetricFamily& fam, const Eigen::VectorXd& x, double h,
                 std::vector<Eigen::MatrixXd>& dg) {
  const int n = fam.dim();
  dg.assign(n, Eigen::MatrixXd(n, n));
  for (int l = 0; l < n; ++l) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[l] = 1.0;
    dg[l] = (-fam.metric(x + 2 * h * e) + 8 * fam.metric(x + h * e) -
             8 * fam.metric(x - h * e) + fam.metric(x - 2 * h * e)) /
            (12 * h);
  }
}

std::vector<Eigen::MatrixXd> christoffel_fd(const MetricFamily& fam,
                                            const Eigen::VectorXd& x, double h) {
  std::vector<Eigen::MatrixXd> dg;
  d_metric_fd(fam, x, h, dg);
  return christoffel_from(fam.inverse_metric(x), dg);
}

}  // namespace

std::vector<Eigen::MatrixXd> christoffel_at(const MetricFamily& fam,
                                            const Eigen::VectorXd& x) {
  std::vector<Eigen::MatrixXd> dg;
  fam.d_metric(x, dg);
  return christoffel_from(fam.inverse_metric(x), dg);
}

void christoffel_and_derivative(const MetricFamily& fam, const Eigen::VectorXd& x,
                                std::vector<Eigen::MatrixXd>& gam,
                                std::vector<std::vector<Eigen::MatrixXd>>& dgam) {
  const int n = fam.dim();
  Eigen::MatrixXd ginv = fam.inverse_metric(x);
  std::vector<Eigen::MatrixXd> dg;
  fam.d_metric(x, dg);
  gam = christoffel_from(ginv, dg);
  std::vector<std::vector<Eigen::MatrixXd>> ddg;
  fam.dd_metric(x, ddg);
  dgam.assign(n, {});
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd dginv = -ginv * dg[k] * ginv;
    dgam[k].assign(n, Eigen::MatrixXd::Zero(n, n));
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) {
          double s = 0;
          for (int sg = 0; sg < n; ++sg) {
            s += dginv(l, sg) * (dg[m](sg, q) + dg[q](sg, m) - dg[sg](m, q));
            s += ginv(l, sg) *
                 (ddg[k][m](sg, q) + ddg[k][q](sg, m) - ddg[k][sg](m, q));
          }
          dgam[k][l](m, q) = 0.5 * s;
        }
  }
}

CurvatureData curvature_at(const MetricFamily& fam, const Eigen::VectorXd& x,
                           double step, bool use_analytic) {
  if (!(step > 0) && !use_analytic) throw InvalidInput("step must be > 0");
  const int n = fam.dim();
  Eigen::MatrixXd g = fam.metric(x);
  double det = g.determinant();
  if (!(std::abs(det) > 1e-300)) throw SingularMetric("metric not invertible");
  Eigen::MatrixXd ginv = g.inverse();

  CurvatureData out;
  out.x = x;
  out.sqrtg = std::sqrt(std::abs(det));

  std::vector<Eigen::MatrixXd> dg;
  std::vector<Eigen::MatrixXd> gam;
  // dGam[kappa][lambda](mu,nu) = d_kappa Gamma^lambda_{mu nu}
  std::vector<std::vector<Eigen::MatrixXd>> dgam(n);

  if (use_analytic) {
    fam.d_metric(x, dg);
    gam = christoffel_from(ginv, dg);
    std::vector<std::vector<Eigen::MatrixXd>> ddg;
    fam.dd_metric(x, ddg);
    for (int k = 0; k < n; ++k) {
      // d_k Gamma = 1/2 d_k(g^-1)(...) + 1/2 g^-1 d_k(...)
      Eigen::MatrixXd dginv = -ginv * dg[k] * ginv;
      dgam[k].assign(n, Eigen::MatrixXd::Zero(n, n));
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          for (int q = 0; q < n; ++q) {
            double s = 0;
            for (int sg = 0; sg < n; ++sg) {
              s += dginv(l, sg) * (dg[m](sg, q) + dg[q](sg, m) - dg[sg](m, q));
              s += ginv(l, sg) * (ddg[k][m](sg, q) + ddg[k][q](sg, m) -
                                  ddg[k][sg](m, q));
            }
            dgam[k][l](m, q) = 0.5 * s;
          }
    }
    out.grad_log_sqrtg = Eigen::VectorXd(n);
    for (int l = 0; l < n; ++l)
      out.grad_log_sqrtg[l] = 0.5 * (ginv * dg[l]).trace();
  } else {
    d_metric_fd(fam, x, step, dg);
    gam = christoffel_from(ginv, dg);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[k] = 1.0;
      auto gp2 = christoffel_fd(fam, x + 2 * step * e, step);
      auto gp1 = christoffel_fd(fam, x + step * e, step);
      auto gm1 = christoffel_fd(fam, x - step * e, step);
      auto gm2 = christoffel_fd(fam, x - 2 * step * e, step);
      dgam[k].assign(n, Eigen::MatrixXd::Zero(n, n));
      for (int l = 0; l < n; ++l)
        dgam[k][l] = (-gp2[l] + 8 * gp1[l] - 8 * gm1[l] + gm2[l]) / (12 * step);
    }
    out.grad_log_sqrtg = Eigen::VectorXd(n);
    for (int l = 0; l < n; ++l)
      out.grad_log_sqrtg[l] = 0.5 * (ginv * dg[l]).trace();
  }

  out.christoffel = gam;
  out.riemann.assign(n * n * n * n, 0.0);
  // R^r_{s m n} = d_m Gam^r_{n s} - d_n Gam^r_{m s}
  //              + Gam^r_{m l} Gam^l_{n s} - Gam^r_{n l} Gam^l_{m s}
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) {
          double v = dgam[m][r](q, s) - dgam[q][r](m, s);
          for (int l = 0; l < n; ++l)
            v += gam[r](m, l) * gam[l](q, s) - gam[r](q, l) * gam[l](m, s);
          out.riemann[((r * n + s) * n + m) * n + q] = v;
        }

  out.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int q = 0; q < n; ++q) {
      double v = 0;
      for (int m = 0; m < n; ++m) v += out.riem(m, s, m, q, n);
      out.ricci(s, q) = v;
    }
  out.scalar = (ginv * out.ricci).trace();
  return out;
}

double bianchi_residual(const CurvatureData& c, int n) {
  double worst = 0;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) {
          double v = c.riem(r, s, m, q, n) + c.riem(r, m, q, s, n) +
                     c.riem(r, q, s, m, n);
          worst = std::max(worst, std::abs(v));
        }
  return worst;
}

}  // namespace lz
