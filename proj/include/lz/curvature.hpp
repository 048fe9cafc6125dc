#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lz/metric.hpp"

namespace lz {

struct CurvatureData {
  Eigen::VectorXd x;
  std::vector<Eigen::MatrixXd> christoffel;  // [lambda](mu,nu)
  std::vector<double> riemann;               // R^rho_{sigma mu nu}, flat index
  Eigen::MatrixXd ricci;                     // R_{sigma nu} = R^mu_{sigma mu nu}
  double scalar = 0;                         // R_g = g^{sigma nu} R_{sigma nu}
  double sqrtg = 0;                          // |g|^{1/2}
  Eigen::VectorXd grad_log_sqrtg;

  double riem(int r, int s, int m, int n, int dim) const {
    return riemann[((r * dim + s) * dim + m) * dim + n];
  }
};

// Curvature pipeline.  use_analytic picks the closed-form metric derivatives;
// otherwise 4th-order central differences with the given step.
CurvatureData curvature_at(const MetricFamily& fam, const Eigen::VectorXd& x,
                           double step = 1e-3, bool use_analytic = true);

std::vector<Eigen::MatrixXd> christoffel_at(const MetricFamily& fam,
                                            const Eigen::VectorXd& x);

// Gamma and d_kappa Gamma from the analytic metric derivatives (used by the
// variational equations of the geodesic flow).
void christoffel_and_derivative(const MetricFamily& fam, const Eigen::VectorXd& x,
                                std::vector<Eigen::MatrixXd>& gam,
                                std::vector<std::vector<Eigen::MatrixXd>>& dgam);

// max residual of the first Bianchi identity R^r_{[smn]} = 0
double bianchi_residual(const CurvatureData& c, int dim);

}  // namespace lz
