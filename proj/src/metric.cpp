#include "lz/metric.hpp"

#include <Eigen/Eigenvalues>

namespace lz {

MetricFamily MetricFamily::minkowski(int n) {
  if (n != 2 && n != 4) throw Unsupported("dimension must be 2 or 4");
  return MetricFamily(Kind::minkowski, n, Params{});
}

MetricFamily MetricFamily::conformal_bump(int n, double amplitude, double radius,
                                          bool compact, double width) {
  if (n != 2 && n != 4) throw Unsupported("dimension must be 2 or 4");
  Params p;
  p.amplitude = amplitude;
  p.radius = radius;
  p.compact = compact;
  p.width = width;
  if (compact && radius <= 0) throw ConfigError("conformal bump radius must be > 0");
  if (!compact && width <= 0) throw ConfigError("conformal bump width must be > 0");
  return MetricFamily(Kind::conformal_bump, n, p);
}

MetricFamily MetricFamily::warped(int n, double rate) {
  if (n != 2 && n != 4) throw Unsupported("dimension must be 2 or 4");
  Params p;
  p.rate = rate;
  return MetricFamily(Kind::warped, n, p);
}

std::string MetricFamily::label() const {
  switch (kind_) {
    case Kind::minkowski: return "minkowski";
    case Kind::conformal_bump: return "conformal_bump";
    case Kind::warped: return "warped";
  }
  return "?";
}

double MetricFamily::perturbation_radius() const {
  switch (kind_) {
    case Kind::minkowski: return 0.0;
    case Kind::conformal_bump:
      return par_.compact ? par_.radius : std::numeric_limits<double>::infinity();
    case Kind::warped: return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd MetricFamily::metric(const Eigen::VectorXd& x) const {
  if (x.size() != n_ || !x.allFinite()) throw InvalidInput("bad point");
  Eigen::MatrixXd g(n_, n_);
  metric_T(x.data(), g.data());  // row/col-major irrelevant: symmetric
  return g;
}

Eigen::MatrixXd MetricFamily::inverse_metric(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd g = metric(x);
  double det = g.determinant();
  if (!(std::abs(det) > 1e-300)) throw SingularMetric("det g = 0");
  return g.inverse();
}

double MetricFamily::sqrt_abs_det(const Eigen::VectorXd& x) const {
  return std::sqrt(std::abs(metric(x).determinant()));
}

void MetricFamily::validate_at(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd g = metric(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  int pos = 0, neg = 0;
  for (int i = 0; i < n_; ++i) {
    if (es.eigenvalues()[i] > 0) ++pos;
    if (es.eigenvalues()[i] < 0) ++neg;
  }
  if (pos != 1 || neg != n_ - 1)
    throw ConfigError("metric signature is not (1, n-1) at sampled point");
  if (!(g.determinant() < 0) && n_ % 2 == 0)
    throw ConfigError("metric not Lorentzian: det g >= 0");
}

void MetricFamily::d_metric(const Eigen::VectorXd& x,
                            std::vector<Eigen::MatrixXd>& dg) const {
  const int n = n_;
  std::vector<double> buf(n * n * n);
  d_metric_T(x.data(), buf.data());
  dg.assign(n, Eigen::MatrixXd(n, n));
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) dg[l](m, k) = buf[l * n * n + m * n + k];
}

void MetricFamily::dd_metric(const Eigen::VectorXd& x,
                             std::vector<std::vector<Eigen::MatrixXd>>& ddg) const {
  const int n = n_;
  const double h = 1e-100;
  ddg.assign(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd(n, n)));
  std::vector<std::complex<double>> xc(n), buf(n * n * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) xc[i] = {x[i], i == k ? h : 0.0};
    d_metric_T(xc.data(), buf.data());
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q)
          ddg[k][l](m, q) = buf[l * n * n + m * n + q].imag() / h;
  }
}

}  // namespace lz
