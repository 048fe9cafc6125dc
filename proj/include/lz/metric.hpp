#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "lz/errors.hpp"

namespace nlohmann {
template <typename T, typename SFINAE>
struct adl_serializer;
}

namespace lz {

// Built-in parametric scattering metrics on R^n, signature (+,-,...,-).
// Closed forms are templated on the scalar type so symbol code can take
// complex-step derivatives through them.
class MetricFamily {
 public:
  enum class Kind { minkowski, conformal_bump, warped };

  struct Params {
    double amplitude = 0.0;   // conformal amplitude
    double width = 1.0;       // gaussian profile width
    double radius = 2.0;      // compact profile support radius
    bool compact = true;      // conformal profile flavor
    double rate = 1.0;        // warped: a(t) = cosh(rate*t)
  };

  MetricFamily() = default;

  static MetricFamily minkowski(int n);
  static MetricFamily conformal_bump(int n, double amplitude, double radius,
                                     bool compact = true, double width = 1.0);
  static MetricFamily warped(int n, double rate = 1.0);

  int dim() const { return n_; }
  Kind kind() const { return kind_; }
  const Params& params() const { return par_; }
  std::string label() const;

  // Radius beyond which the metric is exactly Minkowski (inf if never).
  double perturbation_radius() const;
  bool flat_tail_exact() const { return std::isfinite(perturbation_radius()); }

  Eigen::MatrixXd metric(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd inverse_metric(const Eigen::VectorXd& x) const;
  double sqrt_abs_det(const Eigen::VectorXd& x) const;

  // signature (1, n-1) check; throws ConfigError on violation
  void validate_at(const Eigen::VectorXd& x) const;

  // analytic first derivatives dg[lambda](mu,nu)
  void d_metric(const Eigen::VectorXd& x, std::vector<Eigen::MatrixXd>& dg) const;
  // analytic second derivatives ddg[kappa][lambda](mu,nu) via complex step
  // through the closed-form first derivatives
  void dd_metric(const Eigen::VectorXd& x,
                 std::vector<std::vector<Eigen::MatrixXd>>& ddg) const;

  // --- templated closed forms -------------------------------------------

  template <class T>
  void metric_T(const T* x, T* g) const {  // row-major n*n
    const int n = n_;
    for (int i = 0; i < n * n; ++i) g[i] = T(0);
    switch (kind_) {
      case Kind::minkowski: {
        g[0] = T(1);
        for (int i = 1; i < n; ++i) g[i * n + i] = T(-1);
        break;
      }
      case Kind::conformal_bump: {
        T w = exp(T(2) * phi_T(x));
        g[0] = w;
        for (int i = 1; i < n; ++i) g[i * n + i] = -w;
        break;
      }
      case Kind::warped: {
        using std::cosh;
        T a = cosh(par_.rate * x[0]);
        g[0] = T(1);
        for (int i = 1; i < n; ++i) g[i * n + i] = -a * a;
        break;
      }
    }
  }

  template <class T>
  void d_metric_T(const T* x, T* dg) const {  // dg[l*n*n + m*n + k]
    const int n = n_;
    for (int i = 0; i < n * n * n; ++i) dg[i] = T(0);
    switch (kind_) {
      case Kind::minkowski:
        break;
      case Kind::conformal_bump: {
        T w = exp(T(2) * phi_T(x));
        T grad[4];
        dphi_T(x, grad);
        for (int l = 0; l < n; ++l) {
          T c = T(2) * grad[l] * w;
          dg[l * n * n + 0] = c;
          for (int i = 1; i < n; ++i) dg[l * n * n + i * n + i] = -c;
        }
        break;
      }
      case Kind::warped: {
        using std::cosh;
        using std::sinh;
        T a = cosh(par_.rate * x[0]);
        T ad = par_.rate * sinh(par_.rate * x[0]);
        for (int i = 1; i < n; ++i) dg[0 * n * n + i * n + i] = T(-2) * a * ad;
        break;
      }
    }
  }

  // conformal factor phi and its gradient
  template <class T>
  T phi_T(const T* x) const {
    T s2 = T(0);
    for (int i = 0; i < n_; ++i) s2 += x[i] * x[i];
    if (par_.compact) {
      double re = real_part(s2) / (par_.radius * par_.radius);
      if (re >= 1.0) return T(0);
      T s = s2 / (par_.radius * par_.radius);
      return par_.amplitude * exp(T(1) - T(1) / (T(1) - s));
    }
    return par_.amplitude * exp(-s2 / (par_.width * par_.width));
  }

  template <class T>
  void dphi_T(const T* x, T* grad) const {
    T s2 = T(0);
    for (int i = 0; i < n_; ++i) s2 += x[i] * x[i];
    if (par_.compact) {
      const double R2 = par_.radius * par_.radius;
      double re = real_part(s2) / R2;
      if (re >= 1.0) {
        for (int i = 0; i < n_; ++i) grad[i] = T(0);
        return;
      }
      T s = s2 / R2;
      T u = T(1) / (T(1) - s);
      T phi = par_.amplitude * exp(T(1) - u);
      for (int i = 0; i < n_; ++i) grad[i] = -phi * u * u * (T(2) * x[i] / R2);
    } else {
      const double w2 = par_.width * par_.width;
      T phi = par_.amplitude * exp(-s2 / w2);
      for (int i = 0; i < n_; ++i) grad[i] = -T(2) * x[i] / w2 * phi;
    }
  }

 private:
  static double real_part(double v) { return v; }
  static double real_part(const std::complex<double>& v) { return v.real(); }

  MetricFamily(Kind k, int n, Params p) : kind_(k), n_(n), par_(p) {}

  Kind kind_ = Kind::minkowski;
  int n_ = 2;
  Params par_;
};

}  // namespace lz
