#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lz/curvature.hpp"
#include "lz/geodesic.hpp"
#include "lz/metric.hpp"

using namespace lz;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

// Independent scalar oracle for the warped family g = dt^2 - a(t)^2 dx^2,
// a = cosh(c t): R = -2 a''/a.
double warped_curvature_oracle(double rate, double t) {
  double a = std::cosh(rate * t);
  double add = rate * rate * std::cosh(rate * t);
  return -2.0 * add / a;
}

// Conformal 2D oracle R = -2 e^{-2 phi} box_eta phi, with box_eta phi taken by
// 4th-order differences of the closed-form profile (independent of the
// curvature pipeline).
double conformal_curvature_oracle(const MetricFamily& fam, const VectorXd& x) {
  const double h = 1e-3;
  auto phi = [&](const VectorXd& p) {
    double buf[2] = {p[0], p[1]};
    return fam.phi_T(buf);
  };
  double box = 0;
  for (int mu = 0; mu < 2; ++mu) {
    VectorXd e = VectorXd::Zero(2);
    e[mu] = 1;
    double d2 = (-phi(x + 2 * h * e) + 16 * phi(x + h * e) - 30 * phi(x) +
                 16 * phi(x - h * e) - phi(x - 2 * h * e)) /
                (12 * h * h);
    box += (mu == 0 ? 1.0 : -1.0) * d2;
  }
  double buf[2] = {x[0], x[1]};
  return -2.0 * std::exp(-2.0 * fam.phi_T(buf)) * box;
}

}  // namespace

TEST_CASE("metric_at: Minkowski is diag(1,-1)") {
  auto fam = MetricFamily::minkowski(2);
  VectorXd x = vec2(0.3, -1.7);
  MatrixXd g = fam.metric(x);
  CHECK(g(0, 0) == 1.0);
  CHECK(g(1, 1) == -1.0);
  CHECK(g(0, 1) == 0.0);
  fam.validate_at(x);
}

TEST_CASE("metric_at: conformal factor evaluates in closed form") {
  // phi = 0 identically -> flat
  auto flat = MetricFamily::conformal_bump(2, 0.0, 2.0);
  CHECK(flat.metric(vec2(0.1, 0.2))(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

  // gaussian profile, phi = 0.1 exp(-|x|^2), at x = 0 -> e^{0.2} diag(1,-1)
  auto fam = MetricFamily::conformal_bump(2, 0.1, 0.0, false, 1.0);
  MatrixXd g = fam.metric(vec2(0, 0));
  CHECK(g(0, 0) == doctest::Approx(std::exp(0.2)).epsilon(1e-14));
  CHECK(g(1, 1) == doctest::Approx(-std::exp(0.2)).epsilon(1e-14));
  fam.validate_at(vec2(0, 0));

  // compact profile is exactly Minkowski outside its support
  auto cb = MetricFamily::conformal_bump(2, 0.3, 1.5);
  MatrixXd gt = cb.metric(vec2(2.0, 0.0));
  CHECK(gt(0, 0) == 1.0);
  CHECK(gt(1, 1) == -1.0);
}

TEST_CASE("metric family config errors") {
  CHECK_THROWS_AS(MetricFamily::conformal_bump(2, 0.1, -1.0), ConfigError);
  CHECK_THROWS_AS(MetricFamily::minkowski(3), Unsupported);
}

TEST_CASE("curvature_at: Minkowski flat") {
  auto fam = MetricFamily::minkowski(2);
  auto c = curvature_at(fam, vec2(1.0, 2.0));
  CHECK(c.scalar == 0.0);
  for (int l = 0; l < 2; ++l) CHECK(c.christoffel[l].norm() == 0.0);
}

TEST_CASE("curvature_at: warped family matches -2 a''/a oracle") {
  auto fam = MetricFamily::warped(2, 1.0);
  for (double t : {0.0, 0.4, -0.8}) {
    auto c = curvature_at(fam, vec2(t, 0.7));
    CHECK(c.scalar == doctest::Approx(warped_curvature_oracle(1.0, t)).epsilon(1e-10));
  }
  auto fam2 = MetricFamily::warped(2, 0.6);
  auto c2 = curvature_at(fam2, vec2(0.2, 0.0));
  CHECK(c2.scalar == doctest::Approx(warped_curvature_oracle(0.6, 0.2)).epsilon(1e-10));
}

TEST_CASE("curvature_at: conformal gaussian matches closed-form oracle") {
  auto fam = MetricFamily::conformal_bump(2, 0.1, 0.0, false, 1.0);
  for (auto& x : {vec2(0, 0), vec2(0.3, -0.2), vec2(-0.5, 0.8)}) {
    auto c = curvature_at(fam, x);
    CHECK(c.scalar == doctest::Approx(conformal_curvature_oracle(fam, x)).epsilon(1e-6));
  }
}

TEST_CASE("curvature: Bianchi and symmetry residuals below tol_geom") {
  auto fam = MetricFamily::conformal_bump(2, 0.2, 0.0, false, 1.0);
  auto c = curvature_at(fam, vec2(0.4, 0.1));
  CHECK(bianchi_residual(c, 2) < 1e-6);
  // Gamma symmetric in lower indices
  for (int l = 0; l < 2; ++l)
    CHECK((c.christoffel[l] - c.christoffel[l].transpose()).norm() < 1e-12);
  // Riemann antisymmetric in the last two indices
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      for (int m = 0; m < 2; ++m)
        CHECK(std::abs(c.riem(r, s, m, m, 2)) < 1e-10);
}

TEST_CASE("curvature: flat tail is bit-zero for compact families") {
  auto fam = MetricFamily::conformal_bump(2, 0.3, 1.0);
  auto c = curvature_at(fam, vec2(1.5, 0.9));
  CHECK(c.scalar == 0.0);
  for (double v : c.riemann) CHECK(v == 0.0);
}

TEST_CASE("curvature: finite differences are 4th order") {
  auto fam = MetricFamily::conformal_bump(2, 0.1, 0.0, false, 1.0);
  VectorXd x = vec2(0.25, -0.4);
  double exact = curvature_at(fam, x).scalar;
  double e1 = std::abs(curvature_at(fam, x, 4e-2, false).scalar - exact);
  double e2 = std::abs(curvature_at(fam, x, 2e-2, false).scalar - exact);
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("exponential_map: Minkowski endpoint equals v") {
  auto fam = MetricFamily::minkowski(2);
  VectorXd v = vec2(0.7, -1.3);
  auto st = exponential_map(fam, vec2(0, 0), v);
  CHECK((st.x - v).norm() < 1e-13);
  CHECK((st.jac - MatrixXd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("exponential_map: straight continuation outside compact support") {
  auto fam = MetricFamily::conformal_bump(2, 0.2, 1.0);
  VectorXd x0 = vec2(0.1, 0.0);
  VectorXd v = vec2(0.5, 3.2);  // exits the unit-radius bump well before t=1
  auto st = exponential_map(fam, x0, v);

  // Re-integrate to an intermediate parameter past the support and check the
  // remaining segment is a straight line.
  OdeOptions opt;
  auto rhs = [&](double, const VectorXd& y, VectorXd& dy) {
    dy.resize(4);
    dy.segment(0, 2) = y.segment(2, 2);
    auto gam = christoffel_at(fam, y.segment(0, 2));
    for (int l = 0; l < 2; ++l)
      dy[2 + l] = -y.segment(2, 2).dot(gam[l] * y.segment(2, 2));
  };
  VectorXd y0(4);
  y0 << x0, v;
  auto mid = integrate_ode(rhs, y0, 0.0, 0.7, opt);
  CHECK(mid.y.segment(0, 2).norm() > 1.0 + 1e-6);  // outside support
  VectorXd predicted = mid.y.segment(0, 2) + 0.3 * mid.y.segment(2, 2);
  CHECK((st.x - predicted).norm() < 1e-9);
}

TEST_CASE("exponential_map: agreement with tighter-tolerance reintegration") {
  auto fam = MetricFamily::conformal_bump(2, 0.2, 0.0, false, 1.0);
  VectorXd x0 = vec2(0.0, 0.1);
  VectorXd v = vec2(0.4, 0.3);
  OdeOptions loose;
  loose.rtol = 1e-10;
  loose.atol = 1e-12;
  OdeOptions tight;
  tight.rtol = 1e-13;
  tight.atol = 1e-15;
  auto a = exponential_map(fam, x0, v, loose);
  auto b = exponential_map(fam, x0, v, tight);
  CHECK((a.x - b.x).norm() < 10 * 1e-10);
}

TEST_CASE("geodesic energy conservation") {
  auto fam = MetricFamily::conformal_bump(2, 0.3, 0.0, false, 0.8);
  VectorXd x0 = vec2(-0.2, 0.0);
  for (auto& v : {vec2(1.0, 0.2), vec2(0.3, -0.9), vec2(0.5, 0.5)}) {
    auto st = exponential_map(fam, x0, v);
    double e0 = geodesic_energy(fam, x0, v);
    double e1 = geodesic_energy(fam, st.x, st.xdot);
    CHECK(std::abs(e1 - e0) <= 1e-10 * (1.0 + v.squaredNorm()));
  }
}

TEST_CASE("log_map inverts exponential_map") {
  auto fam = MetricFamily::conformal_bump(2, 0.15, 0.0, false, 1.0);
  VectorXd x0 = vec2(0.1, -0.1);
  VectorXd v = vec2(0.3, 0.25);
  auto st = exponential_map(fam, x0, v);
  VectorXd z = log_map(fam, x0, st.x);
  CHECK((z - v).norm() < 1e-9);
}

TEST_CASE("radial_trivialization: Minkowski has h == 0 and constant frame") {
  auto fam = MetricFamily::minkowski(2);
  MatrixXd frame0 = MatrixXd::Identity(2, 2);
  auto ray = radial_trivialization(fam, vec2(0, 0), vec2(0.6, 0.8), 2.0, 9, frame0);
  for (int i = 0; i < 9; ++i) {
    CHECK(std::abs(ray.h[i]) < 1e-12);
    CHECK((ray.frame[i] - frame0).norm() < 1e-12);
    CHECK(ray.sqrtg_normal[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("radial_trivialization: h(0) = 0 and conformal leading-order form") {
  const double a = 1e-3;
  auto fam = MetricFamily::conformal_bump(2, a, 0.0, false, 1.0);
  VectorXd omega = vec2(0.8, 0.6);
  const double rmax = 0.5;
  auto ray = radial_trivialization(fam, vec2(0, 0), omega, rmax, 11,
                                   MatrixXd::Identity(2, 2));
  CHECK(ray.h[0] == 0.0);
  // oracle r d/dr [2 phi(r omega)] from the closed-form profile; holds to
  // leading order in the amplitude (the van Vleck factor enters at O(a r^2))
  for (int i = 1; i < 11; ++i) {
    double r = ray.r[i];
    VectorXd p = r * omega;
    double buf[2] = {p[0], p[1]};
    double grad[2];
    fam.dphi_T(buf, grad);
    double oracle = 2.0 * r * (grad[0] * omega[0] + grad[1] * omega[1]);
    CHECK(std::abs(ray.h[i] - oracle) <= 10 * a * r * r + 1e-12);
    CHECK(std::abs(ray.h[i]) > 0.0);
  }
  // exact cross-check: h against a centered difference of log sqrtg_normal
  auto dense = radial_trivialization(fam, vec2(0, 0), omega, rmax, 201,
                                     MatrixXd::Identity(2, 2));
  double dr = dense.r[1] - dense.r[0];
  for (int i = 10; i + 10 < 201; i += 37) {
    double d = (std::log(dense.sqrtg_normal[i + 1]) -
                std::log(dense.sqrtg_normal[i - 1])) /
               (2 * dr);
    CHECK(std::abs(dense.h[i] - dense.r[i] * d) < 1e-6);
  }
}

TEST_CASE("radial_trivialization: frame stays g-orthonormal") {
  auto fam = MetricFamily::conformal_bump(2, 0.2, 0.0, false, 1.0);
  // start from a g(x0)-orthonormal frame (conformal rescale of the identity)
  VectorXd x0 = vec2(0, 0);
  double buf[2] = {0, 0};
  double s = std::exp(-fam.phi_T(buf));
  MatrixXd frame0 = s * MatrixXd::Identity(2, 2);
  auto ray = radial_trivialization(fam, x0, vec2(1.0, 0.0), 1.5, 7, frame0);
  Eigen::Matrix2d eta;
  eta << 1, 0, 0, -1;
  for (int i = 0; i < 7; ++i) {
    MatrixXd gram = ray.frame[i].transpose() * fam.metric(ray.x[i]) * ray.frame[i];
    CHECK((gram - eta).norm() < 1e-8);
  }
}
