#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lz/gammafn.hpp"
#include "lz/numerics.hpp"
#include "lz/ode.hpp"
#include "lz/rng.hpp"

using namespace lz;

namespace {

// Spouge's approximation, independent of the Lanczos coefficients in the
// library; serves as the second gamma implementation for cross-checks.
std::complex<double> gamma_spouge(std::complex<double> z) {
  const int a = 12;
  if (z.real() < 0.5)
    return kPi / (std::sin(kPi * z) * gamma_spouge(1.0 - z));
  z -= 1.0;
  // Gamma(z+1) = (z+a)^{z+1/2} e^{-(z+a)} [sqrt(2 pi) + sum c_k/(z+k)]
  // with c_k = (-1)^{k-1}/(k-1)! (a-k)^{k-1/2} e^{a-k}.
  std::complex<double> sum = std::sqrt(2 * kPi);
  double sign_fact = 1.0;  // (-1)^{k-1}/(k-1)!
  for (int k = 1; k < a; ++k) {
    if (k > 1) sign_fact /= -(k - 1.0);
    double ck = sign_fact * std::pow(a - k, k - 0.5) *
                std::exp(static_cast<double>(a - k));
    sum += ck / (z + static_cast<double>(k));
  }
  return sum * std::exp(-(z + static_cast<double>(a))) *
         std::pow(z + static_cast<double>(a), z + 0.5);
}

}  // namespace

TEST_CASE("complex gamma against Spouge and known values") {
  CHECK(std::abs(gamma_c({5, 0}) - std::complex<double>(24, 0)) < 1e-10);
  CHECK(std::abs(gamma_c({0.5, 0}) - std::complex<double>(std::sqrt(kPi), 0)) < 1e-12);
  for (std::complex<double> z : {std::complex<double>(2.5, 1.0),
                                 std::complex<double>(0.3, -2.0),
                                 std::complex<double>(-1.3, 0.7),
                                 std::complex<double>(4.0, 3.0)}) {
    auto g1 = gamma_c(z);
    auto g2 = gamma_spouge(z);
    CHECK(std::abs(g1 - g2) / std::abs(g2) < 1e-9);
  }
  // rgamma vanishes at the poles
  CHECK(std::abs(rgamma_c({0.0, 0.0})) < 1e-14);
  CHECK(std::abs(rgamma_c({-3.0, 0.0})) < 1e-13);
}

TEST_CASE("branch powers") {
  using namespace std::complex_literals;
  // principal
  CHECK(std::abs(pow_principal(4.0 + 0.0i, 0.5) - 2.0) < 1e-14);
  // upcut branch agrees with principal on the lower half-plane
  cdouble w = 1.0 - 2.0i;
  CHECK(std::abs(pow_upcut(w, -0.7) - pow_principal(w, -0.7)) < 1e-14);
  // ... and differs by the wrap on the upper-left quadrant
  cdouble u = -1.0 + 0.5i;
  cdouble expect = pow_principal(u, -0.7) * std::exp(cdouble(0, 2 * kPi * 0.7));
  CHECK(std::abs(pow_upcut(u, -0.7) - expect) < 1e-12);
}

TEST_CASE("gauss-legendre panel integrates polynomials exactly") {
  auto q = gauss_legendre_panel(-1.0, 3.0);
  double s = 0;
  for (size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(q.x[i], 7);
  CHECK(s == doctest::Approx((std::pow(3.0, 8) - 1.0) / 8.0).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature") {
  auto v = integrate_adaptive([](double x) { return cdouble(std::exp(-x * x), 0); },
                              -8, 8, 1e-13);
  CHECK(std::abs(v.real() - std::sqrt(kPi)) < 1e-11);
  auto h = integrate_half_line(
      [](double x) { return cdouble(std::exp(-x), std::sin(x) * std::exp(-x)); }, 0.0,
      1e-12);
  CHECK(std::abs(h.real() - 1.0) < 1e-9);
  CHECK(std::abs(h.imag() - 0.5) < 1e-9);
}

TEST_CASE("counter rng determinism and splitting") {
  CounterRng r(42);
  CHECK(r.uniform(7) == CounterRng(42).uniform(7));
  CHECK(r.uniform(7) != r.uniform(8));
  auto s1 = r.split(1), s2 = r.split(2);
  CHECK(s1.uniform(0) != s2.uniform(0));
  double m = 0;
  for (int i = 0; i < 10000; ++i) m += r.uniform(i);
  CHECK(std::abs(m / 10000 - 0.5) < 0.02);
}

TEST_CASE("ode integrator on a stiff-ish oscillator") {
  // y'' = -y, exact solution cos t
  auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  Eigen::VectorXd y0(2);
  y0 << 1, 0;
  OdeOptions opt;
  auto r = integrate_ode(rhs, y0, 0, 10.0, opt);
  CHECK(std::abs(r.y[0] - std::cos(10.0)) < 1e-8);
}

TEST_CASE("complex step derivative") {
  auto f = [](std::complex<double> z) { return std::exp(z) * std::sin(z); };
  double d = complex_step(f, 0.7);
  double exact = std::exp(0.7) * (std::sin(0.7) + std::cos(0.7));
  CHECK(std::abs(d - exact) < 1e-14);
}
