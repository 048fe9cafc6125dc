#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace lz {

using cdouble = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// ------------------------------------------------------------- summation

// Kahan compensated accumulator; order-fixed reductions keep parallel runs
// byte-reproducible.
template <class T>
class KahanSum {
 public:
  void add(const T& v) {
    T y = v - c_;
    T t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  T value() const { return s_; }

 private:
  T s_{};
  T c_{};
};

// ------------------------------------------------------------ branch cuts

// w^expnt with arg(w) taken in (arg_min, arg_min + 2*pi].
cdouble pow_branch(cdouble w, cdouble expnt, double arg_min);

// Principal power, arg in (-pi, pi].
inline cdouble pow_principal(cdouble w, cdouble expnt) {
  return pow_branch(w, expnt, -kPi);
}

// Branch used for (z - i*eps)^(-alpha) on the spectral contour: cut along the
// upward vertical ray from the branch point, arg in (-3*pi/2, pi/2].  On the
// lower half-plane (where the spectrum sits) it coincides with the principal
// branch.
inline cdouble pow_upcut(cdouble w, cdouble expnt) {
  return pow_branch(w, expnt, -1.5 * kPi);
}

// ------------------------------------------------------------- quadrature

struct QuadNodes {
  std::vector<double> x;
  std::vector<double> w;
};

// 16-point Gauss-Legendre rule mapped to [a,b].
QuadNodes gauss_legendre_panel(double a, double b);

// Adaptive Simpson on [a,b]; complex-valued integrand of a real variable.
cdouble integrate_adaptive(const std::function<cdouble(double)>& f, double a,
                           double b, double tol = 1e-12, int max_depth = 48);

// Semi-infinite integral via x = a + t/(1-t) substitution on [0,1).
cdouble integrate_half_line(const std::function<cdouble(double)>& f, double a,
                            double tol = 1e-12);

// ---------------------------------------------------------- differentiation

// Complex-step derivative of a real-analytic scalar map supplied in templated
// form; exact to machine precision, no subtractive cancellation.
template <class F>
double complex_step(F&& f, double x, double h = 1e-100) {
  std::complex<double> z(x, h);
  return f(z).imag() / h;
}

// 4th-order central first derivative.
template <class F>
double central4(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// --------------------------------------------------------------- threading

// Deterministic data-parallel loop.  Worker count from LORENTZ_ZETA_THREADS
// (default: hardware concurrency); tasks write disjoint slots only.
int worker_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lz
