#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "lz/errors.hpp"

namespace lz {

// ----------------------------------------------------------- flat kernels

// On-diagonal value of the flat distribution family
//   F^(alpha)_lambda(0) = Gamma(alpha+1)/(2 pi)^n  Int (|xi|^2_eta - lambda)^{-alpha-1} dxi,
// |xi|^2_eta = -xi_0^2 + |xi'|^2, Im lambda > 0.  Closed form derived by
// rotating the xi_0 integration to the imaginary axis:
//   F = i / (2^n pi^{n/2}) * Gamma(alpha + 1 - n/2) * (-lambda)^{n/2 - alpha - 1}
// (principal branch; -lambda lies in the lower half-plane).
std::complex<double> flat_F_alpha_diag(int n, std::complex<double> alpha,
                                       std::complex<double> lambda);

// Flat spectral zeta density (P - i eps)^{-alpha}(x,x) per fiber component:
// F^(alpha-1)_{i eps}(0) / Gamma(alpha).
std::complex<double> flat_zeta_density(int n, std::complex<double> alpha, double eps);

// eq-residue prediction: res_{alpha = n/2 - k} = i u_k / (2^n pi^{n/2} (n/2-k-1)!)
Eigen::MatrixXcd residue_prediction(int k, int n, const Eigen::MatrixXcd& u_k_diag);

// factor converting contour integrals of F_m into F_{m+alpha-1}:
// (-1)^m Gamma(1-alpha) / (Gamma(1-alpha-m) Gamma(alpha+m)); evaluated in the
// pole-safe product form (identically equal to 1/Gamma(alpha)).
std::complex<double> mellin_gamma_factor(std::complex<double> alpha, int m);

// ------------------------------------------------- Schwartz functions of P

// Built-in profile class: fhat(t) = t^q e^{-sigma t} on (0, inf).
struct SchwartzProfile {
  double q = 1.0;
  double sigma = 1.0;
};

// standard Mellin transform of the profile: Gamma(alpha + q) / sigma^{alpha+q}
std::complex<double> profile_mellin(const SchwartzProfile& f,
                                    std::complex<double> alpha);

// c0 = Int_0^inf fhat(t) t^{n/2-1} dt
double profile_c0(const SchwartzProfile& f, int n);

// direct evaluation of the represented function,
// f(w) = Int_0^inf fhat(t) e^{i w / t} dt / t  (Im w > 0)
std::complex<double> profile_function(const SchwartzProfile& f,
                                      std::complex<double> w);

// Vertical-line functional calculus
//   (1/2 pi i) Int_{Re alpha = c} e^{i alpha pi/2} S(alpha) Gamma(alpha)
//                                 M fhat(alpha) d alpha,
// where S(alpha) samples the diagonal of (P + i eps)^{-alpha} (or a scalar
// power).  Throws TruncationError when the integrand has not decayed at the
// line ends.
std::complex<double> schwartz_function_of_power(
    const std::function<std::complex<double>(std::complex<double>)>& power_sample,
    const SchwartzProfile& f, double c, double im_max = 40.0,
    int panels_per_unit = 2);

// trace density of f(h^2 (P + i eps)) on the flat torus, through the vertical
// line formula with the Fourier-diagonalized power samples
struct HScalingPoint {
  double h;
  std::complex<double> value;
};

struct HScalingReport {
  std::vector<HScalingPoint> points;
  double slope = 0;                    // d log|value| / d log h
  std::complex<double> leading_coeff;  // value * h^n extrapolated at smallest h
  std::complex<double> predicted_coeff;  // e^{i n pi/4} c0 rk / (i 2^n pi^{n/2})
};

}  // namespace lz
