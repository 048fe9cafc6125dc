#include "lz/hadamard.hpp"

#include <cmath>

#include "lz/gammafn.hpp"
#include "lz/numerics.hpp"

namespace lz {

using cd = std::complex<double>;

cd flat_F_alpha_diag(int n, cd alpha, cd lambda) {
  if (n % 2 != 0 || n < 2) throw Unsupported("even dimension required");
  if (!(lambda.imag() > 0)) throw InvalidInput("Im lambda must be > 0");
  auto near_nonpositive_integer = [](cd z, double ceiling) {
    double r = std::round(z.real());
    return r <= ceiling &&
           std::hypot(z.real() - r, z.imag()) < 1e-6;
  };
  // poles of Gamma(alpha + 1 - n/2) at alpha = n/2 - 1 - j
  if (near_nonpositive_integer(alpha + 1.0 - n / 2.0, 0.0))
    throw PoleProximity("alpha within 1e-6 of a pole of the closed form");
  // poles of the Gamma(alpha+1) prefactor in the defining integral
  if (near_nonpositive_integer(alpha, -1.0))
    throw PoleProximity("alpha within 1e-6 of a negative integer");
  double pref = std::pow(2.0, n) * std::pow(kPi, n / 2.0);
  return cd(0, 1) / pref * gamma_c(alpha + 1.0 - n / 2.0) *
         pow_principal(-lambda, cd(n / 2.0, 0) - alpha - 1.0);
}

cd flat_zeta_density(int n, cd alpha, double eps) {
  if (!(eps > 0)) throw InvalidInput("eps must be > 0");
  return flat_F_alpha_diag(n, alpha - 1.0, cd(0, eps)) * rgamma_c(alpha);
}

Eigen::MatrixXcd residue_prediction(int k, int n, const Eigen::MatrixXcd& u_k_diag) {
  if (n % 2 != 0) throw Unsupported("even dimension required");
  if (k < 0 || k > n / 2 - 1) throw InvalidInput("k outside 0..n/2-1");
  double fact = 1;
  for (int j = 2; j <= n / 2 - k - 1; ++j) fact *= j;
  double pref = std::pow(2.0, n) * std::pow(kPi, n / 2.0) * fact;
  return cd(0, 1) / pref * u_k_diag;
}

cd mellin_gamma_factor(cd alpha, int m) {
  if (m < 0) throw InvalidInput("m must be >= 0");
  // (-1)^m Gamma(1-alpha) / (Gamma(1-alpha-m) Gamma(alpha+m))
  //   = [prod_{j=0}^{m-1} (alpha+j)] / Gamma(alpha+m)  (pole-safe)
  cd prod = 1;
  for (int j = 0; j < m; ++j) prod *= alpha + static_cast<double>(j);
  return prod * rgamma_c(alpha + static_cast<double>(m));
}

cd profile_mellin(const SchwartzProfile& f, cd alpha) {
  return gamma_c(alpha + f.q) * std::exp(-(alpha + f.q) * std::log(f.sigma));
}

double profile_c0(const SchwartzProfile& f, int n) {
  return gamma_c(cd(f.q + n / 2.0, 0)).real() /
         std::pow(f.sigma, f.q + n / 2.0);
}

cd profile_function(const SchwartzProfile& f, cd w) {
  if (!(w.imag() > 0)) throw InvalidInput("profile_function needs Im w > 0");
  auto integrand = [&](double t) -> cd {
    return std::pow(t, f.q - 1.0) * std::exp(-f.sigma * t) *
           std::exp(cd(0, 1) * w / t);
  };
  return integrate_half_line(integrand, 0.0, 1e-13);
}

cd schwartz_function_of_power(const std::function<cd(cd)>& power_sample,
                              const SchwartzProfile& f, double c, double im_max,
                              int panels_per_unit) {
  auto integrand = [&](double s) -> cd {
    cd alpha(c, s);
    return std::exp(cd(0, kPi / 2.0) * alpha) * power_sample(alpha) *
           gamma_c(alpha) * profile_mellin(f, alpha);
  };
  double tail = std::max(std::abs(integrand(im_max)), std::abs(integrand(-im_max)));
  double mid = std::abs(integrand(0.0));
  if (!(tail <= 1e-10 * std::max(mid, 1e-30)))
    throw TruncationError("alpha-line integrand has not decayed", tail);

  KahanSum<cd> acc;
  int panels = std::max(4, static_cast<int>(im_max * panels_per_unit));
  for (int p = 0; p < panels; ++p) {
    double a = -im_max + 2 * im_max * p / panels;
    double b = -im_max + 2 * im_max * (p + 1) / panels;
    auto q = gauss_legendre_panel(a, b);
    for (std::size_t i = 0; i < q.x.size(); ++i)
      acc.add(q.w[i] * integrand(q.x[i]));
  }
  // d alpha = i ds and the 1/(2 pi i) prefactor combine to 1/(2 pi)
  return acc.value() / (2 * kPi);
}

}  // namespace lz
