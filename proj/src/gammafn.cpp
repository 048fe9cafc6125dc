#include "lz/gammafn.hpp"

#include <cmath>

#include "lz/numerics.hpp"

namespace lz {
namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey).
const double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> lgamma_core(std::complex<double> z) {
  // Requires Re z >= 0.5.
  z -= 1.0;
  std::complex<double> x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  std::complex<double> t = z + 7.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

std::complex<double> lgamma_c(std::complex<double> z) {
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma_core(1.0 - z);
  }
  return lgamma_core(z);
}

std::complex<double> gamma_c(std::complex<double> z) {
  if (z.real() < 0.5) {
    std::complex<double> s = std::sin(kPi * z);
    if (std::abs(s) == 0.0) return {INFINITY, 0.0};
    return kPi / (s * std::exp(lgamma_core(1.0 - z)));
  }
  return std::exp(lgamma_core(z));
}

std::complex<double> rgamma_c(std::complex<double> z) {
  if (z.real() < 0.5) {
    return std::sin(kPi * z) * std::exp(lgamma_core(1.0 - z)) / kPi;
  }
  return std::exp(-lgamma_core(z));
}

}  // namespace lz
