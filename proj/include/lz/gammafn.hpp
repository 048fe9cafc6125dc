#pragma once

#include <complex>

namespace lz {

// Complex log-gamma (Lanczos, g = 7) with reflection for Re z < 1/2.
std::complex<double> lgamma_c(std::complex<double> z);
std::complex<double> gamma_c(std::complex<double> z);

// 1 / Gamma(z), entire; returns 0 at the poles of Gamma.
std::complex<double> rgamma_c(std::complex<double> z);

}  // namespace lz
