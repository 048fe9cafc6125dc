#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "lz/errors.hpp"

namespace lz {

// Finite deformation of the spectral contour around one point: the path is
// rerouted along the circle |z - center| = radius, on the side away from the
// center, so the point keeps its winding status unless `enclose` is set,
// in which case the detour passes on the other side (changing the enclosed
// set by exactly this point).
struct ContourBump {
  std::complex<double> center;
  double radius = 0;
  bool enclose = false;
};

// Quadrature realization of the spectral integration path: the two rays at
// angles theta and pi-theta shifted by i*eps, joined by the arc of radius
// eps/2 passing below the branch point i*eps.  Oriented from the theta-ray
// (upper left) toward the (pi-theta)-ray (upper right); with the branch of
// (z - i eps)^{-alpha} cut along the upward vertical ray from i*eps and
// arg in (-3pi/2, pi/2], the induced functional calculus reproduces the
// principal branch on spectra below the path.
struct Contour {
  double theta = 2.356194490192345;  // 3 pi / 4
  double eps = 1.0;
  double r_trunc = 1e4;
  int nodes_per_panel = 16;
  std::vector<std::complex<double>> z;  // quadrature nodes
  std::vector<std::complex<double>> w;  // dz weights (orientation included)
  std::vector<ContourBump> bumps;

  std::size_t size() const { return z.size(); }
};

Contour build_contour(double eps, double theta, double r_trunc,
                      int nodes_per_panel = 16,
                      const std::vector<ContourBump>& bumps = {});

// minimum distance from the node set to a point (post-hoc eigenvalue check)
double contour_distance(const Contour& ct, std::complex<double> p);

// (1/2 pi i) * sum w_j f(z_j) for a scalar integrand
std::complex<double> contour_integral(
    const Contour& ct, const std::function<std::complex<double>(std::complex<double>)>& f);

}  // namespace lz
