#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "lz/curvature.hpp"
#include "lz/metric.hpp"
#include "lz/ode.hpp"

namespace lz {

// x^mu(t) with velocity and the parallel-transported data carried along.
struct GeodesicState {
  Eigen::VectorXd x0, v;        // base point and initial velocity
  Eigen::VectorXd x, xdot;      // endpoint data at parameter t
  double t = 0;
  Eigen::MatrixXd frame;        // columns: parallel transport of coordinate frame
  Eigen::MatrixXd jac;          // D exp_{x0}(t v) (Jacobi fields / t)
};

// Connection term for fiber transport: returns xdot^mu (omega_mu + A_mu)(x),
// an N x N matrix.
using FiberConnection =
    std::function<Eigen::MatrixXcd(const Eigen::VectorXd& x, const Eigen::VectorXd& xdot)>;

GeodesicState exponential_map(const MetricFamily& fam, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& v, const OdeOptions& opt = {});

// Inverse of the exponential map by Newton shooting on the initial velocity.
Eigen::VectorXd log_map(const MetricFamily& fam, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& target, const OdeOptions& opt = {});

// g(xdot, xdot), conserved along geodesics.
double geodesic_energy(const MetricFamily& fam, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& xdot);

// Data sampled along the radial geodesic r -> exp_{x0}(r omega).
struct RayTrivialization {
  Eigen::VectorXd x0, omega;
  std::vector<double> r;
  std::vector<Eigen::VectorXd> x;            // exp(x0, r omega)
  std::vector<Eigen::VectorXd> xdot;
  std::vector<Eigen::MatrixXd> frame;        // parallel-transported orthonormal frame
  std::vector<Eigen::MatrixXcd> fiber;       // spin/twist transport (optional)
  std::vector<double> det_jac;               // det D exp_{x0}(r omega)
  std::vector<double> sqrtg_normal;          // |g~|^{1/2} in normal coordinates
  std::vector<double> h;                     // V(log |g~|^{1/2}), V Euler field
  std::vector<double> u0_ode;                // scalar u0 integrated from 2 nabla_V u0 + h u0 = 0
};

// Parallel transport of an initial orthonormal frame along exp(x0, r omega),
// together with the normal-coordinate volume density and the transport scalar
// h.  frame0 columns must be g(x0)-orthonormal; fiber transport is integrated
// when `conn` is provided.
RayTrivialization radial_trivialization(const MetricFamily& fam,
                                        const Eigen::VectorXd& x0,
                                        const Eigen::VectorXd& omega, double r_max,
                                        int samples,
                                        const Eigen::MatrixXd& frame0,
                                        const FiberConnection& conn = {},
                                        int fiber_dim = 0,
                                        const OdeOptions& opt = {});

// D exp_{x0}(v) via the variational equations.
Eigen::MatrixXd dexp(const MetricFamily& fam, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& v, const OdeOptions& opt = {});

// Fiber transport matrix along the geodesic segment t in [0,1] of exp(x0, v).
Eigen::MatrixXcd fiber_transport(const MetricFamily& fam, const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& v, const FiberConnection& conn,
                                 int fiber_dim, const OdeOptions& opt = {});

}  // namespace lz
