#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "lz/clifford.hpp"
#include "lz/geodesic.hpp"

namespace lz {

// Hadamard coefficients sampled along radial geodesics in the parallel
// trivialization.  A state holds a small tube of rays (angular offsets around
// the central direction) so that the next transport step can take transverse
// derivatives.
struct TransportState {
  int order = 0;
  Eigen::VectorXd x0;
  Eigen::VectorXd omega;                       // unit central direction
  std::vector<double> thetas;                  // tube offsets (n = 2)
  std::vector<double> r;                       // radial samples (r[0] = 0)
  std::vector<std::vector<Eigen::MatrixXcd>> u;         // [ray][sample]
  std::vector<std::vector<Eigen::MatrixXcd>> u_closed;  // k = 0 only
  std::vector<std::vector<double>> h;                   // transport scalar

  int center_ray() const { return static_cast<int>(thetas.size()) / 2; }
  double max_route_deviation() const;  // k=0: ODE vs closed form
};

// fiber connection xdot^mu (omega_mu + A_mu) for transport integration
FiberConnection make_fiber_connection(const MetricFamily& fam, const CliffordRep& rep,
                                      const TwistPotential& tw);

// Geometric section u0 = |g~(0)|^{1/4} |g~(x)|^{-1/4} Pi(x0 -> x) in the
// global gauge; evaluable at any point of the normal neighborhood.
class U0Field {
 public:
  U0Field(const MetricFamily& fam, const CliffordRep& rep, const TwistPotential& tw,
          Eigen::VectorXd x0, const OdeOptions& opt = tight_opts());
  Eigen::MatrixXcd at(const Eigen::VectorXd& x) const;
  static OdeOptions tight_opts() {
    OdeOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    return o;
  }

 private:
  const MetricFamily& fam_;
  const CliffordRep& rep_;
  FiberConnection conn_;
  Eigen::VectorXd x0_;
  double sqrtg0_;
  bool flat_metric_;
  OdeOptions opt_;
};

// single application of the discrete squared Dirac operator to a matrix-valued
// section given by a callback, evaluated at `center` with spacing hloc
Eigen::MatrixXcd local_dirac_squared(
    const MetricFamily& fam, const CliffordRep& rep, const TwistPotential& tw,
    const Eigen::VectorXd& center, double hloc,
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& field);

// Richardson-extrapolated D^2 field (center) over `levels` grid halvings
Eigen::MatrixXcd local_dirac_squared_richardson(
    const MetricFamily& fam, const CliffordRep& rep, const TwistPotential& tw,
    const Eigen::VectorXd& center, double hloc, int levels,
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& field,
    double* err_estimate = nullptr);

// ------------------------------------------------------------- operations

TransportState transport_u0(const MetricFamily& fam, const CliffordRep& rep,
                            const TwistPotential& tw, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& omega, double r_max,
                            int samples = 33, int tube_rays = 5,
                            double tube_halfangle = 0.1);

struct U1Report {
  Eigen::MatrixXcd u1_numeric;              // D^2 u0 at x0 (= -P u0)
  Eigen::MatrixXcd pred_contraction;        // R_g/12 I + Fbold (Clifford contraction)
  Eigen::MatrixXcd pred_twoform;            // R_g/12 I + F(e0,e1) I
  double rel_err_contraction = 0;
  double rel_err_twoform = 0;
  double scalar_curvature = 0;
  double est_error = 0;                     // extrapolation error estimate
  bool contraction_matches = false;         // which normalization the numerics confirm
};

U1Report transport_u1_origin(const MetricFamily& fam, const CliffordRep& rep,
                             const TwistPotential& tw, const Eigen::VectorXd& x0,
                             double hloc = 0.04, int levels = 3);

// transport step k >= 1; prev must hold u_{k-1} (for k = 1 the closed-form u0
// field is used directly and prev only fixes the geometry/sampling)
TransportState transport_uk(const MetricFamily& fam, const CliffordRep& rep,
                            const TwistPotential& tw, int k,
                            const TransportState& prev, double hloc = 0.02);

}  // namespace lz
