#include "lz/ode.hpp"

#include <algorithm>
#include <cmath>

namespace lz {
namespace {

// Dormand-Prince 5(4) tableau.
const double A21 = 1.0 / 5;
const double A31 = 3.0 / 40, A32 = 9.0 / 40;
const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
             A54 = -212.0 / 729;
const double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
             A64 = 49.0 / 176, A65 = -5103.0 / 18656;
const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
             B5 = -2187.0 / 6784, B6 = 11.0 / 84;
const double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
             E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
const double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

}  // namespace

OdeResult integrate_ode(
    const std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>& rhs,
    const Eigen::VectorXd& y0, double t0, double t1, const OdeOptions& opt,
    const std::function<StepAction(double, const Eigen::VectorXd&)>& monitor) {
  const int dim = static_cast<int>(y0.size());
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  double h = std::min(opt.h_init, opt.h_max) * dir;
  Eigen::VectorXd y = y0;
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXd ytmp(dim), ynew(dim), yerr(dim);

  OdeResult res;
  rhs(t, y, k1);
  for (long step = 0; step < opt.max_steps; ++step) {
    if (dir * (t - t1) >= 0) break;
    if (dir * (t + h - t1) > 0) h = t1 - t;

    ytmp = y + h * (A21 * k1);
    rhs(t + C2 * h, ytmp, k2);
    ytmp = y + h * (A31 * k1 + A32 * k2);
    rhs(t + C3 * h, ytmp, k3);
    ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
    rhs(t + C4 * h, ytmp, k4);
    ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
    rhs(t + C5 * h, ytmp, k5);
    ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    rhs(t + h, ynew, k7);
    yerr = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

    double err = 0;
    for (int i = 0; i < dim; ++i) {
      double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(yerr[i]) / sc);
    }

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      ++res.steps;
      if (monitor && monitor(t, y) == StepAction::stop) {
        res.stopped_by_monitor = true;
        break;
      }
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    h *= fac;
    if (std::abs(h) > opt.h_max) h = opt.h_max * dir;
    if (std::abs(h) < opt.h_min)
      throw IntegrationFailure("step size underflow in adaptive integrator");
  }
  res.t = t;
  res.y = y;
  return res;
}

}  // namespace lz
