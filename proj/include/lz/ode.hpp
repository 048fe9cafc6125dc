#pragma once

#include <Eigen/Dense>
#include <functional>

#include "lz/errors.hpp"

namespace lz {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_max = 1.0;
  double h_min = 1e-14;
  long max_steps = 2000000;
};

enum class StepAction { cont, stop };

struct OdeResult {
  double t = 0;
  Eigen::VectorXd y;
  long steps = 0;
  bool stopped_by_monitor = false;
};

// Adaptive Dormand-Prince 5(4).  `rhs(t, y, dy)` fills dy; the optional
// monitor sees every accepted step and may terminate the integration.
OdeResult integrate_ode(
    const std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>& rhs,
    const Eigen::VectorXd& y0, double t0, double t1, const OdeOptions& opt,
    const std::function<StepAction(double, const Eigen::VectorXd&)>& monitor = {});

}  // namespace lz
