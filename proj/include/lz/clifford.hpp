#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lz/curvature.hpp"
#include "lz/metric.hpp"

namespace lz {

// Flat gamma matrices for the Clifford relations
//   gamma_a gamma_b + gamma_b gamma_a = -2 eta_{ab},  eta = diag(1,-1,...,-1),
// together with the Hermitian intertwiner beta (gamma_a^* beta = -beta gamma_a,
// i beta gamma(e0) > 0).  Twists tensor with the identity on the twist factor.
struct CliffordRep {
  int n = 2;
  int twist_rank = 1;
  int N = 2;
  std::vector<Eigen::MatrixXcd> gamma;  // frame-indexed, size n
  Eigen::MatrixXcd beta;

  // gamma(X) for a frame vector X = X^a e_a
  Eigen::MatrixXcd gamma_of(const Eigen::VectorXd& frame_components) const;
};

CliffordRep build_gamma(int n, int twist_rank = 1);

struct PositivityReport {
  bool positive = false;
  double min_eigenvalue = 0;
};

// checks i beta gamma(e) > 0 for an eta-timelike frame vector e
PositivityReport check_positivity(const CliffordRep& rep, const Eigen::VectorXd& e);

// ------------------------------------------------------------------ twist

// Rank-one u(1) twist potential; A_mu = i a_mu(x) with a real-valued.
struct TwistPotential {
  enum class Kind { none, uniform_field, uniform_field_compact };
  Kind kind = Kind::none;
  double c = 0.0;       // field strength scale: F_01 = i c where the profile is 1
  double radius = 2.0;  // support radius of the compact flavor
  double gauge = 0.0;   // adds d chi with a fixed quadratic chi (pure gauge)

  bool trivial() const { return kind == Kind::none || c == 0.0; }

  template <class T>
  void eval(int n, const T* x, T* a) const {  // A_mu = i * a[mu]
    for (int mu = 0; mu < n; ++mu) a[mu] = T(0);
    if (kind != Kind::none) {
      if (kind == Kind::uniform_field) {
        a[1] = c * x[0];
      } else {
        // compact: a_1 = c x0 B(|x|^2/R^2), smooth bump
        T s2 = T(0);
        for (int i = 0; i < n; ++i) s2 += x[i] * x[i];
        double re = real(s2);
        if (re < radius * radius) {
          T s = s2 / (radius * radius);
          a[1] = c * x[0] * exp(T(1) - T(1) / (T(1) - s));
        }
      }
    }
    if (gauge != 0.0 && n >= 2) {
      // chi = x0 x1 + 0.3 x0^2 - 0.2 x1^2
      a[0] += gauge * (x[1] + T(0.6) * x[0]);
      a[1] += gauge * (x[0] - T(0.4) * x[1]);
    }
  }

  std::vector<std::complex<double>> values(int n, const Eigen::VectorXd& x) const;

 private:
  static double real(double v) { return v; }
  static double real(const std::complex<double>& v) { return v.real(); }
};

// F^E_{mu nu} = d_mu A_nu - d_nu A_mu (times the twist identity), plus the
// Clifford contraction F_bold = sum_{i<j} gamma(e_i) gamma(e_j) F(e_i, e_j).
struct TwistingCurvature {
  Eigen::MatrixXcd two_form;     // coordinate components F_{mu nu} (scalars)
  Eigen::MatrixXcd contraction;  // N x N
};

TwistingCurvature twisting_curvature(const MetricFamily& fam, const CliffordRep& rep,
                                     const TwistPotential& tw, const Eigen::VectorXd& x);

// ------------------------------------------------------------- connection

struct ConnectionData {
  Eigen::VectorXd x;
  Eigen::MatrixXd vielbein;   // E(mu, a): columns are frame vectors e_a
  Eigen::MatrixXd coframe;    // C(a, mu): rows are dual coframe e^a
  std::vector<Eigen::MatrixXcd> omega;      // spin connection per coordinate mu
  std::vector<std::complex<double>> twist;  // A_mu values
};

// Gram-Schmidt vielbein from the coordinate frame (deterministic, e0 along
// d/dx0) and the torsion-free spin connection in that gauge.
ConnectionData spin_connection(const MetricFamily& fam, const CliffordRep& rep,
                               const TwistPotential& tw, const Eigen::VectorXd& x);

// residual of nabla(gamma(e_b)) = gamma(nabla e_b) as a matrix identity
double connection_compatibility_residual(const MetricFamily& fam,
                                         const CliffordRep& rep,
                                         const TwistPotential& tw,
                                         const Eigen::VectorXd& x);

// residual of the beta-metricity condition omega_mu^* beta + beta omega_mu = 0
double beta_metricity_residual(const CliffordRep& rep, const ConnectionData& conn);

}  // namespace lz
