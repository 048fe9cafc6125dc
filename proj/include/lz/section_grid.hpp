#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lz/clifford.hpp"
#include "lz/metric.hpp"

namespace lz {

// Uniform periodic (or zero-padded) grid over [-L, L)^n carrying C^N fiber
// values; index = node * N + component, nodes in row-major multi-index order.
struct SectionGrid {
  int n = 2;
  int m = 16;
  int N = 2;
  double L = 1.0;
  enum class Boundary { periodic, zero } boundary = Boundary::periodic;
  Eigen::VectorXcd values;

  double hx() const { return 2.0 * L / m; }
  long nodes() const {
    long t = 1;
    for (int i = 0; i < n; ++i) t *= m;
    return t;
  }
  long flat(const std::vector<int>& k) const {
    long f = 0;
    for (int i = n - 1; i >= 0; --i) f = f * m + k[i];
    return f;
  }
  void unflatten(long f, std::vector<int>& k) const {
    k.resize(n);
    for (int i = 0; i < n; ++i) {
      k[i] = static_cast<int>(f % m);
      f /= m;
    }
  }
  Eigen::VectorXd coords(const std::vector<int>& k) const {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = -L + k[i] * hx();
    return x;
  }

  static SectionGrid zeros(int n, int m, int N, double L,
                           Boundary b = Boundary::periodic);
};

// Matrix-free discrete Dirac operator with 2nd-order central differences:
// D u = sum_nu gammat^nu(x) [d_nu + omega_nu + A_nu] u.
class DiracStencil {
 public:
  DiracStencil(const MetricFamily& fam, const CliffordRep& rep,
               const TwistPotential& tw, const SectionGrid& proto);

  void apply(const SectionGrid& u, SectionGrid& out) const;
  SectionGrid apply(const SectionGrid& u) const;

  // per-node frame-contracted coefficient matrices and zero-order term
  const Eigen::MatrixXcd& gamma_coef(long node, int nu) const {
    return gam_[node * n_ + nu];
  }
  const Eigen::MatrixXcd& zero_order(long node) const { return zer_[node]; }
  const std::vector<double>& sqrtg() const { return sqrtg_; }

 private:
  int n_, m_, N_;
  double L_;
  SectionGrid::Boundary boundary_;
  std::vector<Eigen::MatrixXcd> gam_;  // node-major, nu-minor
  std::vector<Eigen::MatrixXcd> zer_;
  std::vector<double> sqrtg_;
};

// Right side of the Bochner-Lichnerowicz identity assembled through the
// divergence form (independent of the Dirac path):
//   -nabla_j g^{ij} nabla_i u - g^{ij} (d_j log|g|^{1/2}) nabla_i u
//   + Fbold u + (R_g/4) u
SectionGrid bochner_rhs(const MetricFamily& fam, const CliffordRep& rep,
                        const TwistPotential& tw, const SectionGrid& u);

struct BochnerReport {
  double hx = 0;
  double residual = 0;  // interior sup norm of D^2 u - rhs
};

// Smooth built-in test section: polynomial * gaussian per fiber component.
SectionGrid test_section(const SectionGrid& proto, double sigma, int flavor = 0);

BochnerReport bochner_lichnerowicz_residual(const MetricFamily& fam,
                                            const CliffordRep& rep,
                                            const TwistPotential& tw,
                                            const SectionGrid& u);

}  // namespace lz
