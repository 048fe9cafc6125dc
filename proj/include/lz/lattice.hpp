#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>

#include "lz/section_grid.hpp"

namespace lz {

using SparseCd = Eigen::SparseMatrix<std::complex<double>>;

// Sparse discretization of P = -D^2 on the periodic box.
struct LatticeOperator {
  int n = 2, m = 16, N = 2;
  double L = 1.0;
  SparseCd P;
  std::string provenance;  // "dirac-squared" or "wave-scalar"
  MetricFamily family;
  CliffordRep rep;
  TwistPotential twist;
  std::vector<double> sqrtg;  // per node
  Eigen::MatrixXcd fiber_weight;  // i beta gamma(e0), positive definite

  double hx() const { return 2.0 * L / m; }
  long nodes() const {
    long t = 1;
    for (int i = 0; i < n; ++i) t *= m;
    return t;
  }
  long dim() const { return nodes() * N; }
  SectionGrid proto() const {
    return SectionGrid::zeros(n, m, N, L, SectionGrid::Boundary::periodic);
  }
  // diagonal entries of the discrete L^2 weight: W (x) |g|^{1/2} hx^n
  Eigen::VectorXd volume_weights() const;
};

// squared discrete Dirac operator (preferred assembly path)
LatticeOperator assemble(const MetricFamily& fam, const CliffordRep& rep,
                         const TwistPotential& tw, int m, double L);

// scalar divergence-form wave operator (cross-check assembly, N = 1)
LatticeOperator assemble_wave_scalar(const MetricFamily& fam, int m, double L);

// discrete symbol of the flat dirac-squared operator on plane wave k
double flat_symbol(const LatticeOperator& op, const Eigen::VectorXi& kmode);

// ------------------------------------------------------------ solves

// (P - z)^{-1} rhs, direct sparse factorization with residual certification.
Eigen::VectorXcd resolvent_solve(const LatticeOperator& op, std::complex<double> z,
                                 const Eigen::VectorXcd& rhs, double tol = 1e-10);

// Cached factorization of (P - z) for one shift.
class ShiftedFactor {
 public:
  ShiftedFactor(const SparseCd& P, std::complex<double> z, bool adjoint = false);
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

 private:
  std::unique_ptr<Eigen::SparseLU<SparseCd>> lu_;
};

struct DecayScanRow {
  double im_lambda;
  double resolvent_norm;   // ||(P - i im_lambda)^{-1}||_2 estimate
  double product;          // |Im lambda| * norm
};

// power iteration estimate of ||(P-lambda)^{-1}||_2 for lambda = i*im
std::vector<DecayScanRow> resolvent_decay_scan(const LatticeOperator& op,
                                               const std::vector<double>& im_values,
                                               int samples, std::uint64_t seed);

// ---------------------------------------------------- adjoint diagnostics

struct AdjointDefect {
  double norm = 0;           // ||P - P*|| in the weighted L^2
  double norm_outside = 0;   // same, restricted outside the perturbation support
};

// P* is taken w.r.t. the inner product sum conj(u) W |g|^{1/2} hx^n v with
// W = i beta gamma(e0).
AdjointDefect adjoint_defect(const LatticeOperator& op, int iters = 60,
                             std::uint64_t seed = 7);

}  // namespace lz
