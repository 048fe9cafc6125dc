#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "lz/contour.hpp"
#include "lz/lattice.hpp"

namespace lz {

// Shifted-solve interface shared by dense test matrices and the sparse
// lattice operator.
class ShiftedLinearOperator {
 public:
  virtual ~ShiftedLinearOperator() = default;
  virtual long dim() const = 0;
  virtual Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v) const = 0;  // P v
  // (P - z)^{-1} rhs for a block of right-hand sides
  virtual Eigen::MatrixXcd solve(std::complex<double> z,
                                 const Eigen::MatrixXcd& rhs) const = 0;
  virtual double norm_bound() const = 0;  // any upper bound on ||P||
};

class DenseOperator final : public ShiftedLinearOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXcd A);
  long dim() const override { return A_.rows(); }
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v) const override { return A_ * v; }
  Eigen::MatrixXcd solve(std::complex<double> z,
                         const Eigen::MatrixXcd& rhs) const override;
  double norm_bound() const override { return nrm_; }
  const Eigen::MatrixXcd& matrix() const { return A_; }

 private:
  Eigen::MatrixXcd A_;
  double nrm_;
};

class SparseLatticeOperator final : public ShiftedLinearOperator {
 public:
  explicit SparseLatticeOperator(const LatticeOperator& op) : op_(op) {}
  long dim() const override { return op_.dim(); }
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v) const override {
    return op_.P * v;
  }
  Eigen::MatrixXcd solve(std::complex<double> z,
                         const Eigen::MatrixXcd& rhs) const override;
  double norm_bound() const override;
  const LatticeOperator& lattice() const { return op_; }

 private:
  const LatticeOperator& op_;
};

struct PowerOptions {
  // Order of the large-|z| resolvent expansion handled analytically beyond the
  // quadrature truncation radius; with r_trunc ~ 2||P|| the neglected tail is
  // O(2^{-subtract_terms}).
  int subtract_terms = 36;
  double solve_tol = 1e-9;
};

// (P - i eps)^{-alpha} applied to a block of vectors via the contour.
// Branch: (z - i eps)^{-alpha} with arg in (-3pi/2, pi/2] (cut upward from
// i eps); for spectra below the contour this matches the principal branch.
Eigen::MatrixXcd complex_power_apply(const ShiftedLinearOperator& P, double eps,
                                     std::complex<double> alpha, const Contour& ct,
                                     const Eigen::MatrixXcd& rhs,
                                     const PowerOptions& opt = {});

// same quadrature reused across an alpha sweep (one factorization per node)
std::vector<Eigen::MatrixXcd> complex_power_sweep(
    const ShiftedLinearOperator& P, double eps,
    const std::vector<std::complex<double>>& alphas, const Contour& ct,
    const Eigen::MatrixXcd& rhs, const PowerOptions& opt = {});

inline Eigen::MatrixXcd complex_power_matrix(const ShiftedLinearOperator& P,
                                             double eps, std::complex<double> alpha,
                                             const Contour& ct,
                                             const PowerOptions& opt = {}) {
  return complex_power_apply(P, eps, alpha, ct,
                             Eigen::MatrixXcd::Identity(P.dim(), P.dim()), opt);
}

// eigendecomposition oracle on a planted decomposition P = V J V^{-1} with
// 1x1 and 2x2 (Jordan) blocks; principal branch of (lambda - i eps)^{-alpha}
struct PlantedMatrix {
  Eigen::MatrixXcd V, Vinv;
  std::vector<std::pair<std::complex<double>, int>> blocks;  // (eigenvalue, size)
  Eigen::MatrixXcd matrix() const;
  Eigen::MatrixXcd power(double eps, std::complex<double> alpha) const;
  Eigen::MatrixXcd projector(std::complex<double> lambda) const;
};

PlantedMatrix plant_matrix(int dim,
                           const std::vector<std::pair<std::complex<double>, int>>& blocks,
                           std::uint64_t seed);

struct AmbiguityReport {
  Eigen::MatrixXcd difference;
  std::vector<double> singular_values;
  int numerical_rank = 0;  // sigma > 1e-8 * sigma_max
  double norm = 0;
};

AmbiguityReport contour_ambiguity(const ShiftedLinearOperator& P, double eps,
                                  std::complex<double> alpha, const Contour& a,
                                  const Contour& b, const PowerOptions& opt = {});

// ------------------------------------------------------- zeta diagonal

struct ZetaSample {
  std::complex<double> alpha;
  double eps = 1;
  Eigen::VectorXd x;                  // grid point
  std::complex<double> value;         // fiber-traced density
  std::string provenance;             // contour | flat-closed-form | eigendecomposition
};

// fiber trace of the (x,x) block of (P - i eps)^{-alpha}, divided by
// hx^n |g(x)|^{1/2}; alpha = 0 short-circuits to the identity diagonal
std::vector<ZetaSample> zeta_diagonal(const LatticeOperator& op, double eps,
                                      const std::vector<std::complex<double>>& alphas,
                                      const std::vector<std::vector<int>>& xnodes,
                                      const Contour& ct, const PowerOptions& opt = {});

// flat-torus Fourier oracle for the same quantity
std::complex<double> zeta_diagonal_fourier_flat(const LatticeOperator& op, double eps,
                                                std::complex<double> alpha);

}  // namespace lz
