#include "lz/power.hpp"

#include <Eigen/SVD>

#include "lz/gammafn.hpp"
#include "lz/numerics.hpp"
#include "lz/rng.hpp"

namespace lz {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cd = std::complex<double>;

DenseOperator::DenseOperator(MatrixXcd A) : A_(std::move(A)) {
  nrm_ = A_.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm bound
}

MatrixXcd DenseOperator::solve(cd z, const MatrixXcd& rhs) const {
  MatrixXcd M = A_;
  M.diagonal().array() -= z;
  Eigen::PartialPivLU<MatrixXcd> lu(M);
  MatrixXcd x = lu.solve(rhs);
  double res = (M * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (!(res < 1e-8)) throw NearSpectrum(z, res);
  return x;
}

MatrixXcd SparseLatticeOperator::solve(cd z, const MatrixXcd& rhs) const {
  ShiftedFactor f(op_.P, z);
  MatrixXcd out(rhs.rows(), rhs.cols());
  for (int c = 0; c < rhs.cols(); ++c) out.col(c) = f.solve(rhs.col(c));
  return out;
}

double SparseLatticeOperator::norm_bound() const {
  // infinity norm of the sparse matrix
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(op_.P.rows());
  for (int k = 0; k < op_.P.outerSize(); ++k)
    for (SparseCd::InnerIterator it(op_.P, k); it; ++it)
      rowsum[it.row()] += std::abs(it.value());
  return rowsum.maxCoeff();
}

namespace {

// branch for (z - i eps)^{-alpha}: cut upward from the branch point
inline cd phi_weight(cd z, double eps, cd alpha) {
  return pow_upcut(z - cd(0, eps), -alpha);
}

// Tail moment over both ray pieces beyond the quadrature truncation,
//   T_k = (1/2 pi i) Int_{|z| > R} (z - i eps)^{-alpha} z^{-k-1} dz,
// computed through the substitution s = R/t (smooth decaying integrand).
// The left ray is traversed inward, the right ray outward.
cd tail_moment(double R, double eps, double theta, cd alpha, int k) {
  auto ray_part = [&](double ang, double orient) {
    cd dir = std::exp(cd(0, ang));
    KahanSum<cd> acc;
    double lo = 1e-7;
    // geometric panels in t from 1 down to ~0 (s from R to 1e7 R)
    double a = lo;
    std::vector<std::pair<double, double>> panels;
    double hi = 1.0;
    while (hi > lo * 1.9) {
      panels.push_back({hi / 2, hi});
      hi /= 2;
    }
    panels.push_back({a, hi});
    for (auto& [pa, pb] : panels) {
      auto q = gauss_legendre_panel(pa, pb);
      for (std::size_t i = 0; i < q.x.size(); ++i) {
        double t = q.x[i];
        double s = R / t;
        cd z = cd(0, eps) + s * dir;
        cd f = pow_upcut(z - cd(0, eps), -alpha) *
               pow_principal(z, -static_cast<double>(k + 1)) * dir;
        acc.add(q.w[i] * f * (R / (t * t)));
      }
    }
    return orient * acc.value();
  };
  // pow_principal is safe for z on the rays (never near the negative real axis
  // cut since theta in (pi/2, pi)), and equals the upcut branch there except
  // on the left ray where only the (z - i eps) factor needs the wrap.
  cd total = ray_part(theta, -1.0) + ray_part(kPi - theta, +1.0);
  return total / cd(0, 2 * kPi);
}

}  // namespace

std::vector<MatrixXcd> complex_power_sweep(const ShiftedLinearOperator& P, double eps,
                                           const std::vector<cd>& alphas,
                                           const Contour& ct, const MatrixXcd& rhs,
                                           const PowerOptions& opt) {
  for (const cd& a : alphas)
    if (!(a.real() > 0) && std::abs(a) > 0)
      throw InvalidInput("complex power requires Re alpha > 0");
  if (ct.r_trunc < 2 * P.norm_bound())
    throw ContourFailure(
        "truncation radius below 2*||P||; resolvent tail expansion invalid");
  const int K = std::max(1, opt.subtract_terms);

  // P^k rhs for the tail expansion (P-z)^{-1} = -sum_k z^{-k-1} P^k + O(..)
  std::vector<MatrixXcd> pk(K + 1);
  pk[0] = rhs;
  for (int k = 1; k <= K; ++k) pk[k] = P.apply(pk[k - 1]);

  const std::size_t nodes = ct.size();
  const std::size_t chunks = std::min<std::size_t>(64, nodes);
  // per-chunk, per-alpha partial sums; reduced in fixed order
  std::vector<std::vector<MatrixXcd>> partial(
      chunks, std::vector<MatrixXcd>(alphas.size(),
                                     MatrixXcd::Zero(rhs.rows(), rhs.cols())));

  parallel_for(chunks, [&](std::size_t c) {
    for (std::size_t j = c; j < nodes; j += chunks) {
      cd z = ct.z[j];
      MatrixXcd x = P.solve(z, rhs);
      for (std::size_t a = 0; a < alphas.size(); ++a)
        partial[c][a] += (ct.w[j] * phi_weight(z, eps, alphas[a])) * x;
    }
  });

  std::vector<MatrixXcd> out(alphas.size(), MatrixXcd::Zero(rhs.rows(), rhs.cols()));
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    for (std::size_t c = 0; c < chunks; ++c) out[a] += partial[c][a];
    out[a] /= cd(0, 2 * kPi);
    for (int k = 0; k <= K; ++k)
      out[a] -= tail_moment(ct.r_trunc, eps, ct.theta, alphas[a], k) * pk[k];
  }
  return out;
}

MatrixXcd complex_power_apply(const ShiftedLinearOperator& P, double eps, cd alpha,
                              const Contour& ct, const MatrixXcd& rhs,
                              const PowerOptions& opt) {
  if (std::abs(alpha) == 0.0)
    return rhs;  // (P - i eps)^0
  return complex_power_sweep(P, eps, {alpha}, ct, rhs, opt)[0];
}

MatrixXcd PlantedMatrix::matrix() const {
  long d = V.rows();
  MatrixXcd J = MatrixXcd::Zero(d, d);
  long at = 0;
  for (auto& [lam, sz] : blocks) {
    for (int i = 0; i < sz; ++i) {
      J(at + i, at + i) = lam;
      if (i + 1 < sz) J(at + i, at + i + 1) = 1.0;
    }
    at += sz;
  }
  return V * J * Vinv;
}

MatrixXcd PlantedMatrix::power(double eps, cd alpha) const {
  long d = V.rows();
  MatrixXcd F = MatrixXcd::Zero(d, d);
  long at = 0;
  for (auto& [lam, sz] : blocks) {
    cd w = lam - cd(0, eps);
    cd f = pow_principal(w, -alpha);
    for (int i = 0; i < sz; ++i) F(at + i, at + i) = f;
    if (sz == 2) {
      // f'(lam) on the superdiagonal
      F(at, at + 1) = -alpha * pow_principal(w, -alpha - 1.0);
    }
    at += sz;
  }
  return V * F * Vinv;
}

MatrixXcd PlantedMatrix::projector(cd lambda) const {
  long d = V.rows();
  MatrixXcd Pi = MatrixXcd::Zero(d, d);
  long at = 0;
  for (auto& [lam, sz] : blocks) {
    if (std::abs(lam - lambda) < 1e-12)
      for (int i = 0; i < sz; ++i) Pi(at + i, at + i) = 1.0;
    at += sz;
  }
  return V * Pi * Vinv;
}

PlantedMatrix plant_matrix(int dim,
                           const std::vector<std::pair<cd, int>>& blocks,
                           std::uint64_t seed) {
  int used = 0;
  for (auto& [lam, sz] : blocks) used += sz;
  if (used > dim) throw InvalidInput("planted blocks exceed dimension");
  PlantedMatrix pm;
  pm.blocks = blocks;
  CounterRng rng(seed, 5);
  // pad with real eigenvalues spread over [-3, 3]
  for (int i = used; i < dim; ++i)
    pm.blocks.push_back({cd(-3.0 + 6.0 * (i - used) / std::max(1, dim - used - 1), 0.0), 1});
  // well-conditioned similarity: identity + small random
  MatrixXcd V = MatrixXcd::Identity(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      V(i, j) += 0.15 / dim * cd(rng.normal(2 * (i * dim + j)),
                                 rng.normal(2 * (i * dim + j) + 1));
  pm.V = V;
  pm.Vinv = V.inverse();
  return pm;
}

AmbiguityReport contour_ambiguity(const ShiftedLinearOperator& P, double eps,
                                  cd alpha, const Contour& a, const Contour& b,
                                  const PowerOptions& opt) {
  MatrixXcd pa = complex_power_matrix(P, eps, alpha, a, opt);
  MatrixXcd pb = complex_power_matrix(P, eps, alpha, b, opt);
  AmbiguityReport rep;
  rep.difference = pa - pb;
  Eigen::JacobiSVD<MatrixXcd> svd(rep.difference);
  rep.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() +
                                 svd.singularValues().size());
  rep.norm = rep.singular_values.empty() ? 0.0 : rep.singular_values[0];
  for (double s : rep.singular_values)
    if (s > 1e-8 * rep.norm && rep.norm > 0) ++rep.numerical_rank;
  return rep;
}

std::vector<ZetaSample> zeta_diagonal(const LatticeOperator& op, double eps,
                                      const std::vector<cd>& alphas,
                                      const std::vector<std::vector<int>>& xnodes,
                                      const Contour& ct, const PowerOptions& opt) {
  SparseLatticeOperator sp(op);
  SectionGrid proto = op.proto();
  const int N = op.N;
  const double cell = std::pow(op.hx(), op.n);

  std::vector<ZetaSample> out;
  for (const auto& kidx : xnodes) {
    long node = proto.flat(kidx);
    MatrixXcd rhs = MatrixXcd::Zero(op.dim(), N);
    for (int c = 0; c < N; ++c) rhs(node * N + c, c) = 1.0;

    std::vector<cd> safe;
    std::vector<std::size_t> safe_idx;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (std::abs(alphas[i]) == 0.0) continue;
      safe.push_back(alphas[i]);
      safe_idx.push_back(i);
    }
    std::vector<MatrixXcd> blocks;
    if (!safe.empty()) blocks = complex_power_sweep(sp, eps, safe, ct, rhs, opt);

    std::vector<cd> values(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (std::abs(alphas[i]) == 0.0) {
        values[i] = cd(N, 0);  // identity diagonal, trace N (then normalized)
      }
    }
    for (std::size_t s = 0; s < safe.size(); ++s) {
      cd tr = 0;
      for (int c = 0; c < N; ++c) tr += blocks[s](node * N + c, c);
      values[safe_idx[s]] = tr;
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      ZetaSample zs;
      zs.alpha = alphas[i];
      zs.eps = eps;
      zs.x = proto.coords(kidx);
      zs.value = values[i] / (cell * op.sqrtg[node]);
      zs.provenance = std::abs(alphas[i]) == 0.0 ? "identity" : "contour";
      out.push_back(zs);
    }
  }
  return out;
}

cd zeta_diagonal_fourier_flat(const LatticeOperator& op, double eps, cd alpha) {
  // exact discrete-Fourier sum N * sum_k (phat(k) - i eps)^{-alpha} / (2L)^n
  if (op.family.kind() != MetricFamily::Kind::minkowski)
    throw InvalidInput("fourier oracle needs the flat family");
  const int m = op.m;
  KahanSum<cd> acc;
  Eigen::VectorXi kmode(op.n);
  std::vector<int> k(op.n, 0);
  long total = op.nodes();
  for (long f = 0; f < total; ++f) {
    long r = f;
    for (int i = 0; i < op.n; ++i) {
      int ki = static_cast<int>(r % m);
      r /= m;
      kmode[i] = ki <= m / 2 ? ki : ki - m;  // symmetric Brillouin indexing
    }
    double p = flat_symbol(op, kmode);
    acc.add(pow_principal(cd(p, -eps), -alpha));
  }
  (void)k;
  double vol = std::pow(2 * op.L, op.n);
  return acc.value() * cd(op.N, 0) / vol;
}

}  // namespace lz
