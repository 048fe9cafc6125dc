#include "lz/lattice.hpp"

#include <cmath>

#include "lz/numerics.hpp"
#include "lz/rng.hpp"

namespace lz {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

void check_box(const MetricFamily& fam, int m, double L) {
  double R = fam.perturbation_radius();
  if (!std::isfinite(R))
    throw ConfigError("lattice assembly needs a compactly supported perturbation");
  double hx = 2.0 * L / m;
  if (R > 0) {
    if (hx > R / 8.0 + 1e-12)
      throw ConfigError("grid does not resolve the perturbation (hx > R_pert/8)");
    if (R + 4 * hx >= L)
      throw ConfigError("perturbation support not strictly inside the box");
  }
}

SparseCd dirac_matrix(const MetricFamily& fam, const CliffordRep& rep,
                      const TwistPotential& tw, const SectionGrid& proto) {
  DiracStencil st(fam, rep, tw, proto);
  const int n = proto.n, N = proto.N;
  const long nodes = proto.nodes();
  const double inv2h = 1.0 / (2.0 * proto.hx());

  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(nodes * N * N * (2 * n + 1));
  std::vector<int> k(n);
  for (long node = 0; node < nodes; ++node) {
    proto.unflatten(node, k);
    const MatrixXcd& Z = st.zero_order(node);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c)
        if (Z(r, c) != 0.0) trip.emplace_back(node * N + r, node * N + c, Z(r, c));
    for (int nu = 0; nu < n; ++nu) {
      const MatrixXcd& G = st.gamma_coef(node, nu);
      for (int step : {+1, -1}) {
        std::vector<int> kk = k;
        kk[nu] = ((k[nu] + step) % proto.m + proto.m) % proto.m;
        long nb = proto.flat(kk);
        cd scale = cd(step, 0) * inv2h;
        for (int r = 0; r < N; ++r)
          for (int c = 0; c < N; ++c)
            if (G(r, c) != 0.0)
              trip.emplace_back(node * N + r, nb * N + c, scale * G(r, c));
      }
    }
  }
  SparseCd D(nodes * N, nodes * N);
  D.setFromTriplets(trip.begin(), trip.end());
  D.makeCompressed();
  return D;
}

}  // namespace

VectorXd LatticeOperator::volume_weights() const {
  VectorXd w(dim());
  double cell = std::pow(hx(), n);
  // fiber_weight is Hermitian positive; use its diagonal only if diagonal,
  // otherwise callers should use the full block form.  For the built-in reps
  // i beta gamma(e0) is the identity.
  for (long node = 0; node < nodes(); ++node)
    for (int c = 0; c < N; ++c)
      w[node * N + c] = sqrtg[node] * cell * fiber_weight(c, c).real();
  return w;
}

LatticeOperator assemble(const MetricFamily& fam, const CliffordRep& rep,
                         const TwistPotential& tw, int m, double L) {
  if (rep.n != fam.dim()) throw InvalidInput("rep/family dimension mismatch");
  check_box(fam, m, L);
  LatticeOperator op;
  op.n = fam.dim();
  op.m = m;
  op.N = rep.N;
  op.L = L;
  op.family = fam;
  op.rep = rep;
  op.twist = tw;
  op.provenance = "dirac-squared";

  SectionGrid proto = op.proto();
  DiracStencil st(fam, rep, tw, proto);
  op.sqrtg = st.sqrtg();
  SparseCd D = dirac_matrix(fam, rep, tw, proto);
  op.P = -(D * D);
  op.P.makeCompressed();

  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(op.n);
  e0[0] = 1.0;
  op.fiber_weight = cd(0, 1) * rep.beta * rep.gamma_of(e0);
  return op;
}

LatticeOperator assemble_wave_scalar(const MetricFamily& fam, int m, double L) {
  check_box(fam, m, L);
  LatticeOperator op;
  op.n = fam.dim();
  op.m = m;
  op.N = 1;
  op.L = L;
  op.family = fam;
  op.provenance = "wave-scalar";

  SectionGrid proto = SectionGrid::zeros(op.n, m, 1, L);
  const int n = op.n;
  const long nodes = proto.nodes();
  const double hx = proto.hx();
  op.sqrtg.resize(nodes);
  std::vector<Eigen::MatrixXd> ginv_sg(nodes);
  std::vector<int> k(n);
  for (long node = 0; node < nodes; ++node) {
    proto.unflatten(node, k);
    VectorXd x = proto.coords(k);
    op.sqrtg[node] = fam.sqrt_abs_det(x);
    ginv_sg[node] = fam.inverse_metric(x) * op.sqrtg[node];
  }
  // P = -box_g = -|g|^{-1/2} D_j (|g|^{1/2} g^{ij} D_i u), nested central
  std::vector<Eigen::Triplet<cd>> trip;
  auto wrap = [&](std::vector<int> kk) {
    for (int i = 0; i < n; ++i) kk[i] = ((kk[i] % m) + m) % m;
    return proto.flat(kk);
  };
  for (long node = 0; node < nodes; ++node) {
    proto.unflatten(node, k);
    for (int j = 0; j < n; ++j)
      for (int sj : {+1, -1}) {
        std::vector<int> kj = k;
        kj[j] += sj;
        long nj = wrap(kj);
        double cj = sj / (2.0 * hx);
        for (int i = 0; i < n; ++i) {
          double coef = ginv_sg[nj](i, j);
          for (int si : {+1, -1}) {
            std::vector<int> kij = kj;
            kij[i] += si;
            long nij = wrap(kij);
            double cij = si / (2.0 * hx);
            trip.emplace_back(node, nij, cd(-cj * coef * cij / op.sqrtg[node], 0));
          }
        }
      }
  }
  op.P.resize(nodes, nodes);
  op.P.setFromTriplets(trip.begin(), trip.end());
  op.P.makeCompressed();
  op.fiber_weight = Eigen::MatrixXcd::Identity(1, 1);
  op.rep = CliffordRep{};
  op.rep.N = 1;
  return op;
}

double flat_symbol(const LatticeOperator& op, const Eigen::VectorXi& kmode) {
  // Squared-central-difference symbol of -D^2 on the plane wave e^{ik.x},
  // k_j = pi kmode_j / L: eigenvalue sum_j sin^2(k_j hx)/hx^2 with the
  // |xi|^2_eta sign pattern (-,+,...,+).
  double hx = op.hx();
  double v = 0;
  for (int j = 0; j < op.n; ++j) {
    double kj = kPi * kmode[j] / op.L;
    double s = std::sin(kj * hx) / hx;
    v += (j == 0 ? -1.0 : 1.0) * s * s;
  }
  return v;
}

VectorXcd resolvent_solve(const LatticeOperator& op, cd z, const VectorXcd& rhs,
                          double tol) {
  SparseCd A = op.P;
  for (long i = 0; i < A.rows(); ++i) A.coeffRef(i, i) -= z;
  A.makeCompressed();
  Eigen::SparseLU<SparseCd> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NearSpectrum(z, 0.0);
  VectorXcd u = lu.solve(rhs);
  double res = (A * u - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (!(res <= tol)) throw NearSpectrum(z, res);
  return u;
}

ShiftedFactor::ShiftedFactor(const SparseCd& P, cd z, bool adjoint)
    : lu_(std::make_unique<Eigen::SparseLU<SparseCd>>()) {
  SparseCd A = P;
  for (long i = 0; i < A.rows(); ++i) A.coeffRef(i, i) -= z;
  if (adjoint) A = SparseCd(A.adjoint());
  A.makeCompressed();
  lu_->compute(A);
  if (lu_->info() != Eigen::Success) throw NearSpectrum(z, 0.0);
}

VectorXcd ShiftedFactor::solve(const VectorXcd& rhs) const { return lu_->solve(rhs); }

std::vector<DecayScanRow> resolvent_decay_scan(const LatticeOperator& op,
                                               const std::vector<double>& im_values,
                                               int samples, std::uint64_t seed) {
  std::vector<DecayScanRow> out;
  CounterRng rng(seed, 31);
  for (double im : im_values) {
    if (!(im >= 1.0)) throw InvalidInput("decay scan needs Im lambda >= 1");
    cd z(0.0, im);
    ShiftedFactor F(op.P, z, false);
    ShiftedFactor Fh(op.P, z, true);
    double best = 0;
    for (int s = 0; s < samples; ++s) {
      VectorXcd v(op.dim());
      for (long i = 0; i < op.dim(); ++i)
        v[i] = cd(rng.normal(2 * (s * op.dim() + i)),
                  rng.normal(2 * (s * op.dim() + i) + 1));
      v.normalize();
      double sigma = 0;
      for (int it = 0; it < 40; ++it) {
        VectorXcd w = F.solve(v);
        VectorXcd u = Fh.solve(w);  // (P-z)^{-*} (P-z)^{-1} v
        double nrm = u.norm();
        if (nrm == 0) break;
        double s_new = std::sqrt(nrm);
        v = u / nrm;
        if (it > 4 && std::abs(s_new - sigma) < 1e-8 * s_new) {
          sigma = s_new;
          break;
        }
        sigma = s_new;
      }
      best = std::max(best, sigma);
    }
    out.push_back({im, best, im * best});
  }
  return out;
}

AdjointDefect adjoint_defect(const LatticeOperator& op, int iters,
                             std::uint64_t seed) {
  // G = blockdiag(W sqrtg hx^n); A = P - G^{-1} P^H G;  ||A||_G via power
  // iteration on B = G^{-1} A^H G A.
  const long d = op.dim();
  const long nodes = op.nodes();
  const int N = op.N;
  const double cell = std::pow(op.hx(), op.n);
  MatrixXcd W = op.fiber_weight;
  MatrixXcd Winv = W.inverse();

  auto applyG = [&](const VectorXcd& v) {
    VectorXcd r(d);
    for (long node = 0; node < nodes; ++node)
      r.segment(node * N, N) =
          (op.sqrtg[node] * cell) * (W * v.segment(node * N, N));
    return r;
  };
  auto applyGinv = [&](const VectorXcd& v) {
    VectorXcd r(d);
    for (long node = 0; node < nodes; ++node)
      r.segment(node * N, N) =
          (Winv * v.segment(node * N, N)) / (op.sqrtg[node] * cell);
    return r;
  };
  SparseCd PH = SparseCd(op.P.adjoint());
  // A = P - P*  with P* the G-adjoint; A is G-skew, so ||A||_G is reached by
  // power iteration on A^2.
  auto applyA = [&](const VectorXcd& v) -> VectorXcd {
    return op.P * v - applyGinv(PH * applyG(v));
  };

  CounterRng rng(seed, 77);
  auto gnorm = [&](const VectorXcd& v) {
    return std::sqrt(std::abs(v.dot(applyG(v)).real()));
  };

  AdjointDefect out;
  // restrict-to-tail mask
  double R = op.family.perturbation_radius();
  std::vector<char> outside(nodes, 1);
  SectionGrid proto = op.proto();
  std::vector<int> k(op.n);
  for (long node = 0; node < nodes; ++node) {
    proto.unflatten(node, k);
    outside[node] = proto.coords(k).norm() > R + 3 * op.hx() ? 1 : 0;
  }
  auto mask = [&](VectorXcd v, bool tail) {
    if (!tail) return v;
    for (long node = 0; node < nodes; ++node)
      if (!outside[node]) v.segment(node * N, N).setZero();
    return v;
  };

  for (int pass = 0; pass < 2; ++pass) {
    bool tail = pass == 1;
    VectorXcd v(d);
    for (long i = 0; i < d; ++i)
      v[i] = cd(rng.normal(2 * i + tail), rng.normal(2 * i + 1 + tail));
    v = mask(v, tail);
    double nv = gnorm(v);
    if (nv == 0) continue;
    v /= nv;
    double best = 0;
    for (int it = 0; it < iters; ++it) {
      VectorXcd w = mask(applyA(mask(v, tail)), tail);
      double nw = gnorm(w);
      best = nw;
      if (nw < 1e-300) break;
      // A is G-skew, so power-iterate on A twice (A^*A = -A^2 up to sign)
      VectorXcd u = mask(applyA(w / nw), tail);
      double nu = gnorm(u);
      if (nu < 1e-300) break;
      v = u / nu;
    }
    if (tail)
      out.norm_outside = best;
    else
      out.norm = best;
  }
  return out;
}

}  // namespace lz
