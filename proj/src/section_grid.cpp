#include "lz/section_grid.hpp"

#include "lz/numerics.hpp"

namespace lz {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

SectionGrid SectionGrid::zeros(int n, int m, int N, double L, Boundary b) {
  SectionGrid g;
  g.n = n;
  g.m = m;
  g.N = N;
  g.L = L;
  g.boundary = b;
  g.values = VectorXcd::Zero(g.nodes() * N);
  return g;
}

namespace {

// neighbor flat index with wrap / or -1 for zero padding
long neighbor(const SectionGrid& g, const std::vector<int>& k, int axis, int step) {
  int kk = k[axis] + step;
  if (kk < 0 || kk >= g.m) {
    if (g.boundary == SectionGrid::Boundary::zero) return -1;
    kk = (kk % g.m + g.m) % g.m;
  }
  std::vector<int> kn = k;
  kn[axis] = kk;
  return g.flat(kn);
}

Eigen::VectorXcd fiber_at(const SectionGrid& g, long node) {
  if (node < 0) return VectorXcd::Zero(g.N);
  return g.values.segment(node * g.N, g.N);
}

}  // namespace

DiracStencil::DiracStencil(const MetricFamily& fam, const CliffordRep& rep,
                           const TwistPotential& tw, const SectionGrid& proto)
    : n_(proto.n), m_(proto.m), N_(rep.N), L_(proto.L), boundary_(proto.boundary) {
  const long nodes = proto.nodes();
  gam_.resize(nodes * n_);
  zer_.resize(nodes);
  sqrtg_.resize(nodes);
  parallel_for(nodes, [&](std::size_t node) {
    std::vector<int> kk(n_);
    proto.unflatten(node, kk);
    VectorXd x = proto.coords(kk);
    auto conn = spin_connection(fam, rep, tw, x);
    sqrtg_[node] = fam.sqrt_abs_det(x);
    MatrixXcd Z = MatrixXcd::Zero(N_, N_);
    for (int nu = 0; nu < n_; ++nu) {
      MatrixXcd gt = MatrixXcd::Zero(N_, N_);
      for (int a = 0; a < n_; ++a) {
        double eta = (a == 0) ? 1.0 : -1.0;
        gt += eta * conn.vielbein(nu, a) * rep.gamma[a];
      }
      gam_[node * n_ + nu] = gt;
      Z += gt * (conn.omega[nu] + conn.twist[nu] * MatrixXcd::Identity(N_, N_));
    }
    zer_[node] = Z;
  });
}

void DiracStencil::apply(const SectionGrid& u, SectionGrid& out) const {
  const long nodes = u.nodes();
  const double inv2h = 1.0 / (2.0 * u.hx());
  out.values.resize(u.values.size());
  parallel_for(nodes, [&](std::size_t node) {
    std::vector<int> k(n_);
    u.unflatten(node, k);
    Eigen::VectorXcd acc = zer_[node] * fiber_at(u, node);
    for (int nu = 0; nu < n_; ++nu) {
      long np = neighbor(u, k, nu, +1);
      long nm = neighbor(u, k, nu, -1);
      acc += gam_[node * n_ + nu] * ((fiber_at(u, np) - fiber_at(u, nm)) * inv2h);
    }
    out.values.segment(node * N_, N_) = acc;
  });
}

SectionGrid DiracStencil::apply(const SectionGrid& u) const {
  SectionGrid out = u;
  apply(u, out);
  return out;
}

SectionGrid test_section(const SectionGrid& proto, double sigma, int flavor) {
  SectionGrid u = proto;
  u.values.resize(proto.nodes() * proto.N);
  std::vector<int> k(proto.n);
  for (long node = 0; node < proto.nodes(); ++node) {
    proto.unflatten(node, k);
    VectorXd x = proto.coords(k);
    double r2 = x.squaredNorm();
    double env = std::exp(-r2 / (sigma * sigma));
    for (int c = 0; c < proto.N; ++c) {
      double poly = 1.0;
      switch ((c + flavor) % 3) {
        case 0: poly = 1.0; break;
        case 1: poly = x[0] + 0.5; break;
        case 2: poly = x[0] * x[proto.n - 1] - 0.25; break;
      }
      u.values[node * proto.N + c] = cd(poly * env, 0.3 * env * (c + 1));
    }
  }
  return u;
}

SectionGrid bochner_rhs(const MetricFamily& fam, const CliffordRep& rep,
                        const TwistPotential& tw, const SectionGrid& u) {
  const int n = u.n, N = u.N;
  const long nodes = u.nodes();
  const double inv2h = 1.0 / (2.0 * u.hx());

  // connection data per node
  std::vector<ConnectionData> conn(nodes);
  std::vector<double> Rg(nodes);
  std::vector<MatrixXcd> Fb(nodes);
  std::vector<Eigen::MatrixXd> ginvs(nodes);
  std::vector<Eigen::VectorXd> dlog(nodes);
  parallel_for(nodes, [&](std::size_t node) {
    std::vector<int> k(n);
    u.unflatten(node, k);
    VectorXd x = u.coords(k);
    conn[node] = spin_connection(fam, rep, tw, x);
    auto curv = curvature_at(fam, x);
    Rg[node] = curv.scalar;
    dlog[node] = curv.grad_log_sqrtg;
    ginvs[node] = fam.inverse_metric(x);
    Fb[node] = twisting_curvature(fam, rep, tw, x).contraction;
  });

  // t_i = nabla_i u
  std::vector<SectionGrid> t(n, u);
  parallel_for(nodes, [&](std::size_t node) {
    std::vector<int> k(n);
    u.unflatten(node, k);
    for (int i = 0; i < n; ++i) {
      long np = neighbor(u, k, i, +1);
      long nm = neighbor(u, k, i, -1);
      Eigen::VectorXcd v = (fiber_at(u, np) - fiber_at(u, nm)) * inv2h;
      v += (conn[node].omega[i] +
            conn[node].twist[i] * MatrixXcd::Identity(N, N)) *
           fiber_at(u, node);
      t[i].values.segment(node * N, N) = v;
    }
  });

  // q^j = g^{ij} t_i
  std::vector<SectionGrid> q(n, u);
  parallel_for(nodes, [&](std::size_t node) {
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
      for (int i = 0; i < n; ++i)
        v += ginvs[node](i, j) * t[i].values.segment(node * N, N);
      q[j].values.segment(node * N, N) = v;
    }
  });

  SectionGrid out = u;
  parallel_for(nodes, [&](std::size_t node) {
    std::vector<int> k(n);
    u.unflatten(node, k);
    Eigen::VectorXcd div = Eigen::VectorXcd::Zero(N);
    for (int j = 0; j < n; ++j) {
      long np = neighbor(u, k, j, +1);
      long nm = neighbor(u, k, j, -1);
      div += (fiber_at(q[j], np) - fiber_at(q[j], nm)) * inv2h;
      div += (conn[node].omega[j] +
              conn[node].twist[j] * MatrixXcd::Identity(N, N)) *
             q[j].values.segment(node * N, N);
    }
    Eigen::VectorXcd dens = Eigen::VectorXcd::Zero(N);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dens += ginvs[node](i, j) * dlog[node][j] *
                t[i].values.segment(node * N, N);
    out.values.segment(node * N, N) =
        -div - dens + Fb[node] * fiber_at(u, node) +
        0.25 * Rg[node] * fiber_at(u, node);
  });
  return out;
}

BochnerReport bochner_lichnerowicz_residual(const MetricFamily& fam,
                                            const CliffordRep& rep,
                                            const TwistPotential& tw,
                                            const SectionGrid& u) {
  DiracStencil D(fam, rep, tw, u);
  SectionGrid lhs = D.apply(D.apply(u));
  SectionGrid rhs = bochner_rhs(fam, rep, tw, u);

  BochnerReport rep_out;
  rep_out.hx = u.hx();
  const int margin = 4;
  std::vector<int> k(u.n);
  double worst = 0;
  for (long node = 0; node < u.nodes(); ++node) {
    u.unflatten(node, k);
    bool interior = true;
    for (int i = 0; i < u.n; ++i)
      if (k[i] < margin || k[i] >= u.m - margin) interior = false;
    if (!interior) continue;
    worst = std::max(worst, (lhs.values.segment(node * u.N, u.N) -
                             rhs.values.segment(node * u.N, u.N))
                                .cwiseAbs()
                                .maxCoeff());
  }
  rep_out.residual = worst;
  return rep_out;
}

}  // namespace lz
