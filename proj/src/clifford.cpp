#include "lz/clifford.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "lz/numerics.hpp"

namespace lz {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cd = std::complex<double>;

MatrixXcd CliffordRep::gamma_of(const VectorXd& c) const {
  MatrixXcd g = MatrixXcd::Zero(N, N);
  for (int a = 0; a < n; ++a) g += c[a] * gamma[a];
  return g;
}

CliffordRep build_gamma(int n, int twist_rank) {
  if (n % 2 != 0 || n > 4 || n < 2) throw Unsupported("dimension must be 2 or 4");
  if (twist_rank < 1) throw InvalidInput("twist rank must be >= 1");
  CliffordRep rep;
  rep.n = n;
  rep.twist_rank = twist_rank;
  const cd I(0, 1);

  std::vector<MatrixXcd> g;
  MatrixXcd beta;
  if (n == 2) {
    MatrixXcd g0(2, 2), g1(2, 2), b(2, 2);
    g0 << 0, 1, -1, 0;
    g1 << 0, 1, 1, 0;
    b << 0, I, -I, 0;
    g = {g0, g1};
    beta = b;
  } else {
    // Gamma_a = i * gamma_a^{Dirac}; then Gamma_0^2 = -1, Gamma_i^2 = +1.
    MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2), id2 = MatrixXcd::Identity(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, -I, I, 0;
    s3 << 1, 0, 0, -1;
    MatrixXcd d0 = MatrixXcd::Zero(4, 4);
    d0.topLeftCorner(2, 2) = id2;
    d0.bottomRightCorner(2, 2) = -id2;
    auto offdiag = [&](const MatrixXcd& s) {
      MatrixXcd m = MatrixXcd::Zero(4, 4);
      m.topRightCorner(2, 2) = s;
      m.bottomLeftCorner(2, 2) = -s;
      return m;
    };
    g = {I * d0, I * offdiag(s1), I * offdiag(s2), I * offdiag(s3)};
    beta = -d0;
  }

  if (twist_rank > 1) {
    MatrixXcd idt = MatrixXcd::Identity(twist_rank, twist_rank);
    for (auto& m : g) m = Eigen::kroneckerProduct(m, idt).eval();
    beta = Eigen::kroneckerProduct(beta, idt).eval();
  }
  rep.gamma = g;
  rep.beta = beta;
  rep.N = static_cast<int>(beta.rows());
  return rep;
}

PositivityReport check_positivity(const CliffordRep& rep, const VectorXd& e) {
  if (e.size() != rep.n) throw InvalidInput("frame vector has wrong dimension");
  double eta_norm = e[0] * e[0];
  for (int i = 1; i < rep.n; ++i) eta_norm -= e[i] * e[i];
  if (!(eta_norm > 0)) throw InvalidInput("vector is not eta-timelike");
  MatrixXcd m = cd(0, 1) * rep.beta * rep.gamma_of(e);
  double herm = (m - m.adjoint()).norm();
  if (herm > 1e-10 * m.norm()) throw InvalidInput("i beta gamma(e) not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((m + m.adjoint()) / 2.0);
  PositivityReport rep_out;
  rep_out.min_eigenvalue = es.eigenvalues().minCoeff();
  rep_out.positive = rep_out.min_eigenvalue > 0;
  return rep_out;
}

std::vector<cd> TwistPotential::values(int n, const VectorXd& x) const {
  std::vector<double> a(n);
  eval(n, x.data(), a.data());
  std::vector<cd> out(n);
  for (int mu = 0; mu < n; ++mu) out[mu] = cd(0, a[mu]);
  return out;
}

namespace {

// Deterministic Gram-Schmidt against g, starting from d/dx0 (timelike).
template <class T>
void gs_vielbein(int n, const T* g /*n*n row-major*/, T* E /*E[mu*n+a]*/) {
  // columns a of E are the frame vectors
  std::vector<T> v(n);
  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) v[m] = T(m == a ? 1 : 0);
    for (int b = 0; b < n; ++b) {
      if (b >= a) break;
      // subtract eta_bb * g(v, e_b) e_b
      T ip = T(0);
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) ip += v[m] * g[m * n + k] * E[k * n + b];
      T sgn = T(b == 0 ? 1 : -1);
      for (int m = 0; m < n; ++m) v[m] -= sgn * ip * E[m * n + b];
    }
    T q = T(0);
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) q += v[m] * g[m * n + k] * v[k];
    if (a == 0) {
      // timelike leg
      for (int m = 0; m < n; ++m) E[m * n + 0] = v[m] / sqrt(q);
    } else {
      for (int m = 0; m < n; ++m) E[m * n + a] = v[m] / sqrt(-q);
    }
  }
}

template <class T>
void vielbein_at(const MetricFamily& fam, const T* x, T* E) {
  const int n = fam.dim();
  std::vector<T> g(n * n);
  fam.metric_T(x, g.data());
  gs_vielbein(n, g.data(), E);
}

}  // namespace

ConnectionData spin_connection(const MetricFamily& fam, const CliffordRep& rep,
                               const TwistPotential& tw, const VectorXd& x) {
  const int n = fam.dim();
  if (rep.n != n) throw InvalidInput("rep dimension mismatch");
  ConnectionData conn;
  conn.x = x;

  std::vector<double> Ebuf(n * n);
  vielbein_at(fam, x.data(), Ebuf.data());
  conn.vielbein = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(Ebuf.data(), n, n);
  double gram_check = std::abs(
      (conn.vielbein.transpose() * fam.metric(x) * conn.vielbein).determinant());
  if (!(gram_check > 1e-12)) throw SingularMetric("degenerate vielbein");

  // coframe C(a, mu) = eta^{ab} g_{mu nu} E(nu, b)
  MatrixXd g = fam.metric(x);
  MatrixXd C(n, n);
  for (int a = 0; a < n; ++a) {
    double sgn = (a == 0) ? 1.0 : -1.0;
    C.row(a) = sgn * (g * conn.vielbein.col(a)).transpose();
  }

  // dE[kappa](mu, a) via complex step through the closed-form GS map
  std::vector<MatrixXd> dE(n, MatrixXd(n, n));
  const double h = 1e-100;
  std::vector<cd> xc(n), Ec(n * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) xc[i] = cd(x[i], i == k ? h : 0.0);
    vielbein_at(fam, xc.data(), Ec.data());
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a) dE[k](m, a) = Ec[m * n + a].imag() / h;
  }

  auto gam = christoffel_at(fam, x);

  // omega_mu^{a}{}_{b} = C(a,nu) [ d_mu E(nu, b) + Gamma^nu_{mu lam} E(lam, b) ]
  conn.omega.assign(n, MatrixXcd::Zero(rep.N, rep.N));
  for (int mu = 0; mu < n; ++mu) {
    MatrixXd w(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0;
        for (int nu = 0; nu < n; ++nu) {
          double cov = dE[mu](nu, b);
          for (int lam = 0; lam < n; ++lam)
            cov += gam[nu](mu, lam) * conn.vielbein(lam, b);
          s += C(a, nu) * cov;
        }
        w(a, b) = s;
      }
    // lower the first index: w_{ab} = eta_{ac} w^c_b, antisymmetric
    MatrixXd wl = w;
    for (int b = 0; b < n; ++b)
      for (int a = 1; a < n; ++a) wl(a, b) = -w(a, b);
    MatrixXcd om = MatrixXcd::Zero(rep.N, rep.N);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (wl(a, b) == 0.0) continue;
        double ea = (a == 0) ? 1.0 : -1.0;
        double eb = (b == 0) ? 1.0 : -1.0;
        om += -0.25 * wl(a, b) * (ea * rep.gamma[a]) * (eb * rep.gamma[b]);
      }
    conn.omega[mu] = om;
  }
  conn.twist = tw.values(n, x);
  return conn;
}

TwistingCurvature twisting_curvature(const MetricFamily& fam, const CliffordRep& rep,
                                     const TwistPotential& tw, const VectorXd& x) {
  const int n = fam.dim();
  TwistingCurvature out;
  out.two_form = MatrixXcd::Zero(n, n);
  const double h = 1e-100;
  std::vector<cd> xc(n), a(n);
  std::vector<std::vector<double>> da(n, std::vector<double>(n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) xc[i] = cd(x[i], i == k ? h : 0.0);
    tw.eval(n, xc.data(), a.data());
    for (int mu = 0; mu < n; ++mu) da[k][mu] = a[mu].imag() / h;
  }
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      out.two_form(mu, nu) = cd(0, da[mu][nu] - da[nu][mu]);

  auto conn = spin_connection(fam, rep, tw, x);
  out.contraction = MatrixXcd::Zero(rep.N, rep.N);
  // raised frame indices: gamma^i gamma^j F(e_i, e_j)
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cd val(0, 0);
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
          val += conn.vielbein(mu, i) * conn.vielbein(nu, j) * out.two_form(mu, nu);
      double ei = (i == 0) ? 1.0 : -1.0;
      double ej = (j == 0) ? 1.0 : -1.0;
      out.contraction += (ei * ej) * rep.gamma[i] * rep.gamma[j] * val;
    }
  return out;
}

double connection_compatibility_residual(const MetricFamily& fam,
                                         const CliffordRep& rep,
                                         const TwistPotential& tw,
                                         const VectorXd& x) {
  const int n = fam.dim();
  auto conn = spin_connection(fam, rep, tw, x);
  auto gam = christoffel_at(fam, x);
  // omega^a_b from the frame data (recompute as in spin_connection)
  const double h = 1e-100;
  std::vector<cd> xc(n), Ec(n * n);
  std::vector<MatrixXd> dE(n, MatrixXd(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) xc[i] = cd(x[i], i == k ? h : 0.0);
    vielbein_at(fam, xc.data(), Ec.data());
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a) dE[k](m, a) = Ec[m * n + a].imag() / h;
  }
  MatrixXd g = fam.metric(x);
  MatrixXd C(n, n);
  for (int a = 0; a < n; ++a) {
    double sgn = (a == 0) ? 1.0 : -1.0;
    C.row(a) = sgn * (g * conn.vielbein.col(a)).transpose();
  }
  double worst = 0;
  for (int mu = 0; mu < n; ++mu) {
    MatrixXd w(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0;
        for (int nu = 0; nu < n; ++nu) {
          double cov = dE[mu](nu, b);
          for (int lam = 0; lam < n; ++lam)
            cov += gam[nu](mu, lam) * conn.vielbein(lam, b);
          s += C(a, nu) * cov;
        }
        w(a, b) = s;
      }
    for (int c = 0; c < n; ++c) {
      MatrixXcd lhs = conn.omega[mu] * rep.gamma[c] - rep.gamma[c] * conn.omega[mu];
      MatrixXcd rhs = MatrixXcd::Zero(rep.N, rep.N);
      for (int a = 0; a < n; ++a) rhs += w(a, c) * rep.gamma[a];
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

double beta_metricity_residual(const CliffordRep& rep, const ConnectionData& conn) {
  double worst = 0;
  for (const auto& om : conn.omega) {
    worst = std::max(worst, (om.adjoint() * rep.beta + rep.beta * om).norm());
  }
  return worst;
}

}  // namespace lz
