#include "lorentz_zeta.h"

#include <cstring>
#include <string>

#include "lz/config.hpp"
#include "lz/dynamics.hpp"
#include "lz/hadamard.hpp"
#include "lz/power.hpp"
#include "lz/runner.hpp"
#include "lz/transport.hpp"

namespace {

thread_local std::string g_last_error;

lz_status set_error(const lz::Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case lz::errc::config: return LZ_ERR_CONFIG;
    case lz::errc::invalid: return LZ_ERR_INVALID;
    case lz::errc::unsupported: return LZ_ERR_UNSUPPORTED;
    default: return LZ_ERR_NUMERIC;
  }
}

template <class F>
lz_status guarded(F&& f) {
  try {
    f();
    return LZ_OK;
  } catch (const lz::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LZ_ERR_NUMERIC;
  }
}

lz::TwistPotential twist_from(const char* clifford_json) {
  if (!clifford_json || !*clifford_json) return {};
  auto j = nlohmann::json::parse(clifford_json);
  return lz::twist_from_json(j.value("twist", nlohmann::json()));
}

}  // namespace

struct lz_metric {
  lz::MetricFamily fam;
};

struct lz_operator {
  lz::LatticeOperator op;
};

extern "C" {

const char* lz_version(void) { return "0.1.0"; }

const char* lz_last_error(void) { return g_last_error.c_str(); }

lz_status lz_run(const char* config_json, const char* subcommand,
                 const char* out_dir, long long seed) {
  if (!config_json || !subcommand) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    lz::run_experiment(config_json, subcommand, out_dir ? out_dir : ".", seed);
  });
}

lz_status lz_metric_create(const char* metric_json, lz_metric** out) {
  if (!metric_json || !out) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    auto j = nlohmann::json::parse(metric_json);
    *out = new lz_metric{lz::metric_from_json(j)};
  });
}

void lz_metric_destroy(lz_metric* m) { delete m; }

int lz_metric_dim(const lz_metric* m) { return m ? m->fam.dim() : 0; }

lz_status lz_metric_eval(const lz_metric* m, const double* x, double* g) {
  if (!m || !x || !g) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    int n = m->fam.dim();
    Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x, n);
    m->fam.validate_at(xv);
    Eigen::MatrixXd gm = m->fam.metric(xv);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g[r * n + c] = gm(r, c);
  });
}

lz_status lz_metric_scalar_curvature(const lz_metric* m, const double* x,
                                     double* R) {
  if (!m || !x || !R) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    int n = m->fam.dim();
    Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x, n);
    *R = lz::curvature_at(m->fam, xv).scalar;
  });
}

lz_status lz_operator_assemble(const lz_metric* m, const char* clifford_json,
                               double L, int mnodes, lz_operator** out) {
  if (!m || !out) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    auto tw = twist_from(clifford_json);
    auto rep = lz::build_gamma(m->fam.dim(), 1);
    *out = new lz_operator{lz::assemble(m->fam, rep, tw, mnodes, L)};
  });
}

void lz_operator_destroy(lz_operator* op) { delete op; }

long long lz_operator_dim(const lz_operator* op) { return op ? op->op.dim() : 0; }

long long lz_operator_nnz(const lz_operator* op) {
  return op ? static_cast<long long>(op->op.P.nonZeros()) : 0;
}

lz_status lz_operator_resolvent_norm(const lz_operator* op, double im_lambda,
                                     double* out_norm) {
  if (!op || !out_norm) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    auto rows = lz::resolvent_decay_scan(op->op, {im_lambda}, 2, 3);
    *out_norm = rows.at(0).resolvent_norm;
  });
}

lz_status lz_operator_zeta_diag(const lz_operator* op, double eps,
                                double alpha_re, double alpha_im, double theta,
                                double rtrunc, double* out_re, double* out_im) {
  if (!op || !out_re || !out_im) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    lz::SparseLatticeOperator sp(op->op);
    double rt = std::max(rtrunc, 2.5 * sp.norm_bound());
    lz::Contour ct = lz::build_contour(eps, theta, rt);
    std::vector<int> kc(op->op.n, op->op.m / 2);
    auto samples = lz::zeta_diagonal(op->op, eps, {{alpha_re, alpha_im}}, {kc}, ct);
    *out_re = samples.at(0).value.real();
    *out_im = samples.at(0).value.imag();
  });
}

lz_status lz_flat_zeta_density(int n, double alpha_re, double alpha_im, double eps,
                               double* out_re, double* out_im) {
  if (!out_re || !out_im) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    auto v = lz::flat_zeta_density(n, {alpha_re, alpha_im}, eps);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

lz_status lz_u1_check(const lz_metric* m, const char* clifford_json,
                      const double* x0, double* out_rel_error,
                      double* out_scalar_curvature) {
  if (!m || !x0 || !out_rel_error) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    int n = m->fam.dim();
    auto rep = lz::build_gamma(n, 1);
    auto tw = twist_from(clifford_json);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0, n);
    auto r = lz::transport_u1_origin(m->fam, rep, tw, x);
    *out_rel_error = r.rel_err_contraction;
    if (out_scalar_curvature) *out_scalar_curvature = r.scalar_curvature;
  });
}

lz_status lz_nontrapping(const lz_metric* m, int seeds, double tmax,
                         unsigned long long seed, int* out_certified) {
  if (!m || !out_certified) {
    g_last_error = "null argument";
    return LZ_ERR_INVALID;
  }
  return guarded([&] {
    auto v = lz::nontrapping_check(m->fam, seeds, tmax, seed);
    *out_certified = v.value == lz::NonTrappingVerdict::Value::certified ? 1 : 0;
  });
}

}  // extern "C"
