#include "lz/numerics.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace lz {

cdouble pow_branch(cdouble w, cdouble expnt, double arg_min) {
  double th = std::atan2(w.imag(), w.real());
  while (th <= arg_min) th += 2 * kPi;
  while (th > arg_min + 2 * kPi) th -= 2 * kPi;
  cdouble logw(std::log(std::abs(w)), th);
  return std::exp(expnt * logw);
}

namespace {

// Abscissas/weights for 16-point Gauss-Legendre on [-1,1].
const double kGL16X[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
const double kGL16W[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

cdouble simpson(double h, cdouble fa, cdouble fm, cdouble fb) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

cdouble adaptive_rec(const std::function<cdouble(double)>& f, double a,
                     double b, cdouble fa, cdouble fm, cdouble fb, cdouble s,
                     double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cdouble flm = f(lm), frm = f(rm);
  cdouble sl = simpson(m - a, fa, flm, fm);
  cdouble sr = simpson(b - m, fm, frm, fb);
  cdouble s2 = sl + sr;
  if (depth <= 0 || std::abs(s2 - s) < 15 * tol) return s2 + (s2 - s) / 15.0;
  return adaptive_rec(f, a, m, fa, flm, fm, sl, tol / 2, depth - 1) +
         adaptive_rec(f, m, b, fm, frm, fb, sr, tol / 2, depth - 1);
}

}  // namespace

QuadNodes gauss_legendre_panel(double a, double b) {
  QuadNodes q;
  q.x.reserve(16);
  q.w.reserve(16);
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 7; i >= 0; --i) {
    q.x.push_back(c - h * kGL16X[i]);
    q.w.push_back(h * kGL16W[i]);
  }
  for (int i = 0; i < 8; ++i) {
    q.x.push_back(c + h * kGL16X[i]);
    q.w.push_back(h * kGL16W[i]);
  }
  return q;
}

cdouble integrate_adaptive(const std::function<cdouble(double)>& f, double a,
                           double b, double tol, int max_depth) {
  cdouble fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cdouble s = simpson(b - a, fa, fm, fb);
  return adaptive_rec(f, a, b, fa, fm, fb, s, tol, max_depth);
}

cdouble integrate_half_line(const std::function<cdouble(double)>& f, double a,
                            double tol) {
  auto g = [&](double t) -> cdouble {
    double u = 1.0 - t;
    if (u < 1e-14) return {0.0, 0.0};
    double x = a + t / u;
    return f(x) / (u * u);
  };
  return integrate_adaptive(g, 0.0, 1.0 - 1e-12, tol);
}

int worker_count() {
  if (const char* env = std::getenv("LORENTZ_ZETA_THREADS")) {
    int k = std::atoi(env);
    if (k > 0) return k;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  int workers = std::min<std::size_t>(worker_count(), n ? n : 1);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lz
