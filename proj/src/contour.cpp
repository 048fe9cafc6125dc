#include "lz/contour.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lz/numerics.hpp"

namespace lz {

using cd = std::complex<double>;

namespace {

struct Seg {
  // straight segment z(s) = base + dir*s, s in [a, b], or circular arc
  // z(t) = c + r e^{it}, t in [a, b] (b < a allowed: orientation).
  bool is_arc = false;
  cd base, dir;  // line
  cd center;     // arc
  double radius = 0;
  double a = 0, b = 0;
};

void emit(const Seg& s, int pts, std::vector<cd>& z, std::vector<cd>& w) {
  auto q = gauss_legendre_panel(std::min(s.a, s.b), std::max(s.a, s.b));
  double sgn = s.b >= s.a ? 1.0 : -1.0;
  // emit in traversal order
  std::vector<std::size_t> order(q.x.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = sgn > 0 ? i : order.size() - 1 - i;
  (void)pts;
  for (std::size_t i : order) {
    double t = q.x[i];
    if (s.is_arc) {
      cd e = std::exp(cd(0, t));
      z.push_back(s.center + s.radius * e);
      w.push_back(sgn * q.w[i] * cd(0, 1) * s.radius * e);
    } else {
      z.push_back(s.base + s.dir * t);
      w.push_back(sgn * q.w[i] * s.dir);
    }
  }
}

// split a line segment against a bump disk; returns subsegments + detour arc
std::vector<Seg> deform_line(const Seg& seg, const ContourBump& bump) {
  // distance of center from line, in segment parameter
  cd d = seg.dir / std::abs(seg.dir);
  double proj = ((bump.center - seg.base) * std::conj(d)).real() / std::abs(seg.dir);
  double dist = std::abs(seg.base + seg.dir * proj - bump.center);
  double lo = std::min(seg.a, seg.b), hi = std::max(seg.a, seg.b);
  if (dist >= bump.radius || proj <= lo || proj >= hi) return {seg};
  double half = std::sqrt(bump.radius * bump.radius - dist * dist) / std::abs(seg.dir);
  double s1 = std::max(lo, proj - half), s2 = std::min(hi, proj + half);
  if (s2 - s1 < 1e-14) return {seg};

  cd z1 = seg.base + seg.dir * s1;
  cd z2 = seg.base + seg.dir * s2;
  double phi1 = std::arg(z1 - bump.center);
  double phi2 = std::arg(z2 - bump.center);
  // two candidate arcs: phi increasing or decreasing (mod 2 pi)
  double up2 = phi2;
  while (up2 <= phi1) up2 += 2 * kPi;
  double dn2 = phi2;
  while (dn2 >= phi1) dn2 -= 2 * kPi;
  // pick the arc on the side away from the center's offset relative to the
  // line; `enclose` flips the choice.
  cd mid_up = bump.center + bump.radius * std::exp(cd(0, 0.5 * (phi1 + up2)));
  // side of the original line: sign of cross(dir, p - z1)
  auto side = [&](cd p) {
    cd rel = (p - z1) / seg.dir;
    return rel.imag() >= 0 ? +1 : -1;
  };
  int center_side = side(bump.center);
  bool up_away = side(mid_up) != center_side;
  bool use_up = up_away != bump.enclose;

  Seg before = seg, arc, after = seg;
  bool fwd = seg.b >= seg.a;
  if (fwd) {
    before.a = lo;
    before.b = s1;
    after.a = s2;
    after.b = hi;
  } else {
    before.a = hi;
    before.b = s2;
    after.a = s1;
    after.b = lo;
  }
  arc.is_arc = true;
  arc.center = bump.center;
  arc.radius = bump.radius;
  if (fwd) {
    arc.a = phi1;
    arc.b = use_up ? up2 : dn2;
  } else {
    // traverse from z2 to z1
    double p1 = phi2;
    double t_up = phi1;
    while (t_up <= p1) t_up += 2 * kPi;
    double t_dn = phi1;
    while (t_dn >= p1) t_dn -= 2 * kPi;
    cd mid_u = bump.center + bump.radius * std::exp(cd(0, 0.5 * (p1 + t_up)));
    bool u_away = side(mid_u) != center_side;
    bool use_u = u_away != bump.enclose;
    arc.a = p1;
    arc.b = use_u ? t_up : t_dn;
  }
  std::vector<Seg> out;
  if (std::abs(before.b - before.a) > 1e-14) out.push_back(before);
  out.push_back(arc);
  if (std::abs(after.b - after.a) > 1e-14) out.push_back(after);
  return out;
}

}  // namespace

Contour build_contour(double eps, double theta, double r_trunc, int nodes_per_panel,
                      const std::vector<ContourBump>& bumps) {
  if (!(eps > 0)) throw ContourFailure("eps must be > 0");
  if (!(theta > kPi / 2 && theta < kPi))
    throw ContourFailure("theta must lie in (pi/2, pi)");
  if (!(r_trunc > eps)) throw ContourFailure("truncation radius too small");
  Contour ct;
  ct.theta = theta;
  ct.eps = eps;
  ct.r_trunc = r_trunc;
  ct.nodes_per_panel = nodes_per_panel;
  ct.bumps = bumps;

  const cd shift(0, eps);
  const double r0 = eps / 2;

  std::vector<Seg> segs;
  // left ray, traversed from r_trunc down to eps/2
  {
    Seg s;
    s.base = shift;
    s.dir = std::exp(cd(0, theta));
    std::vector<double> cuts{r0};
    double r = std::max(2 * r0, eps);
    while (r < r_trunc) {
      cuts.push_back(r);
      r *= 2;
    }
    cuts.push_back(r_trunc);
    for (std::size_t i = cuts.size(); i-- > 1;) {
      Seg p = s;
      p.a = cuts[i];
      p.b = cuts[i - 1];
      segs.push_back(p);
    }
  }
  // connecting arc below the branch point: angle theta -> 3 pi - theta
  {
    const double w0 = theta, w1 = 3 * kPi - theta;
    const int arc_panels = 8;
    for (int i = 0; i < arc_panels; ++i) {
      Seg s;
      s.is_arc = true;
      s.center = shift;
      s.radius = r0;
      s.a = w0 + (w1 - w0) * i / arc_panels;
      s.b = w0 + (w1 - w0) * (i + 1) / arc_panels;
      segs.push_back(s);
    }
  }
  // right ray, eps/2 -> r_trunc
  {
    Seg s;
    s.base = shift;
    s.dir = std::exp(cd(0, kPi - theta));
    std::vector<double> cuts{r0};
    double r = std::max(2 * r0, eps);
    while (r < r_trunc) {
      cuts.push_back(r);
      r *= 2;
    }
    cuts.push_back(r_trunc);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Seg p = s;
      p.a = cuts[i];
      p.b = cuts[i + 1];
      segs.push_back(p);
    }
  }

  // apply deformations to line segments
  for (const auto& bump : bumps) {
    if (std::abs(bump.center - shift) < eps / 2 + bump.radius)
      throw ContourFailure("deformation collides with the base arc");
    std::vector<Seg> next;
    for (const auto& s : segs) {
      if (s.is_arc) {
        if (std::abs(bump.center - s.center) < s.radius + bump.radius &&
            s.radius == eps / 2)
          throw ContourFailure("deformation collides with the base arc");
        next.push_back(s);
      } else {
        auto parts = deform_line(s, bump);
        next.insert(next.end(), parts.begin(), parts.end());
      }
    }
    segs = next;
  }

  for (const auto& s : segs) emit(s, nodes_per_panel, ct.z, ct.w);
  return ct;
}

double contour_distance(const Contour& ct, cd p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : ct.z) best = std::min(best, std::abs(z - p));
  return best;
}

cd contour_integral(const Contour& ct, const std::function<cd(cd)>& f) {
  KahanSum<cd> acc;
  for (std::size_t j = 0; j < ct.size(); ++j) acc.add(ct.w[j] * f(ct.z[j]));
  return acc.value() / cd(0, 2 * kPi);
}

}  // namespace lz
