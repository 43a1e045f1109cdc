#include "denjoy/geodesic.hpp"

namespace denjoy {

namespace {

cpx unit_boundary(xcpx p) {
  if (p.inf) fail("geodesic: disk endpoints must be finite");
  double r = std::abs(p.v);
  if (std::abs(r - 1.0) > 1e-6) fail("geodesic: endpoint not on the unit circle");
  return p.v / r;
}

double real_boundary(xcpx p) {
  if (std::abs(p.v.imag()) > 1e-9 * (1.0 + std::abs(p.v.real())))
    fail("geodesic: endpoint not on the real line");
  return p.v.real();
}

double wrap_pi(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

Geodesic geodesic_between(Model model, xcpx p, xcpx q) {
  Geodesic g;
  g.model = model;
  g.p = p;
  g.q = q;
  if (model == Model::Disk) {
    cpx pp = unit_boundary(p), qq = unit_boundary(q);
    g.p = xcpx(pp);
    g.q = xcpx(qq);
    if (std::abs(pp - qq) < kCompareTol) fail("geodesic: coincident endpoints");
    // carrier center solves Re(c conj p) = Re(c conj q) = 1
    double D = pp.real() * qq.imag() - pp.imag() * qq.real();
    if (std::abs(D) < kNormalizeTol) {
      g.straight = true;
      g.dir = pp;
      return g;
    }
    g.center = cpx((qq.imag() - pp.imag()) / D, (pp.real() - qq.real()) / D);
    g.radius = std::sqrt(abs2(g.center) - 1.0);
    return g;
  }
  if (p.inf && q.inf) fail("geodesic: coincident endpoints at infinity");
  if (p.inf || q.inf) {
    g.straight = true;
    double x0 = real_boundary(p.inf ? q : p);
    g.center = cpx(x0, 0.0);
    g.dir = cpx(0.0, 1.0);
    return g;
  }
  double a = real_boundary(p), b = real_boundary(q);
  if (std::abs(a - b) < kCompareTol * (1.0 + std::abs(a) + std::abs(b)))
    fail("geodesic: coincident endpoints");
  g.center = cpx((a + b) / 2.0, 0.0);
  g.radius = std::abs(a - b) / 2.0;
  return g;
}

MoebiusMap reflection(const Geodesic& g) {
  MoebiusMap m;
  m.anti = true;
  if (!g.straight) {
    // inversion in the carrier circle
    m.a = g.center;
    m.b = cpx(g.radius * g.radius, 0.0) - g.center * std::conj(g.center);
    m.c = 1.0;
    m.d = -std::conj(g.center);
    return normalized(m);
  }
  if (g.model == Model::Disk) {
    m.a = g.dir * g.dir;
    m.b = 0.0;
    m.c = 0.0;
    m.d = 1.0;
    return normalized(m);
  }
  m.a = -1.0;
  m.b = 2.0 * g.center.real();
  m.c = 0.0;
  m.d = 1.0;
  return normalized(m);
}

cpx reflect(const Geodesic& g, cpx z) {
  if (!g.straight) {
    cpx u = std::conj(z - g.center);
    if (u == 0.0) fail("reflect: carrier center maps to infinity");
    return g.center + g.radius * g.radius / u;
  }
  if (g.model == Model::Disk) return g.dir * g.dir * std::conj(z);
  return 2.0 * g.center.real() - std::conj(z);
}

xcpx reflect(const Geodesic& g, xcpx z) {
  if (!g.straight) {
    if (z.inf) return xcpx(g.center);
    cpx u = std::conj(z.v - g.center);
    if (u == 0.0) return xcpx::infinity();
    return xcpx(g.center + g.radius * g.radius / u);
  }
  if (z.inf) return z;
  return xcpx(reflect(g, z.v));
}

double hyperbolic_distance(Model model, cpx z, cpx w) {
  if (model == Model::Disk) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
      fail("hyperbolic_distance: point not strictly inside the disk");
    double r = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
    return 2.0 * std::atanh(std::min(r, 1.0 - 1e-17));
  }
  if (z.imag() <= 0.0 || w.imag() <= 0.0)
    fail("hyperbolic_distance: point not strictly inside the half-plane");
  double r = std::abs(z - w) / std::abs(z - std::conj(w));
  return 2.0 * std::atanh(std::min(r, 1.0 - 1e-17));
}

double hyperbolic_distance(cpx z, cpx w) { return hyperbolic_distance(Model::Disk, z, w); }

double side_value(const Geodesic& g, cpx z) {
  if (!g.straight) return std::abs(z - g.center) - g.radius;
  if (g.model == Model::Disk)
    return std::conj(g.dir).real() * z.imag() + std::conj(g.dir).imag() * z.real();
  return z.real() - g.center.real();
}

bool HalfPlaneRegion::contains(cpx z, double tol) const {
  double sw = side_value(g, witness);
  double sz = side_value(g, z);
  return sz * (sw >= 0.0 ? 1.0 : -1.0) >= -tol;
}

HalfPlaneRegion half_plane_region(const Geodesic& g, cpx witness) {
  if (std::abs(side_value(g, witness)) < kNormalizeTol)
    fail("half_plane_region: witness lies on the geodesic");
  return HalfPlaneRegion{g, witness};
}

std::vector<cpx> geodesic_sample(const Geodesic& g, int k) {
  std::vector<cpx> out;
  out.reserve(k);
  if (!g.straight) {
    if (g.model == Model::Disk) {
      double fp = std::arg(g.p.v - g.center);
      double fq = std::arg(g.q.v - g.center);
      double d = wrap_pi(fq - fp);  // interior arc is always the minor one
      for (int i = 1; i <= k; ++i) {
        double t = double(i) / (k + 1);
        out.push_back(g.center + std::polar(g.radius, fp + t * d));
      }
    } else {
      for (int i = 1; i <= k; ++i) {
        double t = double(i) / (k + 1);
        out.push_back(g.center + std::polar(g.radius, t * kPi));
      }
    }
    return out;
  }
  if (g.model == Model::Disk) {
    for (int i = 1; i <= k; ++i) {
      double t = -1.0 + 2.0 * double(i) / (k + 1);
      out.push_back(t * g.dir);
    }
    return out;
  }
  for (int i = 0; i < k; ++i) {
    double s = -4.0 + 8.0 * double(i) / std::max(1, k - 1);
    out.push_back(g.center + cpx(0.0, std::exp(s)));
  }
  return out;
}

Geodesic perpendicular_bisector(cpx z, const MoebiusMap& m) {
  cpx w = moebius_apply(m, z);
  if (std::abs(w - z) < kCompareTol) fail("perpendicular_bisector: fixed input point");
  // transport z to the origin, drop the bisector there, map endpoints back
  MoebiusMap to_origin{1.0, -z, -std::conj(z), 1.0, false};
  cpx wp = moebius_apply(to_origin, w);
  double s = std::abs(wp);
  cpx u = wp / s;
  double t = s / (1.0 + std::sqrt(std::max(0.0, 1.0 - s * s)));  // hyperbolic midpoint
  double ell = (1.0 + t * t) / (2.0 * t);
  double theta = std::acos(std::min(1.0, 1.0 / ell));
  MoebiusMap back = inverse(to_origin);
  xcpx e1 = moebius_apply(back, xcpx(u * std::polar(1.0, theta)));
  xcpx e2 = moebius_apply(back, xcpx(u * std::polar(1.0, -theta)));
  return geodesic_between(Model::Disk, e1, e2);
}

xcpx cayley_point(xcpx z, bool disk_to_half) {
  return moebius_apply(disk_to_half ? cayley() : cayley_inverse(), z);
}

Geodesic cayley_geodesic(const Geodesic& g) {
  bool disk_to_half = g.model == Model::Disk;
  return geodesic_between(disk_to_half ? Model::HalfPlane : Model::Disk,
                          cayley_point(g.p, disk_to_half), cayley_point(g.q, disk_to_half));
}

MoebiusMap cayley_conjugate(const MoebiusMap& m, bool disk_to_half) {
  MoebiusMap c = disk_to_half ? cayley() : cayley_inverse();
  return compose(compose(c, m), inverse(c));
}

}  // namespace denjoy
