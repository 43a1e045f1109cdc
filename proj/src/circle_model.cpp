#include "denjoy/circle_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace denjoy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Raw matrix product and adjugate, no det normalization: keeps exactly real
// entries exactly real, which is what makes conjform equivariance of the
// transported maps hold to the last bit.
MoebiusMap real_compose(const MoebiusMap& m1, const MoebiusMap& m2) {
  MoebiusMap r;
  r.a = m1.a * m2.a + m1.b * m2.c;
  r.b = m1.a * m2.b + m1.b * m2.d;
  r.c = m1.c * m2.a + m1.d * m2.c;
  r.d = m1.c * m2.b + m1.d * m2.d;
  r.anti = false;
  return r;
}

MoebiusMap adjugate(const MoebiusMap& m) {
  return MoebiusMap{m.d, -m.b, -m.c, m.a, false};
}

// power-of-two rescale: conditioning without any rounding
MoebiusMap rescale_pow2(MoebiusMap m) {
  double s = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (s <= 0.0) fail("circle_model: zero Moebius matrix");
  double f = std::exp2(-std::round(std::log2(s)));
  m.a *= f;
  m.b *= f;
  m.c *= f;
  m.d *= f;
  return m;
}

double real_of(xcpx p, const char* what) {
  if (p.inf) fail(std::string("circle_model: unexpected infinity in ") + what);
  return p.v.real();
}

}  // namespace

MoebiusMap real_moebius_three_points(xcpx p1, xcpx p2, xcpx p3) {
  int infs = int(p1.inf) + int(p2.inf) + int(p3.inf);
  if (infs > 1) fail("real_moebius_three_points: repeated infinite point");
  MoebiusMap m;
  if (p1.inf) {
    double x2 = real_of(p2, "p2"), x3 = real_of(p3, "p3");
    m = {0.0, x2 - x3, 1.0, -x3, false};
  } else if (p2.inf) {
    double x1 = real_of(p1, "p1"), x3 = real_of(p3, "p3");
    m = {1.0, -x1, 1.0, -x3, false};
  } else if (p3.inf) {
    double x1 = real_of(p1, "p1"), x2 = real_of(p2, "p2");
    m = {1.0, -x1, 0.0, x2 - x1, false};
  } else {
    double x1 = p1.v.real(), x2 = p2.v.real(), x3 = p3.v.real();
    m = {x2 - x3, -x1 * (x2 - x3), x2 - x1, -x3 * (x2 - x1), false};
  }
  if (std::abs(m.a * m.d - m.b * m.c) < kNormalizeTol)
    fail("real_moebius_three_points: coincident points");
  return m;
}

double boundary_angle(xcpx x) {
  if (x.inf) return kPi / 2.0;
  double v = x.v.real();
  if (std::abs(v) < 1.0 - 1e-9)
    fail("circle_model: boundary point maps into the base span");
  double inv = std::clamp(1.0 / v, -1.0, 1.0);
  return std::acos(inv);
}

FundamentalDomain circle_model(const RealBoundarySet& E, int base_gap) {
  validate_boundary_set(E);
  if (!E.contains_infinity)
    fail("circle_model: set must contain the point at infinity");

  FundamentalDomain fd;
  fd.E = E;
  fd.mu = moebius_identity();
  fd.mu_inv = moebius_identity();

  if (is_full_line(E)) {
    fd.F_arcs = {{-kPi, kPi}};
    return fd;
  }
  if (is_bounded(E))
    fail("circle_model: bounded set leaves infinity isolated (puncture unsupported)");

  const std::vector<Interval> G = gaps(E);
  int base = base_gap;
  if (base < 0) {
    double best_len = -1.0;
    for (std::size_t i = 0; i < G.size(); ++i) {
      if (G[i].lo == -kInf || G[i].hi == kInf) continue;
      if (G[i].hi - G[i].lo > best_len) {
        best_len = G[i].hi - G[i].lo;
        base = int(i);
      }
    }
    if (base < 0) base = 0;  // no bounded gap: only the unbounded one remains
  }
  if (base < 0 || base >= int(G.size()))
    fail("circle_model: base gap index out of range");
  fd.base_gap = base;

  const Interval bg = G[base];
  xcpx p1 = bg.lo == -kInf ? xcpx::infinity() : xcpx(bg.lo);
  xcpx p3 = bg.hi == kInf ? xcpx::infinity() : xcpx(bg.hi);
  double anchor = bg.lo == -kInf   ? bg.hi - 1.0
                  : bg.hi == kInf ? bg.lo + 1.0
                                  : 0.5 * (bg.lo + bg.hi);
  MoebiusMap A = real_moebius_three_points(p1, xcpx(anchor), p3);
  // adjugate of the map sending (-1, 0, 1) to (0, 1, inf)
  MoebiusMap Binv{-1.0, 1.0, -1.0, -1.0, false};
  fd.mu = rescale_pow2(real_compose(Binv, A));
  fd.mu_inv = adjugate(fd.mu);

  // upper half-circle arcs of the non-base gaps
  std::vector<CircleArc> upper;
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (int(i) == base) continue;
    xcpx u = G[i].lo == -kInf ? xcpx::infinity() : xcpx(G[i].lo);
    xcpx v = G[i].hi == kInf ? xcpx::infinity() : xcpx(G[i].hi);
    double tu = boundary_angle(moebius_apply(fd.mu, u));
    double tv = boundary_angle(moebius_apply(fd.mu, v));
    CircleArc a{std::min(tu, tv), std::max(tu, tv)};
    a.lo = std::max(a.lo, 0.0);
    a.hi = std::min(a.hi, kPi);
    if (a.hi - a.lo < 1e-15) fail("circle_model: degenerate gap arc");
    upper.push_back(a);
  }
  std::sort(upper.begin(), upper.end(),
            [](const CircleArc& x, const CircleArc& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < upper.size(); ++i)
    if (upper[i].lo < upper[i - 1].hi - 1e-12)
      fail("circle_model: overlapping gap arcs");

  if (upper.empty()) {
    fd.F_arcs = {{-kPi, kPi}};
    return fd;
  }

  const std::size_t m = upper.size();
  fd.gap_arcs = upper;
  for (std::size_t j = 0; j < m; ++j)
    fd.gap_arcs.push_back({-upper[j].hi, -upper[j].lo});
  fd.partner.resize(2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    fd.partner[j] = j + m;
    fd.partner[j + m] = j;
  }
  for (const CircleArc& a : fd.gap_arcs) {
    Geodesic g = geodesic_between(Model::Disk, xcpx(std::polar(1.0, a.lo)),
                                  xcpx(std::polar(1.0, a.hi)));
    if (side_value(g, cpx(0.0, 0.0)) < 1e-9)
      fail("circle_model: wall through the origin (degenerate configuration)");
    fd.geodesics.push_back(g);
  }

  // complement of the gap arcs on the upper half-circle
  std::vector<CircleArc> fupper;
  std::vector<double> tangency;
  double prev = 0.0;
  for (const CircleArc& a : upper) {
    if (a.lo - prev > 1e-12)
      fupper.push_back({prev, a.lo});
    else
      tangency.push_back(a.lo);
    prev = a.hi;
  }
  if (kPi - prev > 1e-12)
    fupper.push_back({prev, kPi});
  else
    tangency.push_back(kPi);

  for (std::size_t i = 0; i < fupper.size(); ++i) {
    const CircleArc& a = fupper[i];
    bool at_one = i == 0 && a.lo == 0.0;
    bool at_minus_one = i + 1 == fupper.size() && a.hi == kPi;
    if (at_one)
      fd.F_arcs.push_back({-a.hi, a.hi});  // merged across z = 1
    else if (at_minus_one)
      fd.F_arcs.push_back({a.lo, 2.0 * kPi - a.lo});  // merged across z = -1
    else {
      fd.F_arcs.push_back(a);
      fd.F_arcs.push_back({-a.hi, -a.lo});
    }
  }
  for (const CircleArc& a : fd.F_arcs) {
    fd.vertices.push_back(std::polar(1.0, a.lo));
    fd.vertices.push_back(std::polar(1.0, a.hi));
  }
  for (double t : tangency) {
    fd.infinite_vertices.push_back(std::polar(1.0, t));
    if (t > 1e-12 && t < kPi - 1e-12)
      fd.infinite_vertices.push_back(std::polar(1.0, -t));
  }

  double covered = 0.0;
  for (const CircleArc& a : fd.F_arcs) covered += arc_length(a);
  for (const CircleArc& a : fd.gap_arcs) covered += arc_length(a);
  if (std::abs(covered - 2.0 * kPi) > 1e-9)
    fail("circle_model: arcs do not tile the circle");
  return fd;
}

bool in_fundamental_domain(const FundamentalDomain& fd, cpx z, double tol) {
  if (std::abs(z) > 1.0 + tol) return false;
  for (const Geodesic& g : fd.geodesics)
    if (side_value(g, z) < -tol) return false;
  return true;
}

bool fundamental_domain_convex(const FundamentalDomain& fd,
                               int samples_per_wall) {
  std::vector<cpx> probes;
  for (const Geodesic& g : fd.geodesics) {
    std::vector<cpx> s = geodesic_sample(g, samples_per_wall);
    probes.insert(probes.end(), s.begin(), s.end());
    probes.push_back(g.p.v);
    probes.push_back(g.q.v);
  }
  for (const CircleArc& a : fd.F_arcs)
    for (int k = 0; k <= samples_per_wall; ++k)
      probes.push_back(arc_point(a, double(k) / samples_per_wall));
  for (std::size_t j = 0; j < fd.geodesics.size(); ++j) {
    const Geodesic& g = fd.geodesics[j];
    if (side_value(g, cpx(0.0, 0.0)) <= 0.0) return false;
    for (const cpx& z : probes)
      if (side_value(g, z) < -1e-9) {
        // own endpoints sit on the wall; anything else must stay inside
        if (approx(z, g.p.v, 1e-9) || approx(z, g.q.v, 1e-9)) continue;
        return false;
      }
  }
  return true;
}

namespace {

struct BoundaryPiece {
  bool wall = false;
  CircleArc span;  // circle angles it replaces (walls) or covers (arcs)
  Geodesic g;
  double len = 0.0;
};

double wall_length(const Geodesic& g) {
  if (g.straight) return std::abs(g.p.v - g.q.v);
  double chord = std::abs(g.p.v - g.q.v);
  double half = std::asin(std::clamp(chord / (2.0 * g.radius), 0.0, 1.0));
  return 2.0 * g.radius * half;
}

cpx wall_point(const Geodesic& g, double t) {
  if (g.straight) return g.p.v + t * (g.q.v - g.p.v);
  double fa = std::arg(g.p.v - g.center);
  double fb = std::arg(g.q.v - g.center);
  double d = fb - fa;
  while (d > kPi) d -= 2.0 * kPi;
  while (d < -kPi) d += 2.0 * kPi;
  return g.center + std::polar(g.radius, fa + t * d);
}

}  // namespace

double chord_arc_constant(const FundamentalDomain& fd, int resolution,
                          double rotate_by) {
  if (resolution < 8) fail("chord_arc_constant: resolution too small");
  if (fd.F_arcs.empty() && fd.gap_arcs.empty())
    fail("chord_arc_constant: degenerate boundary");

  std::vector<BoundaryPiece> pieces;
  if (fd.gap_arcs.empty()) {
    BoundaryPiece p;
    p.span = fd.F_arcs.front();
    p.len = arc_length(p.span);
    pieces.push_back(p);
  } else {
    std::vector<std::size_t> order(fd.gap_arcs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return fd.gap_arcs[x].lo < fd.gap_arcs[y].lo;
    });
    double prev = -kPi;
    for (std::size_t idx : order) {
      const CircleArc& a = fd.gap_arcs[idx];
      if (a.lo - prev > 1e-12) {
        BoundaryPiece f;
        f.span = {prev, a.lo};
        f.len = arc_length(f.span);
        pieces.push_back(f);
      }
      BoundaryPiece w;
      w.wall = true;
      w.span = a;
      w.g = fd.geodesics[idx];
      w.len = wall_length(w.g);
      pieces.push_back(w);
      prev = a.hi;
    }
    if (kPi - prev > 1e-12) {
      BoundaryPiece f;
      f.span = {prev, kPi};
      f.len = arc_length(f.span);
      pieces.push_back(f);
    }
  }

  double total = 0.0;
  for (const BoundaryPiece& p : pieces) total += p.len;
  if (total <= 0.0) fail("chord_arc_constant: zero-length boundary");

  const cpx rot = std::polar(1.0, rotate_by);
  std::vector<double> s_along;
  std::vector<cpx> pts;
  auto emit = [&](const BoundaryPiece& p, double s0, double t) {
    cpx z = p.wall ? wall_point(p.g, t)
                   : arc_point(p.span, t);
    s_along.push_back(s0 + t * p.len);
    pts.push_back(z * rot);
  };
  double s0 = 0.0;
  for (const BoundaryPiece& p : pieces) {
    int n = std::max(2, int(std::lround(resolution * p.len / total)));
    for (int k = 0; k <= n; ++k) emit(p, s0, double(k) / n);
    s0 += p.len;
  }
  // a fixed-seed batch of unstructured positions on top of the stratified grid
  Rng rng(0x9e3779b97f4a7c15ull);
  for (int k = 0; k < resolution / 4; ++k) {
    double s = rng.u01() * total;
    double acc = 0.0;
    for (const BoundaryPiece& p : pieces) {
      if (s <= acc + p.len || &p == &pieces.back()) {
        emit(p, acc, std::clamp((s - acc) / p.len, 0.0, 1.0));
        break;
      }
      acc += p.len;
    }
  }

  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double chord = std::abs(pts[i] - pts[j]);
      if (chord < 1e-12) continue;
      double s = std::abs(s_along[i] - s_along[j]);
      double arc = std::min(s, total - s);
      best = std::max(best, arc / chord);
    }
  }
  return best;
}

double trace_of_gap_pair(double r_j, double r_k, double eps) {
  if (!(r_j > 0.0) || !(r_k > 0.0) || !(eps > 0.0))
    fail("trace_of_gap_pair: lengths and separation must be positive");
  if (r_k < r_j) std::swap(r_j, r_k);  // bitwise symmetry in the gap lengths
  double p = r_j / 2.0, q = r_k / 2.0;
  double d = eps + p + q;
  return (d * d - p * p - q * q) / (p * q);
}

}  // namespace denjoy
