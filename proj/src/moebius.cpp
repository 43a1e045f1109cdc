#include "denjoy/moebius.hpp"

#include <array>

namespace denjoy {

cpx det(const MoebiusMap& m) { return m.a * m.d - m.b * m.c; }

MoebiusMap normalized(const MoebiusMap& m) {
  cpx dt = det(m);
  double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (scale <= 0.0 || std::abs(dt) < kNormalizeTol * scale * scale)
    fail("moebius: singular matrix");
  cpx s = 1.0 / std::sqrt(dt);
  MoebiusMap r{m.a * s, m.b * s, m.c * s, m.d * s, m.anti};
  // canonical sign: first entry of nonnegligible modulus gets Re >= 0,
  // ties broken toward Im >= 0
  std::array<cpx, 4> e{r.a, r.b, r.c, r.d};
  double mx = std::max({std::abs(r.a), std::abs(r.b), std::abs(r.c), std::abs(r.d)});
  for (const cpx& x : e) {
    if (std::abs(x) <= 1e-12 * mx) continue;
    bool flip = x.real() < 0.0 ||
                (std::abs(x.real()) <= 1e-14 * std::abs(x) && x.imag() < 0.0);
    if (flip) {
      r.a = -r.a;
      r.b = -r.b;
      r.c = -r.c;
      r.d = -r.d;
    }
    break;
  }
  return r;
}

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
  // action composition: if m1 is antiholomorphic it sees conj(m2 matrix)
  cpx a2 = m2.a, b2 = m2.b, c2 = m2.c, d2 = m2.d;
  if (m1.anti) {
    a2 = std::conj(a2);
    b2 = std::conj(b2);
    c2 = std::conj(c2);
    d2 = std::conj(d2);
  }
  MoebiusMap r;
  r.a = m1.a * a2 + m1.b * c2;
  r.b = m1.a * b2 + m1.b * d2;
  r.c = m1.c * a2 + m1.d * c2;
  r.d = m1.c * b2 + m1.d * d2;
  r.anti = m1.anti != m2.anti;
  return normalized(r);
}

MoebiusMap inverse(const MoebiusMap& m) {
  MoebiusMap n = normalized(m);
  MoebiusMap r{n.d, -n.b, -n.c, n.a, n.anti};
  if (n.anti) {
    // w = M(conj z)  =>  z = conj(M^{ -1 }(w)): matrix entries conjugate
    r.a = std::conj(r.a);
    r.b = std::conj(r.b);
    r.c = std::conj(r.c);
    r.d = std::conj(r.d);
  }
  return normalized(r);
}

cpx moebius_apply(const MoebiusMap& m, cpx z) {
  cpx w = m.anti ? std::conj(z) : z;
  cpx den = m.c * w + m.d;
  if (den == 0.0) fail("moebius: pole hit by finite-point apply");
  return (m.a * w + m.b) / den;
}

xcpx moebius_apply(const MoebiusMap& m, xcpx z) {
  if (z.inf) {
    if (std::abs(m.c) == 0.0) return xcpx::infinity();
    return xcpx(m.a / m.c);
  }
  cpx w = m.anti ? std::conj(z.v) : z.v;
  cpx den = m.c * w + m.d;
  if (den == 0.0) return xcpx::infinity();
  return xcpx((m.a * w + m.b) / den);
}

double derivative_modulus(const MoebiusMap& m, cpx z) {
  cpx w = m.anti ? std::conj(z) : z;
  cpx den = m.c * w + m.d;
  double d2 = abs2(den);
  if (d2 < kNormalizeTol * kNormalizeTol) fail("moebius: derivative at pole");
  return std::abs(det(m)) / d2;
}

double normalized_trace(const MoebiusMap& m) {
  if (m.anti) fail("normalized_trace: antiholomorphic input");
  MoebiusMap n = normalized(m);
  return std::abs(n.a + n.d);
}

double projective_distance(const MoebiusMap& m1, const MoebiusMap& m2) {
  if (m1.anti != m2.anti) return 4.0;
  MoebiusMap p = normalized(m1), q = normalized(m2);
  double dm = std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c),
                        std::abs(p.d - q.d)});
  double dp = std::max({std::abs(p.a + q.a), std::abs(p.b + q.b), std::abs(p.c + q.c),
                        std::abs(p.d + q.d)});
  return std::min(dm, dp);
}

bool approx_equal(const MoebiusMap& m1, const MoebiusMap& m2, double tol) {
  return projective_distance(m1, m2) <= tol;
}

bool is_identity(const MoebiusMap& m, double tol) {
  return !m.anti && approx_equal(m, moebius_identity(), tol);
}

MoebiusMap moebius_identity() { return MoebiusMap{}; }

MoebiusMap rotation(double theta) {
  cpx h = std::polar(1.0, theta / 2.0);
  return MoebiusMap{h, 0.0, 0.0, std::conj(h), false};
}

MoebiusMap disk_automorphism(cpx a) {
  if (std::abs(a) >= 1.0) fail("disk_automorphism: |a| must be < 1");
  return normalized(MoebiusMap{1.0, a, std::conj(a), 1.0, false});
}

MoebiusMap conjugation() { return MoebiusMap{1.0, 0.0, 0.0, 1.0, true}; }

MoebiusMap cayley() {
  return normalized(MoebiusMap{cpx(0, 1), cpx(0, 1), cpx(-1, 0), cpx(1, 0), false});
}

MoebiusMap cayley_inverse() { return inverse(cayley()); }

}  // namespace denjoy
