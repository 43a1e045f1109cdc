#include "denjoy/measures.hpp"

#include "denjoy/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace denjoy {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// boundary-inclusive membership gets a whisker of slack so a radius that
// lands exactly on an atom distance (the r = 1 rung against a unit-circle
// atom) does not flicker with the rounding of |position - center|
constexpr double kBallSlack = 1e-12;

// deepest octave of the polar quadrature cloud; matches the fixed bottom
// rung 2^-13 of the radius ladder
constexpr int kCloudOctaves = 13;

double wrap_2pi(double t) {
    double w = std::fmod(t, kTwoPi);
    return w < 0.0 ? w + kTwoPi : w;
}

// geometric carrier of an ArcPiece: the segment p -> q, or the circle
// through p, m, q as a start angle plus counterclockwise sweep. All mass
// computations work off the carrier; the stored length is advisory.
struct Carrier {
    bool segment = false;
    cpx u;               // circle center
    double rho = 0.0;    // circle radius
    double start = 0.0;  // angle of one endpoint seen from u
    double sweep = 0.0;  // ccw sweep covering the piece
};

double cross(cpx a, cpx b) { return a.real() * b.imag() - a.imag() * b.real(); }

Carrier carrier_of(const ArcPiece& piece) {
    Carrier c;
    cpx p = piece.p, m = piece.m, q = piece.q;
    // relative degeneracy gate, same form as the image-length routine:
    // an absolute floor would flatten strongly bent micron-scale arcs
    double bend = cross(m - p, q - p);
    if (!piece.full_circle &&
        std::abs(bend) <= 1e-9 * std::abs(m - p) * std::abs(q - p)) {
        c.segment = true;
        return c;
    }
    if (bend == 0.0) fail("measure: arc piece points are degenerate");
    // circumcenter from the perpendicular bisectors in coordinates
    // relative to p, accurate for arcs only a few ulps wide
    cpx dm = m - p, dq = q - p;
    double aa = abs2(dm), bb = abs2(dq);
    c.u = p + cpx((aa * dq.imag() - bb * dm.imag()) / (2.0 * bend),
                  (bb * dm.real() - aa * dq.real()) / (2.0 * bend));
    c.rho = std::abs(p - c.u);
    if (piece.full_circle) {
        c.start = 0.0;
        c.sweep = kTwoPi;
        return c;
    }
    double a0 = std::arg(p - c.u);
    double sm = wrap_2pi(std::arg(m - c.u) - a0);
    double sq = wrap_2pi(std::arg(q - c.u) - a0);
    if (sm <= sq) {
        c.start = a0;
        c.sweep = sq;
    } else {
        // the piece runs the other way round; re-anchor at q so the
        // sweep is still counterclockwise
        c.start = std::arg(q - c.u);
        c.sweep = kTwoPi - sq;
    }
    return c;
}

double carrier_length(const ArcPiece& piece, const Carrier& c) {
    if (c.segment) return std::abs(piece.q - piece.p);
    return c.rho * c.sweep;
}

cpx carrier_point(const ArcPiece& piece, const Carrier& c, double t) {
    if (c.segment) return piece.p + t * (piece.q - piece.p);
    return c.u + std::polar(c.rho, c.start + t * c.sweep);
}

// length of {t in [0, sweep] : angle t + start lies within kappa of beta}
double arc_window_overlap(const Carrier& c, double beta, double kappa) {
    double t0 = wrap_2pi(beta - kappa - c.start);
    double w = 2.0 * kappa;
    auto ov = [&](double lo, double hi) {
        return std::max(0.0, std::min(hi, c.sweep) - std::max(lo, 0.0));
    };
    return ov(t0, t0 + w) + ov(t0 - kTwoPi, t0 + w - kTwoPi);
}

double piece_ball_length(const ArcPiece& piece, const Carrier& c, cpx center,
                         double r) {
    if (c.segment) {
        cpx dir = piece.q - piece.p;
        double aa = abs2(dir);
        if (aa == 0.0) return 0.0;
        cpx rel = piece.p - center;
        double b = 2.0 * (dir.real() * rel.real() + dir.imag() * rel.imag());
        double cc = abs2(rel) - r * r;
        double disc = b * b - 4.0 * aa * cc;
        if (disc <= 0.0) return 0.0;
        double s = std::sqrt(disc);
        double lo = std::max(0.0, (-b - s) / (2.0 * aa));
        double hi = std::min(1.0, (-b + s) / (2.0 * aa));
        return std::max(0.0, hi - lo) * std::sqrt(aa);
    }
    double dist = std::abs(center - c.u);
    if (dist <= 1e-15 * std::max(1.0, c.rho))
        return c.rho <= r ? c.rho * c.sweep : 0.0;
    double ck = (dist * dist + c.rho * c.rho - r * r) / (2.0 * c.rho * dist);
    if (ck >= 1.0) return 0.0;
    if (ck <= -1.0) return c.rho * c.sweep;
    double kappa = std::acos(ck);
    double beta = std::arg(center - c.u);
    return c.rho * arc_window_overlap(c, beta, kappa);
}

void check_sampling(const MeasureSampling& s) {
    if (s.boundary_net < 1 || s.radii < 1)
        fail("measure: sampling sizes must be positive");
}

double ladder_radius(int j, int radii) {
    return std::pow(2.0, 1.0 - 14.0 * j / radii);
}

void check_point(cpx z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        fail(std::string("measure: ") + what + " is not finite");
}

// fixed polar quadrature on the disk: a coarse core under |z| = 1/2 and
// two radial layers per dyadic depth octave, with the angular count
// doubling per octave until it saturates. Weights are exact polar cell
// areas times the supplied node factor.
struct Cloud {
    std::vector<double> xs, ys, area;
    std::vector<cpx> node;
    std::vector<std::size_t> octave_end;  // node range ends: core, then octaves
};

Cloud build_cloud() {
    Cloud c;
    auto ring = [&](double rlo, double rhi, int na) {
        double rc = 0.5 * (rlo + rhi);
        double dth = kTwoPi / na;
        double cell = 0.5 * (rhi * rhi - rlo * rlo) * dth;
        for (int l = 0; l < na; ++l) {
            cpx z = std::polar(rc, (l + 0.5) * dth);
            c.xs.push_back(z.real());
            c.ys.push_back(z.imag());
            c.area.push_back(cell);
            c.node.push_back(z);
        }
    };
    for (int i = 0; i < 16; ++i) ring(i / 32.0, (i + 1) / 32.0, 64);
    c.octave_end.push_back(c.node.size());
    for (int k = 1; k <= kCloudOctaves; ++k) {
        double e0 = 1.0 - std::pow(2.0, -k);
        double e2 = 1.0 - std::pow(2.0, -k - 1);
        double e1 = 0.5 * (e0 + e2);
        int na = std::min(24 << k, 6144);
        ring(e0, e1, na);
        ring(e1, e2, na);
        c.octave_end.push_back(c.node.size());
    }
    return c;
}

double cloud_ball(const Cloud& c, const std::vector<double>& w, cpx center,
                  double r, std::size_t lo = 0,
                  std::size_t hi = std::numeric_limits<std::size_t>::max()) {
    hi = std::min(hi, c.node.size());
    if (lo >= hi) return 0.0;
    return kernels::disk_mass_accumulate(c.xs.data() + lo, c.ys.data() + lo,
                                         w.data() + lo, hi - lo, center.real(),
                                         center.imag(), r * r);
}

}  // namespace

void validate_measure(const DiscreteMeasure& m) {
    for (const MeasureAtom& a : m.atoms) {
        check_point(a.position, "atom position");
        if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
            fail("measure: atom mass must be nonnegative and finite");
    }
    for (const MeasureArc& a : m.arc_pieces) {
        check_point(a.arc.p, "arc endpoint");
        check_point(a.arc.m, "arc midpoint");
        check_point(a.arc.q, "arc endpoint");
        if (!(a.density >= 0.0) || !std::isfinite(a.density))
            fail("measure: arc density must be nonnegative and finite");
        if (a.arc.full_circle) carrier_of(a.arc);  // rejects collinear points
    }
}

double total_mass(const DiscreteMeasure& m) {
    double s = 0.0;
    for (const MeasureAtom& a : m.atoms) s += a.mass;
    for (const MeasureArc& a : m.arc_pieces)
        s += a.density * carrier_length(a.arc, carrier_of(a.arc));
    return s;
}

DiscreteMeasure boundary_arclength_measure(const FundamentalDomain& fd) {
    DiscreteMeasure out;
    for (const ArcPiece& piece : boundary_pieces(fd))
        out.arc_pieces.push_back({piece, 1.0});
    return out;
}

double ball_mass(const DiscreteMeasure& m, cpx center, double r) {
    if (!(r > 0.0)) fail("ball_mass: radius must be positive");
    double rs = r + kBallSlack * (1.0 + r);
    double total = 0.0;
    for (const MeasureAtom& a : m.atoms)
        if (std::abs(a.position - center) <= rs) total += a.mass;
    for (const MeasureArc& a : m.arc_pieces) {
        Carrier c = carrier_of(a.arc);
        total += a.density * piece_ball_length(a.arc, c, center, rs);
    }
    return total;
}

double carleson_norm(const DiscreteMeasure& m, const MeasureSampling& s) {
    check_sampling(s);
    validate_measure(m);
    double best = 0.0;
    for (int k = 0; k < s.boundary_net; ++k) {
        cpx z = std::polar(1.0, kTwoPi * k / s.boundary_net);
        for (int j = 1; j <= s.radii; ++j) {
            double r = ladder_radius(j, s.radii);
            double v = ball_mass(m, z, r) / r;
            if (v > best) best = v;
        }
    }
    return best;
}

double carleson_norm(const DensityMeasure& m, const MeasureSampling& s) {
    check_sampling(s);
    if (!m.density) fail("carleson_norm: density is empty");
    if (!(m.support_radius > 0.0))
        fail("carleson_norm: support radius must be positive");
    Cloud cloud = build_cloud();
    std::vector<double> w(cloud.node.size(), 0.0);
    for (std::size_t i = 0; i < cloud.node.size(); ++i) {
        if (std::abs(cloud.node[i]) > m.support_radius) continue;
        double v = m.density(cloud.node[i]);
        if (!std::isfinite(v))
            fail("carleson_norm: density is not finite on the disk");
        if (v < 0.0) fail("carleson_norm: density must be nonnegative");
        w[i] = v * cloud.area[i];
    }

    double best = 0.0;
    cpx best_center;
    double best_radius = 0.0;
    for (int k = 0; k < s.boundary_net; ++k) {
        cpx z = std::polar(1.0, kTwoPi * k / s.boundary_net);
        for (int j = 1; j <= s.radii; ++j) {
            double r = ladder_radius(j, s.radii);
            double v = cloud_ball(cloud, w, z, r) / r;
            if (v > best) {
                best = v;
                best_center = z;
                best_radius = r;
            }
        }
    }
    if (best == 0.0) return 0.0;

    // integrability audit at the witnessing ball: split its mass by depth
    // octave of the cloud. An integrable density decays geometrically
    // toward the deepest slab; a flat or growing profile means the value
    // is only the truncation of a divergent supremum.
    std::vector<double> slab(kCloudOctaves + 1, 0.0);
    for (int k = 0; k <= kCloudOctaves; ++k) {
        std::size_t lo = k == 0 ? 0 : cloud.octave_end[k - 1];
        slab[k] = cloud_ball(cloud, w, best_center, best_radius, lo,
                             cloud.octave_end[k]);
    }
    double deep = slab[kCloudOctaves];
    double ref = 0.0;
    for (int k = kCloudOctaves - 4; k < kCloudOctaves; ++k)
        ref = std::max(ref, slab[k]);
    if (deep > 0.0 && deep >= 0.8 * ref) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "carleson_norm: truncated ball mass diverges toward the "
                      "rim at center (%.6g, %.6g), radius %.6g",
                      best_center.real(), best_center.imag(), best_radius);
        fail(buf);
    }
    return best;
}

namespace {

// support check for the pushforward: the point must pass the truncated
// Dirichlet test; rim points are pulled a hair inward first since the
// test needs |z| < 1
void check_in_domain(cpx z, const OrbitSummary& orbit) {
    double az = std::abs(z);
    if (az > 1.0 + 1e-9)
        fail("orbit_pushforward: measure is not supported in the closed disk");
    cpx probe = z;
    if (az >= 1.0 - 1e-9) probe = z * ((1.0 - 1e-8) / az);
    if (!dirichlet_membership(probe, orbit))
        fail("orbit_pushforward: measure is not supported in the fundamental "
             "domain");
}

}  // namespace

PushforwardResult orbit_pushforward(const DiscreteMeasure& nu,
                                    const OrbitSummary& orbit) {
    validate_measure(nu);
    if (orbit.elements.empty()) fail("orbit_pushforward: empty orbit");
    for (const MeasureAtom& a : nu.atoms) check_in_domain(a.position, orbit);
    for (const MeasureArc& a : nu.arc_pieces) {
        Carrier c = carrier_of(a.arc);
        for (double t : {0.25, 0.5, 0.75})
            check_in_domain(carrier_point(a.arc, c, t), orbit);
    }

    PushforwardResult out;
    out.budget = orbit.budget;
    std::size_t max_len = 0;
    for (const GroupElement& e : orbit.elements)
        max_len = std::max(max_len, e.word.size());
    std::vector<double> shell(max_len + 1, 0.0);

    for (const GroupElement& e : orbit.elements) {
        std::size_t level = e.word.size();
        for (const MeasureAtom& a : nu.atoms) {
            MeasureAtom img;
            img.position = moebius_apply(e.map, a.position);
            img.mass = a.mass * element_derivative_modulus(e.map, a.position);
            shell[level] += img.mass;
            out.measure.atoms.push_back(img);
        }
        for (const MeasureArc& a : nu.arc_pieces) {
            MeasureArc img;
            img.arc.p = moebius_apply(e.map, a.arc.p);
            img.arc.m = moebius_apply(e.map, a.arc.m);
            img.arc.q = moebius_apply(e.map, a.arc.q);
            img.arc.full_circle = a.arc.full_circle;
            img.arc.length = moebius_arc_length(e.map, a.arc);
            img.density = a.density;
            shell[level] += img.density * img.arc.length;
            out.measure.arc_pieces.push_back(img);
        }
    }

    // geometric tail from the last three shells, identity excluded
    if (max_len >= 3 && shell[max_len - 2] > 0.0 && shell[max_len] > 0.0) {
        double r = std::sqrt(shell[max_len] / shell[max_len - 2]);
        out.mass_tail = r < 1.0
                            ? shell[max_len] * r / (1.0 - r)
                            : std::numeric_limits<double>::infinity();
    }
    return out;
}

PropertyHReport property_h_probe(const FundamentalDomain& fd,
                                 const OrbitSummary& orbit,
                                 const DiscreteMeasure& nu,
                                 const MeasureSampling& s) {
    check_sampling(s);
    PushforwardResult pf = orbit_pushforward(nu, orbit);
    PropertyHReport rep;
    rep.budget = orbit.budget;
    rep.mass_tail = pf.mass_tail;
    rep.norm_tilde = carleson_norm(pf.measure, s);

    // test balls walk the domain boundary itself, spaced well under the
    // narrowest gap arc so every wall sees several centers
    double spacing = kTwoPi;
    for (const CircleArc& a : fd.gap_arcs)
        spacing = std::min(spacing, arc_length(a));
    spacing *= 0.25;
    for (const ArcPiece& piece : boundary_pieces(fd)) {
        Carrier c = carrier_of(piece);
        double len = carrier_length(piece, c);
        int n = std::max(8, (int)std::ceil(len / spacing));
        n = std::min(n, 4096);
        for (int t = 0; t < n; ++t) {
            cpx center = carrier_point(piece, c, (t + 0.5) / n);
            for (int j = 1; j <= s.radii; ++j) {
                double r = ladder_radius(j, s.radii);
                double v = ball_mass(nu, center, r) / r;
                if (v > rep.norm_on_F) rep.norm_on_F = v;
            }
        }
    }
    return rep;
}

BeltramiReport beltrami_carleson_check(const BeltramiDensity& mu,
                                       const FundamentalDomain& fd,
                                       const OrbitSummary& orbit,
                                       const MeasureSampling& s) {
    check_sampling(s);
    if (!mu.modulus_on_F) fail("beltrami_carleson_check: modulus is empty");
    std::vector<GroupElement> gens = generators_from_domain(fd);
    std::size_t pairs = gens.size();
    std::size_t cap = 0;
    for (const GroupElement& e : orbit.elements)
        cap = std::max(cap, e.word.size());

    auto modulus_at = [&](cpx z) {
        double v = mu.modulus_on_F(z);
        if (!std::isfinite(v) || v < 0.0 || v >= 1.0)
            fail("beltrami_carleson_check: modulus must lie in [0, 1)");
        return v;
    };

    Cloud cloud = build_cloud();
    std::vector<double> w_disk(cloud.node.size(), 0.0);
    std::vector<double> w_dom(cloud.node.size(), 0.0);
    BeltramiReport rep;
    rep.budget = orbit.budget;

    for (std::size_t i = 0; i < cloud.node.size(); ++i) {
        cpx z = cloud.node[i];
        double karea = cloud.area[i] / (1.0 - abs2(z));
        if (in_fundamental_domain(fd, z, 1e-9)) {
            double v = modulus_at(z);
            w_dom[i] = karea * v * v;
            w_disk[i] = w_dom[i];
            rep.covered_mass += karea;
            continue;
        }
        // pull the node back through the group: each step strips the
        // leading letter of the tile address, so the word-length cap
        // bounds the walk
        cpx zz = z;
        bool covered = false;
        for (std::size_t step = 0; step <= cap; ++step) {
            if (in_fundamental_domain(fd, zz, 1e-9)) {
                covered = true;
                break;
            }
            std::size_t hit = fd.geodesics.size();
            for (std::size_t k = 0; k < fd.geodesics.size(); ++k)
                if (side_value(fd.geodesics[k], zz) < -1e-12) {
                    hit = k;
                    break;
                }
            if (hit == fd.geodesics.size()) break;
            if (hit < pairs)
                zz = moebius_apply(gens[hit].map, zz);
            else
                zz = element_inverse_apply(gens[hit - pairs].map, zz);
        }
        if (covered) {
            double v = modulus_at(zz);
            w_disk[i] = karea * v * v;
            rep.covered_mass += karea;
        } else {
            rep.uncovered_mass += karea;
        }
    }

    double frac =
        rep.uncovered_mass / (rep.covered_mass + rep.uncovered_mass);
    if (frac > 0.10) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "beltrami_carleson_check: %.1f%% of the quadrature "
                      "weight is not reducible within the budget",
                      100.0 * frac);
        fail(buf);
    }

    for (int k = 0; k < s.boundary_net; ++k) {
        cpx z = std::polar(1.0, kTwoPi * k / s.boundary_net);
        for (int j = 1; j <= s.radii; ++j) {
            double r = ladder_radius(j, s.radii);
            double vd = cloud_ball(cloud, w_disk, z, r) / r;
            double vf = cloud_ball(cloud, w_dom, z, r) / r;
            if (vd > rep.norm_on_disk) rep.norm_on_disk = vd;
            if (vf > rep.norm_on_F) rep.norm_on_F = vf;
        }
    }
    return rep;
}

std::string measure_csv(const DiscreteMeasure& m) {
    std::string out = "kind,x1,y1,x2,y2,x3,y3,weight\n";
    char buf[256];
    for (const MeasureAtom& a : m.atoms) {
        std::snprintf(buf, sizeof buf, "atom,%.17g,%.17g,0,0,0,0,%.17g\n",
                      a.position.real(), a.position.imag(), a.mass);
        out += buf;
    }
    for (const MeasureArc& a : m.arc_pieces) {
        std::snprintf(buf, sizeof buf,
                      "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      a.arc.full_circle ? "circle" : "arc", a.arc.p.real(),
                      a.arc.p.imag(), a.arc.m.real(), a.arc.m.imag(),
                      a.arc.q.real(), a.arc.q.imag(), a.density);
        out += buf;
    }
    return out;
}

std::vector<cpx> piece_sample(const ArcPiece& piece, int k) {
    if (k < 2) fail("piece_sample: need at least two points");
    Carrier c = carrier_of(piece);
    std::vector<cpx> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t)
        pts.push_back(carrier_point(piece, c, t / (k - 1.0)));
    return pts;
}

}  // namespace denjoy
