#include "denjoy/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

namespace denjoy {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// transport of the upper half disk onto the upper half plane fixing -1
// and 1; its rim trace is sec(theta), the same coordinate the circle
// model uses to mark the boundary set
cpx half_disk_transport(cpx z) {
    cpx den = 1.0 + z * z;
    if (den == 0.0) fail("seed_apply: transport pole at +-i");
    return 2.0 * z / den;
}

cpx half_disk_transport_d(cpx z) {
    cpx den = 1.0 + z * z;
    return 2.0 * (1.0 - z * z) / (den * den);
}

// points that fall barely inside a peel disk sit in the wobble band of
// the discretized boundary; project them onto the disk rim, which is the
// nearest point of the numerical domain, and treat deep violations as a
// genuine error
cpx clip_to_rim(cpx u) {
    double au = std::abs(u);
    if (au >= 1.0) return u;
    if (au < 0.9)
        fail("seed_apply: point falls deep inside a removed bump");
    return u / au;
}

cpx apply_step(const SeedStep& s, cpx w) {
    if (s.shifted) w = -1.0 / (w - s.pivot);
    cpx u = clip_to_rim((w - s.c) / s.rho);
    w = s.c + s.rho * (u + 1.0 / u);
    if (s.shifted) w = s.pivot - 1.0 / w;
    return w;
}

double apply_step(const SeedStep& s, double w) {
    if (s.shifted) w = -1.0 / (w - s.pivot);
    double u = (w - s.c) / s.rho;
    w = s.c + s.rho * (u + 1.0 / u);
    if (s.shifted) w = s.pivot - 1.0 / w;
    return w;
}

// value plus accumulated derivative factor
cpx apply_step_d(const SeedStep& s, cpx w, cpx& deriv) {
    if (s.shifted) {
        cpx d = w - s.pivot;
        deriv *= 1.0 / (d * d);
        w = -1.0 / d;
    }
    cpx u = clip_to_rim((w - s.c) / s.rho);
    deriv *= 1.0 - 1.0 / (u * u);
    w = s.c + s.rho * (u + 1.0 / u);
    if (s.shifted) {
        deriv *= 1.0 / (w * w);
        w = s.pivot - 1.0 / w;
    }
    return w;
}

double chordal(const xcpx& a, const xcpx& b) {
    if (a.inf && b.inf) return 0.0;
    double sb = std::sqrt(1.0 + (b.inf ? 0.0 : abs2(b.v)));
    if (a.inf) return 1.0 / sb;
    double sa = std::sqrt(1.0 + abs2(a.v));
    if (b.inf) return 1.0 / sa;
    return std::abs(a.v - b.v) / (sa * sb);
}

// nominal boundary target of a rim point: sec of its angle
xcpx sec_of(cpx rim) {
    if (std::abs(rim.real()) < 1e-15) return xcpx::infinity();
    return xcpx(1.0 / rim.real());
}

double wrap_positive(double a) {
    while (a <= 0.0) a += kTwoPi;
    while (a > kTwoPi) a -= kTwoPi;
    return a;
}

}  // namespace

SeedMap seed_riemann_map(const FundamentalDomain& fd, double eps_seed) {
    if (!(eps_seed >= 1e-12 && eps_seed <= 0.1))
        fail("seed_riemann_map: eps_seed must lie in [1e-12, 0.1]");
    std::size_t m = fd.gap_arcs.size() / 2;

    SeedMap seed;
    seed.eps_seed = eps_seed;
    seed.post = moebius_identity();

    // tracked boundary vertices: value starts at the nominal sec target
    // and drifts through the peels, the drift is the correspondence error
    struct Entry {
        int piece, index;
        cpx source;
        double value;
        xcpx target;
    };
    std::vector<Entry> entries;
    entries.push_back({0, 0, cpx(1.0, 0.0), 1.0, xcpx(1.0)});
    entries.push_back({0, 1, cpx(-1.0, 0.0), -1.0, xcpx(-1.0)});
    for (std::size_t a = 0; a < fd.F_arcs.size(); ++a) {
        for (int side = 0; side < 2; ++side) {
            double th = side == 0 ? fd.F_arcs[a].lo : fd.F_arcs[a].hi;
            double tw = wrap_positive(th);
            if (tw > kPi + 1e-9) continue;  // lower-half twin of an upper row
            cpx src = std::polar(1.0, th);
            xcpx tgt = sec_of(src);
            entries.push_back({1, (int)a, src, tgt.inf ? 0.0 : tgt.v.real(), tgt});
        }
    }

    // per upper wall: oriented feet (removed interval runs positively
    // from f0 to f1 on the extended line, an invariant of every peel)
    // and the images of the wall samples
    struct Bump {
        double f0, f1;
        std::vector<cpx> pts;
    };
    std::vector<Bump> bumps(m);
    for (std::size_t j = 0; j < m; ++j) {
        const CircleArc& arc = fd.gap_arcs[j];
        bumps[j].f0 = 1.0 / std::cos(arc.lo);
        bumps[j].f1 = 1.0 / std::cos(arc.hi);
        // sampling density bounds the boundary wobble of the peeled domain
        // and the peel count, which prices every later evaluation
        const int kWallSamples = 129;
        for (cpx s : geodesic_sample(fd.geodesics[j], kWallSamples))
            bumps[j].pts.push_back(half_disk_transport(s));
        cpx lo = std::polar(1.0, arc.lo), hi = std::polar(1.0, arc.hi);
        entries.push_back({2, (int)j, lo, bumps[j].f0, sec_of(lo)});
        entries.push_back({2, (int)j, hi, bumps[j].f1, sec_of(hi)});
    }

    cpx witness;
    {
        const cpx candidates[] = {cpx(0.0, 0.5), cpx(0.0, 0.3), cpx(0.0, 0.7),
                                  cpx(0.2, 0.4), cpx(-0.2, 0.4), cpx(0.0, 0.15)};
        bool found = false;
        for (cpx z : candidates) {
            if (in_fundamental_domain(fd, z, 0.0)) {
                witness = half_disk_transport(z);
                found = true;
                break;
            }
        }
        if (!found) fail("seed_riemann_map: no interior witness point found");
    }

    // kept-arc fraction t between the feet, walked the non-removed way
    auto kept_point = [](const Bump& b, double t) {
        double p1 = 2.0 * std::atan(b.f1), p0 = 2.0 * std::atan(b.f0);
        double span = p0 - p1;
        while (span <= 0.0) span += kTwoPi;
        return std::tan(0.5 * (p1 + t * span));
    };

    struct Chart {
        bool shifted = false;
        double pivot = 0.0;
        double lo = 0.0, hi = 0.0;  // feet in chart coordinates
        double dev = 0.0;           // max physical height over anchor span
        int top = -1;
        double top_re = 0.0;
    };
    // heights are judged against the running diameter image: a bump whose
    // feet images draw together keeps shrinking in absolute size too, and
    // its leftover spike is conformally negligible at that scale
    auto anchor_span = [&] {
        return std::abs(entries[0].value - entries[1].value);
    };
    auto inspect = [&](const Bump& b) {
        Chart ch;
        ch.shifted = b.f0 > b.f1;
        if (ch.shifted) {
            const double fr[] = {0.5, 1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75};
            bool ok = false;
            for (double t : fr) {
                double p = kept_point(b, t);
                double reach = 1e-7 * (1.0 + std::abs(p));
                bool clear = true;
                for (const Entry& e : entries)
                    if (std::abs(e.value - p) < reach) clear = false;
                for (const Bump& o : bumps) {
                    if (std::abs(o.f0 - p) < reach) clear = false;
                    if (std::abs(o.f1 - p) < reach) clear = false;
                }
                if (clear) {
                    ch.pivot = p;
                    ok = true;
                    break;
                }
            }
            if (!ok) fail("seed_riemann_map: no usable chart pivot");
            ch.lo = -1.0 / (b.f0 - ch.pivot);
            ch.hi = -1.0 / (b.f1 - ch.pivot);
        } else {
            ch.lo = b.f0;
            ch.hi = b.f1;
        }
        if (!(ch.lo < ch.hi)) fail("seed_riemann_map: degenerate bump interval");
        double best = 0.0;
        for (std::size_t i = 0; i < b.pts.size(); ++i) {
            if (b.pts[i].imag() > best) {
                best = b.pts[i].imag();
                ch.top = (int)i;
            }
        }
        if (ch.top >= 0) {
            cpx w = b.pts[(std::size_t)ch.top];
            if (ch.shifted) w = -1.0 / (w - ch.pivot);
            ch.top_re = w.real();
        }
        ch.dev = best / anchor_span();
        return ch;
    };

    auto push_step = [&](const SeedStep& s) {
        for (Bump& b : bumps) {
            b.f0 = apply_step(s, b.f0);
            b.f1 = apply_step(s, b.f1);
            for (cpx& w : b.pts) w = apply_step(s, w);
        }
        for (Entry& e : entries) e.value = apply_step(s, e.value);
        witness = apply_step(s, witness);
        seed.steps.push_back(s);
    };

    // greedy osculation: always flatten the worst bump
    const int kPeelCap = 40000;
    double residual = 0.0;
    while (m > 0) {
        residual = 0.0;
        Chart worst;
        std::size_t at = m;
        for (std::size_t j = 0; j < m; ++j) {
            Chart ch = inspect(bumps[j]);
            if (ch.dev > residual) {
                residual = ch.dev;
                worst = ch;
                at = j;
            }
        }
        if (residual <= eps_seed || at == m) break;
        if ((int)seed.steps.size() >= kPeelCap)
            fail(fmt("seed_riemann_map: osculation stalled after %.0f peels "
                     "at residual %.3g (target %.3g)",
                     (double)seed.steps.size(), residual, eps_seed));
        double width = worst.hi - worst.lo;
        double c = std::clamp(worst.top_re, worst.lo + 1e-6 * width,
                              worst.hi - 1e-6 * width);
        double rho = std::min(c - worst.lo, worst.hi - c);
        for (const Bump& o : bumps) {
            for (cpx w : o.pts) {
                if (worst.shifted) {
                    cpx d = w - worst.pivot;
                    if (std::abs(d) < 1e-300) continue;
                    w = -1.0 / d;
                }
                rho = std::min(rho, std::abs(w - cpx(c, 0.0)));
            }
        }
        if (rho <= 1e-13 * width) {
            if (std::getenv("DENJOY_SEED_DEBUG")) {
                std::fprintf(stderr,
                             "collapse: peel %zu c=%.17g width=%.3g rho=%.3g "
                             "dev=%.3g top=%d\n",
                             seed.steps.size(), c, width, rho, residual,
                             worst.top);
                const Bump& b = bumps[at];
                for (std::size_t i = 0; i < b.pts.size(); ++i) {
                    cpx w = b.pts[i];
                    if (worst.shifted) w = -1.0 / (w - worst.pivot);
                    if (std::abs(w - cpx(c, 0.0)) < 0.05 * width)
                        std::fprintf(stderr, "  pt[%zu] = (%.17g, %.3g)\n", i,
                                     w.real(), w.imag());
                }
            }
            fail(fmt("seed_riemann_map: peel radius collapsed at residual "
                     "%.3g (target %.3g)",
                     residual, eps_seed, 0.0));
        }
        SeedStep s;
        s.shifted = worst.shifted;
        s.pivot = worst.pivot;
        s.c = c;
        s.rho = rho;
        push_step(s);
    }
    seed.residual = residual;
    seed.rounds = (int)seed.steps.size();

    if (m > 0) {
        // renormalize: diameter endpoints back to -1 and 1, the most
        // moderate wall foot back onto its nominal target
        double t3 = 0.0, g3 = 0.0, best = 0.0;
        bool have = false;
        for (const Entry& e : entries) {
            if (e.piece != 2 || e.target.inf) continue;
            double mag = std::abs(e.target.v.real());
            if (!have || mag < best) {
                best = mag;
                t3 = e.target.v.real();
                g3 = e.value;
                have = true;
            }
        }
        if (!have) fail("seed_riemann_map: no finite wall target");
        double a_plus = 0.0, a_minus = 0.0;
        for (const Entry& e : entries) {
            if (e.piece != 0) continue;
            (e.index == 0 ? a_plus : a_minus) = e.value;
        }
        MoebiusMap r1 = real_moebius_three_points(xcpx(a_plus), xcpx(a_minus),
                                                  xcpx(g3));
        MoebiusMap r2 = real_moebius_three_points(xcpx(1.0), xcpx(-1.0),
                                                  xcpx(t3));
        seed.post = normalized(compose(inverse(r2), r1));
        cpx wpost = moebius_apply(seed.post, witness);
        if (!(wpost.imag() > 0.0))
            fail("seed_riemann_map: normalization flipped orientation");
    }

    for (const Entry& e : entries) {
        CorrespondenceRow row;
        row.piece = e.piece;
        row.index = e.index;
        row.source = e.source;
        row.image = moebius_apply(seed.post, xcpx(e.value));
        row.target = e.target;
        row.deviation = chordal(row.image, row.target);
        seed.table.push_back(row);
    }
    return seed;
}

cpx seed_apply(const SeedMap& seed, cpx z) {
    cpx w = half_disk_transport(z);
    for (const SeedStep& s : seed.steps) w = apply_step(s, w);
    return moebius_apply(seed.post, w);
}

cpx seed_derivative(const SeedMap& seed, cpx z) {
    cpx deriv = half_disk_transport_d(z);
    cpx w = half_disk_transport(z);
    for (const SeedStep& s : seed.steps) w = apply_step_d(s, w, deriv);
    cpx den = seed.post.c * w + seed.post.d;
    return deriv * det(seed.post) / (den * den);
}

CoveringMap joukowski_covering() {
    CoveringMap cm;
    cm.kind = CoveringKind::ExplicitJoukowski;
    // the covered domain keeps infinity, so there is no circle model;
    // the whole rim is retained boundary and the map needs no reduction
    cm.fd.E = make_boundary_set({{-1.0, 1.0}}, false);
    cm.fd.F_arcs = {{-kPi, kPi}};
    cm.reduction_cap = 0;
    return cm;
}

CoveringMap covering_from_domain(const FundamentalDomain& fd,
                                 const OrbitSummary& orbit, double eps_seed) {
    CoveringMap cm;
    cm.kind = CoveringKind::NumericalSeed;
    cm.fd = fd;
    cm.generators = generators_from_domain(fd);
    cm.group = orbit;
    cm.seed = seed_riemann_map(fd, eps_seed);
    std::size_t longest = 1;
    for (const GroupElement& e : orbit.elements)
        longest = std::max(longest, e.word.size());
    cm.reduction_cap = 4 * (int)longest;
    return cm;
}

namespace {

// greedy descent of d(0, .) over single generator moves
bool reduce_to_domain(const CoveringMap& cm, cpx& z) {
    for (int it = 0; it <= cm.reduction_cap; ++it) {
        if (in_fundamental_domain(cm.fd, z, 1e-9)) return true;
        double cur = abs2(z);
        cpx best = z;
        bool moved = false;
        for (const GroupElement& g : cm.generators) {
            cpx fwd = moebius_apply(g.map, z);
            if (abs2(fwd) < cur) {
                cur = abs2(fwd);
                best = fwd;
                moved = true;
            }
            cpx bwd = element_inverse_apply(g.map, z);
            if (abs2(bwd) < cur) {
                cur = abs2(bwd);
                best = bwd;
                moved = true;
            }
        }
        if (!moved) return in_fundamental_domain(cm.fd, z, 1e-9);
        z = best;
    }
    return in_fundamental_domain(cm.fd, z, 1e-9);
}

}  // namespace

xcpx evaluate_covering(const CoveringMap& cm, cpx z) {
    if (std::abs(z) > 1.0 + 1e-9)
        fail("evaluate_covering: point is outside the closed disk");
    if (cm.kind == CoveringKind::ExplicitJoukowski) {
        if (z == 0.0) return xcpx::infinity();
        return xcpx(0.5 * (z + 1.0 / z));
    }
    cpx w = z;
    if (!reduce_to_domain(cm, w))
        fail(fmt("evaluate_covering: point not reducible within the budget "
                 "cap (achieved 1 - |w| = %.3g)",
                 1.0 - std::abs(w)));
    cpx val = w.imag() >= 0.0 ? seed_apply(cm.seed, w)
                              : std::conj(seed_apply(cm.seed, std::conj(w)));
    return moebius_apply(cm.fd.mu_inv, xcpx(val));
}

namespace {

struct Jet3 {
    cpx a0, a1, a2, a3;
};

// trapezoid Fourier coefficients of f on the circle |w - z| = r; for f
// analytic in twice the radius the truncation decays like 2^-nodes
template <typename F>
Jet3 cauchy_coefficients(F&& f, cpx z, double r, int nodes) {
    Jet3 out{};
    for (int n = 0; n < nodes; ++n) {
        double th = kTwoPi * n / nodes;
        cpx e = std::polar(1.0, th);
        cpx v = f(z + r * e);
        cpx p = std::conj(e);
        out.a0 += v;
        out.a1 += v * p;
        p *= std::conj(e);
        out.a2 += v * p;
        p *= std::conj(e);
        out.a3 += v * p;
    }
    double inv = 1.0 / nodes;
    out.a0 *= inv;
    out.a1 *= inv / r;
    out.a2 *= inv / (r * r);
    out.a3 *= inv / (r * r * r);
    return out;
}

double jet_radius(const CoveringMap& cm, cpx z, const JetScheme& scheme) {
    if (!(scheme.radius_factor > 0.0 && scheme.radius_factor <= 0.75))
        fail("covering_jet: radius_factor must lie in (0, 0.75]");
    if (scheme.nodes < 8 || scheme.nodes > 4096)
        fail("covering_jet: nodes must lie in [8, 4096]");
    double az = std::abs(z);
    if (az >= 1.0) fail("covering_jet: point must be interior");
    double r = scheme.radius_factor * (1.0 - az);
    if (cm.kind == CoveringKind::ExplicitJoukowski) {
        // keep the pole at the origin strictly outside the circle
        r = std::min(r, scheme.radius_factor * az);
        if (r <= 0.0) fail("covering_jet: explicit map has a pole here");
    }
    if (r < 1e-14) fail("covering_jet: point too close to the rim");
    return r;
}

}  // namespace

CoveringJet covering_jet(const CoveringMap& cm, cpx z, const JetScheme& scheme) {
    double r = jet_radius(cm, z, scheme);
    Jet3 c = cauchy_coefficients(
        [&](cpx w) { return evaluate_covering(cm, w).v; }, z, r, scheme.nodes);
    CoveringJet jet;
    jet.f = c.a0;
    jet.f1 = c.a1;
    jet.f2 = 2.0 * c.a2;
    jet.f3 = 6.0 * c.a3;
    if (!(std::abs(jet.f1) > 0.0))
        fail("covering_jet: vanishing derivative sample");
    return jet;
}

AnalyticSampleGrid covering_sample_grid(const CoveringMap& cm, int level,
                                        const JetScheme& scheme) {
    if (level < 0 || level > 5)
        fail("covering_sample_grid: level must lie in [0, 5]");
    AnalyticSampleGrid grid;
    grid.level = level;
    // the core stays identical across levels; refinement only deepens and
    // densifies the octave bands toward the rim, so sup-type functionals
    // cannot chase interior singularities of the explicit kind
    const int kCoreRings = 8, kCoreAngles = 48;
    for (int i = 0; i < kCoreRings; ++i) {
        double r = (i + 0.5) / (2.0 * kCoreRings);
        for (int t = 0; t < kCoreAngles; ++t)
            grid.points.push_back(
                std::polar(r, kTwoPi * (t + 0.5) / kCoreAngles));
    }
    int angles = 48 * (level + 1);
    for (int k = 1; k <= 6 + 2 * level; ++k) {
        double r = 1.0 - 0.75 * std::pow(2.0, -k);
        for (int t = 0; t < angles; ++t)
            grid.points.push_back(std::polar(r, kTwoPi * (t + 0.5) / angles));
    }
    grid.jets.reserve(grid.points.size());
    JetScheme alt{scheme.radius_factor * (2.0 / 3.0), scheme.nodes + 16};
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        cpx z = grid.points[i];
        CoveringJet jet = covering_jet(cm, z, scheme);
        if (i % 10 == 0) {
            CoveringJet check = covering_jet(cm, z, alt);
            double s1 = std::max(std::abs(jet.f1), 1e-12);
            double s2 = std::max(std::abs(jet.f2), 1e-12);
            if (std::abs(check.f1 - jet.f1) > 1e-5 * s1 ||
                std::abs(check.f2 - jet.f2) > 1e-5 * s2)
                fail(fmt("covering_sample_grid: derivative cross-check failed "
                         "at (%.6g, %.6g)",
                         z.real(), z.imag()));
        }
        grid.jets.push_back(jet);
    }
    return grid;
}

SupFunctional bloch_norm([[maybe_unused]] const CoveringMap& cm,
                         const AnalyticSampleGrid& grid) {
    if (grid.points.size() != grid.jets.size() || grid.points.empty())
        fail("bloch_norm: grid has no jets");
    SupFunctional out;
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        cpx z = grid.points[i];
        const CoveringJet& j = grid.jets[i];
        double v = (1.0 - abs2(z)) * std::abs(j.f2 / j.f1);
        if (v > out.value) {
            out.value = v;
            out.argmax = z;
        }
    }
    return out;
}

cpx schwarzian(const std::function<cpx(cpx)>& f, cpx z,
               const JetScheme& scheme) {
    if (scheme.nodes < 8 || scheme.nodes > 4096)
        fail("schwarzian: nodes must lie in [8, 4096]");
    double az = std::abs(z);
    if (az >= 1.0) fail("schwarzian: point must be interior to the disk");
    double r = scheme.radius_factor * (1.0 - az);
    Jet3 c = cauchy_coefficients(f, z, r, scheme.nodes);
    cpx f1 = c.a1, f2 = 2.0 * c.a2, f3 = 6.0 * c.a3;
    if (!(std::abs(f1) > 0.0)) fail("schwarzian: vanishing derivative");
    cpx q = f2 / f1;
    return f3 / f1 - 1.5 * q * q;
}

cpx schwarzian(const CoveringMap& cm, cpx z, const JetScheme& scheme) {
    CoveringJet j = covering_jet(cm, z, scheme);
    cpx q = j.f2 / j.f1;
    return j.f3 / j.f1 - 1.5 * q * q;
}

namespace {

struct PtKey {
    double x, y;
    bool operator==(const PtKey&) const = default;
};

struct PtHash {
    std::size_t operator()(const PtKey& k) const {
        std::uint64_t a, b;
        std::memcpy(&a, &k.x, 8);
        std::memcpy(&b, &k.y, 8);
        a *= 0x9e3779b97f4a7c15ull;
        a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
        return (std::size_t)a;
    }
};

}  // namespace

BmoaReport bmoa_functionals(const CoveringMap& cm, const MeasureSampling& s,
                            const JetScheme& scheme,
                            const MoebiusMap* precompose) {
    if (precompose && precompose->anti)
        fail("bmoa_functionals: precomposition must be holomorphic");
    struct Node {
        cpx b1, sf;
        bool ok = true;
    };
    std::unordered_map<PtKey, Node, PtHash> memo;
    memo.reserve(1 << 17);
    long long total = 0, missed = 0;
    auto node_at = [&](cpx z) -> Node {
        PtKey key{z.real(), z.imag()};
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        cpx w = z, tp(1.0), extra(0.0);
        if (precompose) {
            w = moebius_apply(*precompose, z);
            cpx den = precompose->c * z + precompose->d;
            tp = det(*precompose) / (den * den);
            extra = -2.0 * precompose->c / den;
        }
        Node n;
        ++total;
        try {
            CoveringJet j = covering_jet(cm, w, scheme);
            cpx q = j.f2 / j.f1;
            n.b1 = tp * q + extra;
            n.sf = (j.f3 / j.f1 - 1.5 * q * q) * tp * tp;
        } catch (const std::runtime_error& e) {
            if (std::string(e.what()).find("not reducible") == std::string::npos)
                throw;
            n.ok = false;
            ++missed;
        }
        memo.emplace(key, n);
        return n;
    };
    BmoaReport report;
    report.sampling = s;
    DensityMeasure garsia;
    garsia.density = [&](cpx z) {
        Node n = node_at(z);
        if (!n.ok) return 0.0;
        return abs2(n.b1) * (1.0 - abs2(z));
    };
    DensityMeasure schwarz;
    schwarz.density = [&](cpx z) {
        Node n = node_at(z);
        if (!n.ok) return 0.0;
        double c = 1.0 - abs2(z);
        return c * c * c * abs2(n.sf);
    };
    report.garsia_type_norm = carleson_norm(garsia, s);
    report.schwarzian_carleson_norm = carleson_norm(schwarz, s);
    report.unreachable_fraction =
        total > 0 ? (double)missed / (double)total : 0.0;
    if (report.unreachable_fraction > 0.10)
        fail(fmt("bmoa_functionals: %.1f%% of quadrature points are not "
                 "reducible within the budget",
                 100.0 * report.unreachable_fraction));
    return report;
}

double hayman_wu_length(const CoveringMap& cm, const LineDescriptor& line,
                        int resolution) {
    if (resolution < 16 || resolution > 4096)
        fail("hayman_wu_length: resolution must lie in [16, 4096]");
    const int n = resolution;
    const double guard = 1.0 - 1e-3;
    const cpx rot = std::polar(1.0, -line.angle);

    // level function for Im(rot (f - p0)) = 0; the explicit kind uses the
    // pole-free polynomial form sharing the same zero set
    auto level = [&](cpx z) {
        if (cm.kind == CoveringKind::ExplicitJoukowski)
            return std::imag(rot * (0.5 * (z * z + 1.0) - line.point * z) *
                             std::conj(z));
        return std::imag(rot * (evaluate_covering(cm, z).v - line.point));
    };

    const int side = n + 1;
    std::vector<double> sval((std::size_t)side * side, 0.0);
    std::vector<char> valid((std::size_t)side * side, 0);
    auto corner = [&](int i, int j) {
        return cpx(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n);
    };
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
            cpx z = corner(i, j);
            if (std::abs(z) > guard) continue;
            std::size_t at = (std::size_t)j * side + i;
            try {
                sval[at] = level(z);
                valid[at] = 1;
            } catch (const std::runtime_error&) {
                valid[at] = 0;
            }
        }
    }

    auto crossing = [&](cpx za, double sa, cpx zb, double) {
        bool ca = sa >= 0.0;
        for (int it = 0; it < 24; ++it) {
            cpx zm = 0.5 * (za + zb);
            double sm;
            try {
                sm = level(zm);
            } catch (const std::runtime_error&) {
                return zm;
            }
            if ((sm >= 0.0) == ca)
                za = zm;
            else
                zb = zm;
        }
        return 0.5 * (za + zb);
    };

    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            std::size_t a00 = (std::size_t)j * side + i;
            std::size_t a10 = a00 + 1;
            std::size_t a01 = a00 + side;
            std::size_t a11 = a01 + 1;
            if (!valid[a00] || !valid[a10] || !valid[a01] || !valid[a11])
                continue;
            bool c00 = sval[a00] >= 0.0, c10 = sval[a10] >= 0.0;
            bool c01 = sval[a01] >= 0.0, c11 = sval[a11] >= 0.0;
            // crossings collected in bottom, right, top, left order
            cpx pts[4];
            int count = 0;
            if (c00 != c10)
                pts[count++] = crossing(corner(i, j), sval[a00],
                                        corner(i + 1, j), sval[a10]);
            if (c10 != c11)
                pts[count++] = crossing(corner(i + 1, j), sval[a10],
                                        corner(i + 1, j + 1), sval[a11]);
            if (c01 != c11)
                pts[count++] = crossing(corner(i, j + 1), sval[a01],
                                        corner(i + 1, j + 1), sval[a11]);
            if (c00 != c01)
                pts[count++] = crossing(corner(i, j), sval[a00],
                                        corner(i, j + 1), sval[a01]);
            if (count == 2) {
                total += std::abs(pts[0] - pts[1]);
            } else if (count == 4) {
                double sc;
                try {
                    sc = level(0.5 * (corner(i, j) + corner(i + 1, j + 1)));
                } catch (const std::runtime_error&) {
                    sc = 0.0;
                }
                // order collected: bottom, right, top, left
                if ((sc >= 0.0) == c00) {
                    total += std::abs(pts[0] - pts[1]) +
                             std::abs(pts[2] - pts[3]);  // (b,r) and (t,l)
                } else {
                    total += std::abs(pts[0] - pts[3]) +
                             std::abs(pts[1] - pts[2]);  // (b,l) and (r,t)
                }
            }
        }
    }
    return total;
}

namespace {

struct FdCloud {
    std::vector<cpx> pts;
    std::vector<double> w;
};

FdCloud fd_cloud(const FundamentalDomain& fd, int rings, int core_ang,
                 int octaves, int na_base, int layers) {
    FdCloud c;
    auto ring = [&](double r_lo, double r_hi, int na) {
        double rc = 0.5 * (r_lo + r_hi);
        double cell = 0.5 * (r_hi * r_hi - r_lo * r_lo) * (kTwoPi / na);
        for (int t = 0; t < na; ++t) {
            cpx z = std::polar(rc, kTwoPi * (t + 0.5) / na);
            if (!in_fundamental_domain(fd, z, 0.0)) continue;
            c.pts.push_back(z);
            c.w.push_back(cell);
        }
    };
    for (int i = 0; i < rings; ++i)
        ring(0.5 * i / rings, 0.5 * (i + 1) / rings, core_ang);
    for (int k = 1; k <= octaves; ++k) {
        double e0 = 1.0 - std::pow(2.0, -k);
        double e1 = 1.0 - std::pow(2.0, -k - 1);
        int na = std::min(na_base << k, 4096);
        for (int l = 0; l < layers; ++l)
            ring(e0 + (e1 - e0) * l / layers, e0 + (e1 - e0) * (l + 1) / layers,
                 na);
    }
    return c;
}

double weighted_integral(const FdCloud& c, const MoebiusMap& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < c.pts.size(); ++i) {
        double one = 1.0 - abs2(c.pts[i]);
        sum += c.w[i] * one * one * one * element_derivative_modulus(g, c.pts[i]);
    }
    return sum;
}

}  // namespace

std::vector<ConjectureRow> conjecture_probe(const FundamentalDomain& fd,
                                            const OrbitSummary& orbit,
                                            int quadrature_level) {
    if (quadrature_level < 0 || quadrature_level > 3)
        fail("conjecture_probe: quadrature_level must lie in [0, 3]");
    if (orbit.elements.empty()) fail("conjecture_probe: empty orbit");
    int s = 1 << quadrature_level;
    FdCloud fine = fd_cloud(fd, 16 * s, 64 * s, 8 + quadrature_level, 24 * s, 2);
    FdCloud coarse = fd_cloud(fd, 8 * s, 32 * s, 8 + quadrature_level, 12 * s, 1);

    std::vector<cpx> base;
    for (const ArcPiece& piece : boundary_pieces(fd))
        for (cpx p : piece_sample(piece, 33)) base.push_back(p);

    std::vector<ConjectureRow> rows;
    std::vector<cpx> img(base.size());
    for (const GroupElement& e : orbit.elements) {
        ConjectureRow row;
        row.word = e.word;
        row.integral = weighted_integral(fine, e.map);
        double again = weighted_integral(coarse, e.map);
        row.converged =
            std::abs(row.integral - again) <= 0.01 * std::max(row.integral, 1e-300);
        for (std::size_t i = 0; i < base.size(); ++i)
            img[i] = moebius_apply(e.map, base[i]);
        double d2 = 0.0;
        for (std::size_t i = 0; i < img.size(); ++i)
            for (std::size_t k = i + 1; k < img.size(); ++k)
                d2 = std::max(d2, abs2(img[i] - img[k]));
        row.diameter = std::sqrt(d2);
        if (!(row.diameter > 0.0))
            fail("conjecture_probe: degenerate boundary image");
        row.ratio = row.integral / row.diameter;
        rows.push_back(row);
    }
    return rows;
}

std::string conjecture_csv(const std::vector<ConjectureRow>& rows) {
    std::string out = "word,integral,diameter,ratio,converged\n";
    char buf[256];
    for (const ConjectureRow& r : rows) {
        out += word_text(r.word);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%d\n", r.integral,
                      r.diameter, r.ratio, r.converged ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace denjoy
