#include "denjoy/group.hpp"

#include "denjoy/geodesic.hpp"
#include "denjoy/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace denjoy {

namespace {

constexpr double kDedupTol = 1e-9;
constexpr double kDedupCell = 1e-6;
constexpr std::size_t kElementCap = 100000;
constexpr double kEntryCap = 1e100;

// Holomorphic disk automorphisms carry a det-1 matrix of the special
// form (a, b; conj(b), conj(a)) with |a|^2 - |b|^2 = 1. Composition
// preserves the form exactly, so deep words never need a renormalizing
// division by a cancellation-prone determinant. All element data comes
// out of (a, b) directly:
//   g(0) = b / conj(a),  1 - |g(0)| = 1 / (|a| (|a| + |b|)),
//   trace = 2 |Re a|,    g'(0) direction = (a / |a|)^2.
bool disk_form(const MoebiusMap& m) {
    double s = std::abs(m.a) + std::abs(m.b) + 1.0;
    return !m.anti && std::abs(m.d - std::conj(m.a)) <= 1e-9 * s &&
           std::abs(m.c - std::conj(m.b)) <= 1e-9 * s;
}

MoebiusMap disk_form_coerce(const MoebiusMap& m) {
    if (!disk_form(m)) fail("group: map is not a holomorphic disk automorphism");
    return {m.a, m.b, std::conj(m.b), std::conj(m.a), false};
}

MoebiusMap disk_compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    cpx a = m1.a * m2.a + m1.b * std::conj(m2.b);
    cpx b = m1.a * m2.b + m1.b * std::conj(m2.a);
    return {a, b, std::conj(b), std::conj(a), false};
}

MoebiusMap disk_inverse(const MoebiusMap& m) {
    return {std::conj(m.a), -m.b, -std::conj(m.b), m.a, false};
}

double origin_gap(const MoebiusMap& m) {
    double A = std::abs(m.a), B = std::abs(m.b);
    return 1.0 / (A * (A + B));
}

double disk_trace(const MoebiusMap& m) {
    return disk_form(m) ? 2.0 * std::abs(m.a.real()) : normalized_trace(m);
}

// entrywise distance of det-1 representatives, minimized over the sign
double disk_distance(const MoebiusMap& x, const MoebiusMap& y) {
    double dm = std::max(std::abs(x.a - y.a), std::abs(x.b - y.b));
    double dp = std::max(std::abs(x.a + y.a), std::abs(x.b + y.b));
    return std::min(dm, dp);
}

// complete bounded invariant of a disk automorphism, immune to the
// projective sign: where the origin goes and the direction it turns
struct CanonicalPoint {
    double g0_re, g0_im, u_re, u_im;
};

CanonicalPoint canonical_point(const MoebiusMap& m) {
    cpx g0 = m.b / m.d;
    cpx dsq = m.d * m.d;             // g'(0) = 1 / d^2 for det 1
    cpx u = std::conj(dsq) / std::abs(dsq);
    return {g0.real(), g0.imag(), u.real(), u.imag()};
}

struct CellKey {
    long long k[4];
    bool operator==(const CellKey& o) const {
        return k[0] == o.k[0] && k[1] == o.k[1] && k[2] == o.k[2] &&
               k[3] == o.k[3];
    }
};

struct CellHash {
    std::size_t operator()(const CellKey& c) const {
        std::size_t h = 1469598103934665603ull;
        for (long long v : c.k) {
            h ^= (std::size_t)v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

CellKey cell_of(const CanonicalPoint& p) {
    return {{(long long)std::llround(p.g0_re / kDedupCell),
             (long long)std::llround(p.g0_im / kDedupCell),
             (long long)std::llround(p.u_re / kDedupCell),
             (long long)std::llround(p.u_im / kDedupCell)}};
}

// dedup table: bucketed by quantized canonical point, verified by
// projective distance; tolerance misses across cell borders are caught
// by probing all neighboring cells
class DedupTable {
  public:
    // returns index of a duplicate, or npos after inserting as fresh
    static constexpr std::size_t npos = (std::size_t)-1;

    std::size_t find_or_insert(const MoebiusMap& m, std::size_t index,
                               const std::vector<GroupElement>& elems,
                               std::vector<std::string>* log,
                               const std::vector<int>& word) {
        CellKey base = cell_of(canonical_point(m));
        CellKey probe;
        for (int d0 = -1; d0 <= 1; ++d0)
            for (int d1 = -1; d1 <= 1; ++d1)
                for (int d2 = -1; d2 <= 1; ++d2)
                    for (int d3 = -1; d3 <= 1; ++d3) {
                        probe = {{base.k[0] + d0, base.k[1] + d1,
                                  base.k[2] + d2, base.k[3] + d3}};
                        auto it = buckets_.find(probe);
                        if (it == buckets_.end()) continue;
                        for (std::size_t j : it->second) {
                            double d = disk_distance(m, elems[j].map);
                            if (d < kDedupTol) return j;
                            // clustered canonical points are normal for deep
                            // words; only near-equal maps are suspicious
                            if (d < 1e-3 && log != nullptr) {
                                char buf[160];
                                std::snprintf(buf, sizeof buf,
                                              "near-collision %s vs %s at %.3e",
                                              word_text(word).c_str(),
                                              word_text(elems[j].word).c_str(),
                                              d);
                                log->push_back(buf);
                            }
                        }
                    }
        buckets_[base].push_back(index);
        return npos;
    }

  private:
    std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> buckets_;
};

double shell_sum(const std::vector<GroupElement>& elems, std::size_t lo,
                 std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += elems[i].origin_image_gap;
    return s;
}

double wrap_2pi(double x) {
    double y = std::fmod(x, 2.0 * kPi);
    return y < 0.0 ? y + 2.0 * kPi : y;
}

}  // namespace

std::string word_text(const std::vector<int>& word) {
    if (word.empty()) return "id";
    std::string s;
    for (int v : word) {
        s += v > 0 ? '+' : '-';
        s += std::to_string(std::abs(v));
    }
    return s;
}

std::vector<GroupElement> generators_from_domain(const FundamentalDomain& fd) {
    std::size_t pairs = fd.gap_arcs.size() / 2;
    std::vector<GroupElement> gens;
    for (std::size_t j = 0; j < pairs; ++j) {
        GroupElement e;
        e.map = disk_form_coerce(
            normalized(compose(conjugation(), reflection(fd.geodesics[j]))));
        e.word = {(int)j + 1};
        e.origin_image_gap = origin_gap(e.map);
        gens.push_back(e);
    }
    return gens;
}

OrbitSummary enumerate_group(const std::vector<GroupElement>& generators,
                             const EnumerationBudget& budget) {
    bool by_length = budget.max_word_length > 0;
    bool by_gap = budget.min_origin_gap > 0.0;
    if (by_length == by_gap)
        fail("enumerate_group: budget must set exactly one of max_word_length, "
             "min_origin_gap");
    if (by_gap && budget.min_origin_gap >= 1.0)
        fail("enumerate_group: min_origin_gap must lie in (0,1)");

    OrbitSummary out;
    out.budget = budget;

    std::vector<MoebiusMap> step;  // indexed by signed letter, offset by m
    int m = (int)generators.size();
    step.resize(2 * m + 1, moebius_identity());
    for (int j = 1; j <= m; ++j) {
        step[m + j] = disk_form_coerce(generators[j - 1].map);
        step[m - j] = disk_inverse(step[m + j]);
    }

    DedupTable table;
    GroupElement id;
    id.map = moebius_identity();
    id.origin_image_gap = 1.0;
    out.elements.push_back(id);
    table.find_or_insert(id.map, 0, out.elements, nullptr, {});

    std::vector<std::size_t> shell = {0};
    std::vector<double> shell_gap_sums;  // per word length, identity excluded
    for (int level = 1; m > 0; ++level) {
        if (by_length && level > budget.max_word_length) break;
        if (by_gap) {
            // expand while the previous shell still clears the floor
            double top = 0.0;
            for (std::size_t i : shell)
                top = std::max(top, out.elements[i].origin_image_gap);
            if (top < budget.min_origin_gap) break;
        }

        std::vector<std::size_t> next;
        std::size_t lo = out.elements.size();
        for (std::size_t i : shell) {
            // copy: out.elements may reallocate inside the loop
            GroupElement parent = out.elements[i];
            for (int s = -m; s <= m; ++s) {
                if (s == 0) continue;
                if (!parent.word.empty() && s == -parent.word.back()) continue;
                GroupElement child;
                child.map = disk_compose(parent.map, step[m + s]);
                if (std::abs(child.map.a) > kEntryCap)
                    fail("enumerate_group: budget reaches beyond double range");
                child.word = parent.word;
                child.word.push_back(s);
                child.origin_image_gap = origin_gap(child.map);
                std::size_t where = table.find_or_insert(
                    child.map, out.elements.size(), out.elements,
                    &out.collision_log, child.word);
                if (where != DedupTable::npos) continue;
                out.elements.push_back(child);
                if (out.elements.size() > kElementCap)
                    fail("enumerate_group: element cap exceeded before the "
                         "budget was met (no convergence)");
            }
        }
        for (std::size_t i = lo; i < out.elements.size(); ++i) next.push_back(i);
        if (next.empty()) break;
        shell_gap_sums.push_back(shell_sum(out.elements, lo, out.elements.size()));
        shell = std::move(next);
    }

    // geometric tail from the last three shells
    std::size_t ns = shell_gap_sums.size();
    if (ns >= 3 && shell_gap_sums[ns - 3] > 0.0 && shell_gap_sums[ns - 1] > 0.0) {
        double r = std::sqrt(shell_gap_sums[ns - 1] / shell_gap_sums[ns - 3]);
        out.tail_estimate = r < 1.0
                                ? shell_gap_sums[ns - 1] * r / (1.0 - r)
                                : std::numeric_limits<double>::infinity();
    }

    if (by_gap) {
        auto& v = out.elements;
        v.erase(std::remove_if(v.begin(), v.end(),
                               [&](const GroupElement& e) {
                                   return e.origin_image_gap <
                                          budget.min_origin_gap;
                               }),
                v.end());
    }

    std::sort(out.elements.begin(), out.elements.end(),
              [](const GroupElement& x, const GroupElement& y) {
                  if (x.origin_image_gap != y.origin_image_gap)
                      return x.origin_image_gap > y.origin_image_gap;
                  if (x.word.size() != y.word.size())
                      return x.word.size() < y.word.size();
                  return x.word < y.word;
              });
    return out;
}

ExponentReport convergence_exponent(const OrbitSummary& orbit,
                                    const std::vector<double>& alphas) {
    if (orbit.elements.empty()) fail("convergence_exponent: empty orbit");
    if (alphas.empty()) fail("convergence_exponent: no exponents given");
    for (double a : alphas)
        if (!(a > 0.0)) fail("convergence_exponent: exponents must be positive");

    ExponentReport rep;
    rep.alphas = alphas;
    for (double a : alphas) {
        double s = 0.0;
        for (const GroupElement& e : orbit.elements)
            s += std::pow(e.origin_image_gap, a);
        rep.partial_sums.push_back(s);
    }

    rep.estimated = orbit.elements.size() >= 50;
    if (!rep.estimated) return rep;

    std::size_t lmax = 0;
    for (const GroupElement& e : orbit.elements)
        lmax = std::max(lmax, e.word.size());
    auto shell_ratio = [&](double a) {
        std::vector<double> t(lmax + 1, 0.0);
        for (const GroupElement& e : orbit.elements)
            t[e.word.size()] += std::pow(e.origin_image_gap, a);
        // averaged ratio of the two deepest complete shell pairs
        double r = 0.0;
        int cnt = 0;
        for (std::size_t l = lmax; l >= 2 && cnt < 2; --l) {
            if (t[l] > 0.0 && t[l - 1] > 0.0) {
                r += t[l] / t[l - 1];
                ++cnt;
            }
        }
        return cnt > 0 ? r / cnt : 0.0;
    };

    std::vector<double> sorted = alphas;
    std::sort(sorted.begin(), sorted.end());
    rep.delta_low = 0.0;
    for (double a : sorted)
        if (shell_ratio(a) >= 1.0) rep.delta_low = std::max(rep.delta_low, a);
    rep.delta_high = std::numeric_limits<double>::infinity();
    for (double a : sorted)
        if (a > rep.delta_low && shell_ratio(a) < 1.0) {
            rep.delta_high = a;
            break;
        }
    return rep;
}

std::vector<ArcPiece> boundary_pieces(const FundamentalDomain& fd) {
    std::vector<ArcPiece> pieces;
    for (const CircleArc& arc : fd.F_arcs) {
        ArcPiece a;
        double span = arc.hi - arc.lo;
        if (span >= 2.0 * kPi - 1e-12) {
            a.full_circle = true;
            a.p = std::polar(1.0, arc.lo);
            a.m = std::polar(1.0, arc.lo + 2.0 * kPi / 3.0);
            a.q = std::polar(1.0, arc.lo + 4.0 * kPi / 3.0);
            a.length = 2.0 * kPi;
        } else {
            a.p = std::polar(1.0, arc.lo);
            a.m = std::polar(1.0, 0.5 * (arc.lo + arc.hi));
            a.q = std::polar(1.0, arc.hi);
            a.length = span;
        }
        pieces.push_back(a);
    }
    for (const Geodesic& g : fd.geodesics) {
        ArcPiece a;
        a.p = g.p.v;
        a.q = g.q.v;
        a.m = geodesic_sample(g, 1).front();
        if (g.straight) {
            a.length = std::abs(a.p - a.q);
        } else {
            double chord = std::abs(a.p - a.q);
            a.length = 2.0 * g.radius *
                       std::asin(std::min(1.0, chord / (2.0 * g.radius)));
        }
        pieces.push_back(a);
    }
    return pieces;
}

double moebius_arc_length(const MoebiusMap& g, const ArcPiece& piece) {
    cpx P = moebius_apply(g, piece.p);
    cpx M = moebius_apply(g, piece.m);
    cpx Q = moebius_apply(g, piece.q);

    // degeneracy gate must be relative to the point spread: deep words
    // produce micron-scale images that are still strongly bent, and any
    // absolute floor would flatten them into chords
    cpx dm = M - P, dq = Q - P;
    double bend = dm.real() * dq.imag() - dm.imag() * dq.real();
    if (!piece.full_circle &&
        std::abs(bend) <= 1e-9 * std::abs(dm) * std::abs(dq)) {
        // image degenerates to a segment; bounded images keep the
        // interior point between the endpoints
        return std::abs(Q - P);
    }
    if (bend == 0.0) fail("moebius_arc_length: degenerate image circle");
    // circumcenter from the perpendicular bisectors in coordinates
    // relative to P; stays accurate when the image is only a few ulps wide
    double aa = abs2(dm), bb = abs2(dq);
    cpx c = P + cpx((aa * dq.imag() - bb * dm.imag()) / (2.0 * bend),
                    (bb * dm.real() - aa * dq.real()) / (2.0 * bend));
    double rho = std::abs(P - c);
    if (piece.full_circle) return 2.0 * kPi * rho;
    double span = wrap_2pi(std::arg(Q - c) - std::arg(P - c));
    double mids = wrap_2pi(std::arg(M - c) - std::arg(P - c));
    return rho * (mids <= span ? span : 2.0 * kPi - span);
}

double boundary_image_length(const FundamentalDomain& fd, const MoebiusMap& g) {
    double s = 0.0;
    for (const ArcPiece& piece : boundary_pieces(fd))
        s += moebius_arc_length(g, piece);
    return s;
}

double boundary_orbit_length_sum(const FundamentalDomain& fd,
                                 OrbitSummary& orbit) {
    std::vector<ArcPiece> pieces = boundary_pieces(fd);
    double total = 0.0;
    for (GroupElement& e : orbit.elements) {
        if (e.boundary_image_length < 0.0) {
            double s = 0.0;
            for (const ArcPiece& piece : pieces)
                s += moebius_arc_length(e.map, piece);
            e.boundary_image_length = s;
        }
        total += e.boundary_image_length;
    }
    return total;
}

SfltResult sflt_functional(const FundamentalDomain& fd,
                           const OrbitSummary& orbit,
                           int automorphism_samples, std::uint64_t seed) {
    if (automorphism_samples < 1)
        fail("sflt_functional: need at least the identity sample");
    std::vector<ArcPiece> pieces = boundary_pieces(fd);
    auto value = [&](const MoebiusMap& t) {
        double s = 0.0;
        for (const GroupElement& e : orbit.elements) {
            // plain matrix product: deep words must not be renormalized
            MoebiusMap tg{t.a * e.map.a + t.b * e.map.c,
                          t.a * e.map.b + t.b * e.map.d,
                          t.c * e.map.a + t.d * e.map.c,
                          t.c * e.map.b + t.d * e.map.d, false};
            for (const ArcPiece& piece : pieces)
                s += moebius_arc_length(tg, piece);
        }
        return s;
    };

    SfltResult res;
    res.maximizer = moebius_identity();
    res.identity_value = value(res.maximizer);
    res.sup_value = res.identity_value;

    Rng rng(seed);
    for (int k = 1; k < automorphism_samples; ++k) {
        double theta = rng.uniform(0.0, 2.0 * kPi);
        double radius = (1.0 - 1e-3) * std::sqrt(rng.u01());
        double phase = rng.uniform(0.0, 2.0 * kPi);
        MoebiusMap t = compose(rotation(theta),
                               disk_automorphism(std::polar(radius, phase)));
        double v = value(t);
        if (v > res.sup_value) {
            res.sup_value = v;
            res.maximizer = t;
        }
    }
    return res;
}

double element_derivative_modulus(const MoebiusMap& m, cpx z) {
    if (!disk_form(m)) return derivative_modulus(m, z);
    return 1.0 / abs2(std::conj(m.b) * z + std::conj(m.a));
}

cpx element_inverse_apply(const MoebiusMap& m, cpx z) {
    if (!disk_form(m)) return moebius_apply(inverse(m), z);
    return moebius_apply(disk_inverse(disk_form_coerce(m)), z);
}

double min_trace(const OrbitSummary& orbit) {
    double best = std::numeric_limits<double>::infinity();
    for (const GroupElement& e : orbit.elements) {
        if (e.word.empty()) continue;
        best = std::min(best, disk_trace(e.map));
    }
    if (std::isinf(best)) fail("min_trace: orbit has no non-identity element");
    return best;
}

bool dirichlet_membership(cpx z, const OrbitSummary& orbit) {
    if (!(std::abs(z) < 1.0))
        fail("dirichlet_membership: point must be strictly inside the disk");
    double dz = hyperbolic_distance(cpx(0.0, 0.0), z);
    for (const GroupElement& e : orbit.elements) {
        if (e.word.empty()) continue;
        cpx gz = moebius_apply(e.map, z);
        // deep images of near-rim points can round onto the circle; they
        // are then certainly farther out than z
        if (!(std::abs(gz) < 1.0)) continue;
        if (dz > hyperbolic_distance(cpx(0.0, 0.0), gz) + 1e-9) return false;
    }
    return true;
}

std::string orbit_csv(const FundamentalDomain& fd, OrbitSummary& orbit) {
    boundary_orbit_length_sum(fd, orbit);  // fill the lazy lengths
    std::ostringstream os;
    os << "word,trace,origin_image_gap,boundary_image_length\n";
    char buf[96];
    for (const GroupElement& e : orbit.elements) {
        os << word_text(e.word);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g",
                      disk_trace(e.map), e.origin_image_gap,
                      e.boundary_image_length);
        os << buf << "\n";
    }
    return os.str();
}

}  // namespace denjoy
