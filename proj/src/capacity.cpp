#include "denjoy/capacity.hpp"

#include "denjoy/kernels.hpp"
#include "denjoy/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace denjoy {

namespace {

constexpr std::uint64_t kRestartSeedBase = 0x5eedf00dull;

void check_parts(const std::vector<Interval>& parts) {
    if (parts.empty()) fail("capacity: no feasible configuration, empty set");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Interval& v = parts[i];
        if (std::isnan(v.lo) || std::isnan(v.hi) || std::isinf(v.lo) ||
            std::isinf(v.hi) || !(v.lo <= v.hi))
            fail("capacity: parts must be bounded closed intervals");
        if (i > 0 && !(parts[i - 1].hi < v.lo))
            fail("capacity: parts must be sorted and disjoint");
    }
}

double positive_length(const std::vector<Interval>& parts) {
    double s = 0.0;
    for (const Interval& v : parts) s += v.hi - v.lo;
    return s;
}

// uniform in measure when the set has positive length, otherwise a
// uniformly chosen component point
double sample_point(const std::vector<Interval>& parts, double total,
                    Rng& rng) {
    if (total > 0.0) {
        double u = rng.uniform(0.0, total);
        for (const Interval& v : parts) {
            double len = v.hi - v.lo;
            if (u <= len) return std::min(v.hi, v.lo + u);
            u -= len;
        }
        return parts.back().hi;
    }
    std::size_t k = std::min(parts.size() - 1,
                             static_cast<std::size_t>(rng.u01() * parts.size()));
    return parts[k].lo;
}

// candidate grid for the 1-D scans: component endpoints always present,
// interior nodes allotted by length share
struct ScanGrid {
    std::vector<double> cand;
    std::vector<double> spacing;     // bracket half-width around each candidate
    std::vector<std::size_t> comp;   // owning component index
};

ScanGrid build_grid(const std::vector<Interval>& parts, int interior_total) {
    ScanGrid g;
    double total = positive_length(parts);
    for (std::size_t ci = 0; ci < parts.size(); ++ci) {
        const Interval& v = parts[ci];
        double len = v.hi - v.lo;
        int k = 0;
        if (len > 0.0 && total > 0.0)
            k = std::max(3, (int)std::lround(interior_total * len / total));
        double h = len > 0.0 ? len / (k + 1) : 0.0;
        g.cand.push_back(v.lo);
        g.spacing.push_back(h > 0.0 ? h : 1.0);
        g.comp.push_back(ci);
        for (int j = 1; j <= k; ++j) {
            g.cand.push_back(v.lo + j * h);
            g.spacing.push_back(h);
            g.comp.push_back(ci);
        }
        if (v.hi > v.lo) {
            g.cand.push_back(v.hi);
            g.spacing.push_back(h);
            g.comp.push_back(ci);
        }
    }
    return g;
}

// sum of log distances from x to every entry of others; -inf on collision
double log_gain(const std::vector<double>& others, double x) {
    double s = 0.0;
    for (double o : others) {
        double d = std::abs(x - o);
        if (d == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(d);
    }
    return s;
}

// golden-section maximum of log_gain on [a, b]; valid because the gain
// is strictly concave between consecutive configuration points
double refine_segment(const std::vector<double>& others, double a, double b) {
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = log_gain(others, x1);
    double f2 = log_gain(others, x2);
    for (int it = 0; it < 80 && b > a; ++it) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = log_gain(others, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = log_gain(others, x2);
        }
    }
    return 0.5 * (a + b);
}

// one coordinate move: dense scan over the grid by the product kernel,
// then a concave refinement inside the winning bracket
bool move_point(const std::vector<Interval>& parts, const ScanGrid& grid,
                std::vector<double>& pts, std::size_t i,
                std::vector<double>& others, std::vector<double>& zeros) {
    others.clear();
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != i) others.push_back(pts[j]);
    zeros.assign(others.size(), 0.0);

    std::size_t w = kernels::best_product_index(
        grid.cand.data(), grid.cand.size(), others.data(), zeros.data(),
        others.size());
    double xw = grid.cand[w];
    const Interval& comp = parts[grid.comp[w]];

    double bl = std::max(comp.lo, xw - grid.spacing[w]);
    double br = std::min(comp.hi, xw + grid.spacing[w]);
    // never bracket across another configuration point: concavity holds
    // only between consecutive points
    for (double o : others) {
        if (o > bl && o < xw) bl = o;
        if (o < br && o > xw) br = o;
    }

    double xr = br > bl ? refine_segment(others, bl, br) : xw;
    double g_cur = log_gain(others, pts[i]);
    double g_best = g_cur;
    double x_best = pts[i];
    for (double c : {xw, xr}) {
        double g = log_gain(others, c);
        if (g > g_best) {
            g_best = g;
            x_best = c;
        }
    }
    if (!(g_best > g_cur + 1e-14 * (1.0 + std::abs(g_cur)))) return false;
    pts[i] = x_best;
    return true;
}

double log_energy(const std::vector<double>& pts) {
    double s = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j)
        for (std::size_t k = j + 1; k < pts.size(); ++k) {
            double d = std::abs(pts[j] - pts[k]);
            if (d == 0.0) return -std::numeric_limits<double>::infinity();
            s += std::log(d);
        }
    return s;
}

}  // namespace

PointConfiguration fekete_points(const std::vector<Interval>& parts, int n,
                                 int restarts) {
    check_parts(parts);
    if (n < 2) fail("transfinite_diameter: n must be at least 2");
    if (restarts < 1) restarts = 1;

    double total = positive_length(parts);
    ScanGrid grid = build_grid(parts, std::max(256, 24 * n));

    PointConfiguration best;
    double best_log = -std::numeric_limits<double>::infinity();
    bool have_best = false;

    std::vector<double> others, zeros;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(kRestartSeedBase + (std::uint64_t)r);
        std::vector<double> pts;
        // any optimal configuration occupies both extremes of the set:
        // sliding the outermost point outward increases every factor
        pts.push_back(parts.front().lo);
        if (n > 1) pts.push_back(parts.back().hi);
        while ((int)pts.size() < n) pts.push_back(sample_point(parts, total, rng));

        for (int sweep = 0; sweep < 60; ++sweep) {
            bool changed = false;
            for (std::size_t i = 0; i < pts.size(); ++i)
                changed = move_point(parts, grid, pts, i, others, zeros) || changed;
            if (!changed) break;
        }

        double lv = log_energy(pts);
        if (!have_best || lv > best_log) {
            have_best = true;
            best_log = lv;
            best.points = pts;
        }
    }

    if (n == 2) {
        // avoid the exp(log) round trip so d_2 equals the diameter exactly
        best.energy = std::abs(best.points[0] - best.points[1]);
    } else if (std::isinf(best_log)) {
        best.energy = 0.0;
    } else {
        best.energy = std::exp(2.0 * best_log / ((double)n * (n - 1)));
    }
    return best;
}

double transfinite_diameter(const std::vector<Interval>& parts, int n,
                            int restarts) {
    return fekete_points(parts, n, restarts).energy;
}

double transfinite_diameter(const RealBoundarySet& E, int n, int restarts) {
    if (!is_bounded(E)) fail("transfinite_diameter: set must be bounded");
    return transfinite_diameter(E.intervals, n, restarts);
}

CapacityEstimate capacity_estimate(const std::vector<Interval>& parts,
                                   int n_max, int restarts) {
    if (n_max < 6) fail("capacity_estimate: n_max must be at least 6");
    CapacityEstimate ce;
    for (int n = 2; n <= n_max; ++n) {
        ce.n_values.push_back(n);
        ce.d_values.push_back(transfinite_diameter(parts, n, restarts));
    }
    ce.raw = ce.d_values.back();

    // d_n of a segment behaves like cap * (kn)^(1/(n-1)), so log d_n is
    // affine in 1/(n-1) and log(n)/(n-1); a tail fit of that form
    // extrapolates to sub-percent accuracy already by n_max = 10,
    // whereas fitting d_n itself against log(n)/n biases low by ~20%
    if (ce.raw == 0.0) {
        // the configuration ran out of distinct points: finite set
        ce.extrapolated = 0.0;
        return ce;
    }
    int lo = std::max(4, n_max / 2);
    double A[3][4] = {};
    int used = 0;
    for (std::size_t k = 0; k < ce.n_values.size(); ++k) {
        int n = ce.n_values[k];
        double d = ce.d_values[k];
        if (n < lo || !(d > 0.0)) continue;
        double u[3] = {1.0, 1.0 / (n - 1), std::log((double)n) / (n - 1)};
        double y = std::log(d);
        for (int i = 0; i < 3; ++i) {
            A[i][3] += u[i] * y;
            for (int j = 0; j < 3; ++j) A[i][j] += u[i] * u[j];
        }
        ++used;
    }
    if (used < 3) {
        ce.extrapolated = ce.raw;
        return ce;
    }
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        for (int j = 0; j < 4; ++j) std::swap(A[c][j], A[p][j]);
        if (A[c][c] == 0.0) {
            ce.extrapolated = ce.raw;
            return ce;
        }
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            double f = A[r][c] / A[c][c];
            for (int j = 0; j < 4; ++j) A[r][j] -= f * A[c][j];
        }
    }
    ce.extrapolated = std::exp(A[0][3] / A[0][0]);
    return ce;
}

CapacityEstimate capacity_estimate(const RealBoundarySet& E, int n_max,
                                   int restarts) {
    if (!is_bounded(E)) fail("capacity_estimate: set must be bounded");
    return capacity_estimate(E.intervals, n_max, restarts);
}

std::vector<Interval> clip_to_window(const RealBoundarySet& E, double lo,
                                     double hi) {
    if (!(lo <= hi)) fail("clip_to_window: empty window");
    std::vector<Interval> out;
    for (const Interval& v : E.intervals) {
        double a = std::max(v.lo, lo);
        double b = std::min(v.hi, hi);
        if (a <= b) out.push_back({a, b});
    }
    return out;
}

double uniform_perfectness_constant(const RealBoundarySet& E, int resolution) {
    validate_boundary_set(E);
    if (resolution < 1) fail("uniform_perfectness: resolution must be positive");
    // a point component forces the constant to zero: a small enough
    // window around it meets E in that single point
    for (const Interval& v : E.intervals)
        if (v.lo == v.hi) return 0.0;
    if (is_full_line(E)) {
        // every window is a full interval of length 2t, capacity t/2
        return 0.5;
    }

    std::vector<double> ends = finite_endpoints(E);
    double span = ends.size() >= 2 ? ends.back() - ends.front() : 1.0;
    if (!(span > 0.0)) span = 1.0;

    // sample points of E: every finite endpoint plus equispaced interior
    // nodes, rays sampled over one span beyond their finite end
    std::vector<double> zs;
    int per = std::max(1, resolution / (int)E.intervals.size());
    for (const Interval& v : E.intervals) {
        double a = std::isinf(v.lo) ? v.hi - span : v.lo;
        double b = std::isinf(v.hi) ? v.lo + span : v.hi;
        for (int j = 0; j <= per; ++j)
            zs.push_back(a + (b - a) * j / per);
    }

    const int levels = 7;
    double best = std::numeric_limits<double>::infinity();
    for (double z : zs) {
        for (int m_lvl = 1; m_lvl <= levels; ++m_lvl) {
            double t = std::ldexp(span, -m_lvl);
            std::vector<Interval> window = clip_to_window(E, z - t, z + t);
            if (window.empty()) continue;
            CapacityEstimate ce = capacity_estimate(window, 10, 1);
            best = std::min(best, ce.extrapolated / t);
        }
    }
    return best;
}

}  // namespace denjoy
