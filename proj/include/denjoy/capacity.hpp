#pragma once

#include "denjoy/boundary_set.hpp"

#include <vector>

namespace denjoy {

// n points on a compact union of real segments together with the
// geometric mean of their pairwise distances,
//   energy = (prod_{j<k} |x_j - x_k|)^(2/(n(n-1))).
struct PointConfiguration {
    std::vector<double> points;
    double energy = 0.0;
};

// Best configuration found by multi-start coordinate-exchange ascent.
// parts: sorted, disjoint, bounded closed intervals (degenerate allowed).
// Restart r is seeded deterministically from its index; the two extreme
// points of the set are always part of the initial configuration since
// any optimum occupies them.
PointConfiguration fekete_points(const std::vector<Interval>& parts, int n,
                                 int restarts = 4);

double transfinite_diameter(const std::vector<Interval>& parts, int n,
                            int restarts = 4);
// convenience overload, requires a bounded set
double transfinite_diameter(const RealBoundarySet& E, int n,
                            int restarts = 4);

struct CapacityEstimate {
    double raw = 0.0;           // d_{n_max} as found
    double extrapolated = 0.0;  // limit of the fitted model cap + a log n / n
    std::vector<int> n_values;  // 2 .. n_max
    std::vector<double> d_values;
};

// d_n table for n = 2..n_max plus a tail fit of d_n = cap + a log n / n.
// Both the raw end value and the extrapolation are returned so callers
// never depend on the fit form alone.
CapacityEstimate capacity_estimate(const std::vector<Interval>& parts,
                                   int n_max, int restarts = 2);
CapacityEstimate capacity_estimate(const RealBoundarySet& E, int n_max,
                                   int restarts = 2);

// closed window [lo, hi] cut out of E; degenerate pieces are kept
std::vector<Interval> clip_to_window(const RealBoundarySet& E, double lo,
                                     double hi);

// inf over sampled z in E and dyadic radii t of cap([z-t,z+t] cap E) / t.
// A set with a point component returns 0 outright: the window around it
// at small scales is a single point of zero capacity.
double uniform_perfectness_constant(const RealBoundarySet& E, int resolution);

}  // namespace denjoy
