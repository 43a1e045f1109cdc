#pragma once

#include <string>
#include <vector>

#include "denjoy/numeric.hpp"

namespace denjoy {

// Closed interval on the extended line; lo may be -infinity, hi +infinity.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Finite union of disjoint closed intervals of the real line, plus a flag for
// the point at infinity. Invariant after make_boundary_set / validation:
// sorted, pairwise positive gaps, any unbounded ray forces the infinity flag.
struct RealBoundarySet {
  std::vector<Interval> intervals;
  bool contains_infinity = true;
};

bool operator==(const Interval& a, const Interval& b);
bool operator==(const RealBoundarySet& a, const RealBoundarySet& b);

// Sorts, merges overlapping or touching intervals, validates.
RealBoundarySet make_boundary_set(std::vector<Interval> iv,
                                  bool contains_infinity = true);
void validate_boundary_set(const RealBoundarySet& E);

bool is_full_line(const RealBoundarySet& E);
bool is_bounded(const RealBoundarySet& E);
bool contains_point(const RealBoundarySet& E, double x);
double set_diameter(const RealBoundarySet& E);  // +infinity when unbounded
std::vector<double> finite_endpoints(const RealBoundarySet& E);

// Open complementary intervals of E within the line, in increasing order,
// including the unbounded ones when E does not reach +-infinity.
std::vector<Interval> gaps(const RealBoundarySet& E);

// Lebesgue measure of (x-t, x+t) ∩ E.
double window_measure(const RealBoundarySet& E, double x, double t);

// a*E + b, a != 0 (a < 0 reverses interval order).
RealBoundarySet affine_image(const RealBoundarySet& E, double a, double b);

// Structured-text form: {"infinity":bool,"intervals":[[lo,hi],...]} with
// "-inf"/"inf" sentinels for unbounded endpoints. Round-trips bit-exactly.
std::string to_text(const RealBoundarySet& E);
RealBoundarySet boundary_set_from_text(const std::string& text);

// inf over x in E and 0 < t <= t_max of |(x-t,x+t) ∩ E| / (2t). Exact: the
// infimum is attained at critical radii |x - endpoint| (or t_max, or t -> 0)
// and at candidate centers built from endpoints, pair midpoints and
// endpoint+-t_max. 1 for the full line, 0 whenever E has an isolated point.
double carleson_homogeneity_constant(const RealBoundarySet& E, double t_max);

}  // namespace denjoy
