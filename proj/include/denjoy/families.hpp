#pragma once

#include "denjoy/boundary_set.hpp"

namespace denjoy {

// Named boundary sets used across the test corpus and the CLI family selector.

// (-inf, 0] ∪ [1, inf): one gap, cyclic reflection structure.
RealBoundarySet two_ray_set();

// (-inf, -2] ∪ [-1, 1] ∪ [2, inf): rank-1 example with base gap (1, 2).
RealBoundarySet cyclic_set();

// (-inf, -4] ∪ [-2, -1] ∪ [1, 2] ∪ [4, inf): homogeneous two-gap-pair set
// with base gap (-1, 1).
RealBoundarySet homogeneous_pair_set();

// Complement structure of the depth-d middle-third Cantor approximant of
// [0, 1] glued to the outer rays: 2^d - 1 bounded gaps. depth >= 1.
RealBoundarySet cantor_complement_set(int depth);

// Rays plus k unit teeth separated by gaps (i, i + eta), i = 1..k:
// fixed homogeneity while the gap count grows with k. 0 < eta < 1.
RealBoundarySet comb_set(int k, double eta);

// (-inf, -2] ∪ [-delta/2, delta/2] ∪ [2, inf): the middle island pinches as
// delta -> 0 and the homogeneity constant decays with it.
RealBoundarySet pinch_set(double delta);

}  // namespace denjoy
