#pragma once

#include <cstddef>
#include <vector>

#include "denjoy/boundary_set.hpp"
#include "denjoy/geodesic.hpp"

namespace denjoy {

// Arc {e^{i t} : lo <= t <= hi} of the unit circle, lo < hi.
struct CircleArc {
  double lo = 0.0;
  double hi = 0.0;
};

inline double arc_length(const CircleArc& a) { return a.hi - a.lo; }
inline cpx arc_point(const CircleArc& a, double t) {
  return std::polar(1.0, a.lo + t * (a.hi - a.lo));
}

// Circle model of a boundary set E: a real Moebius map mu sends the selected
// base gap to (-1, 1) and E to the complement of (-1, 1); pulling the result
// back through the boundary trace x = sec(theta) marks F on the unit circle.
// Every other gap of E turns into a conjugate pair of open arcs I_j carrying
// one wall geodesic L_j each; the fundamental domain is the part of the disk
// outside all wall caps. The whole configuration is invariant under z -> conj z.
struct FundamentalDomain {
  RealBoundarySet E;
  int base_gap = -1;  // index into gaps(E); -1 when E is the full line
  MoebiusMap mu;      // real entries; mu(base gap) = (-1, 1)
  MoebiusMap mu_inv;

  std::vector<CircleArc> F_arcs;    // closed arcs, conjugation-symmetric set
  std::vector<CircleArc> gap_arcs;  // upper arcs first, then their conjugates
  std::vector<Geodesic> geodesics;  // wall L_j over gap_arcs[j], same order
  std::vector<std::size_t> partner; // conjugate-arc involution on gap indices

  std::vector<cpx> vertices;           // endpoints of positive-length F-arcs
  std::vector<cpx> infinite_vertices;  // tangency points of adjacent walls
};

// base_gap = -1 picks the longest bounded gap (lowest index on ties), or the
// single unbounded gap if no bounded one exists.
FundamentalDomain circle_model(const RealBoundarySet& E, int base_gap = -1);

// z is in the closed fundamental domain: inside the closed disk and outside
// every open wall cap.
bool in_fundamental_domain(const FundamentalDomain& fd, cpx z,
                           double tol = kCompareTol);

// Convexity probe: every wall half-plane contains the samples of all other
// walls and of all F-arcs.
bool fundamental_domain_convex(const FundamentalDomain& fd,
                               int samples_per_wall);

// sup over sampled boundary pairs of min(subarc length) / chord. resolution
// sets the stratified sample count; rotate_by rigidly rotates the whole
// configuration before sampling (the value is invariant).
double chord_arc_constant(const FundamentalDomain& fd, int resolution,
                          double rotate_by = 0.0);

// |trace| of the composed inversions in the half-circles over two adjacent
// gap intervals of lengths r_j and r_k separated by eps, normalized to det 1:
// with radii p = r_j/2, q = r_k/2 and center distance d = eps + p + q this is
// (d^2 - p^2 - q^2) / (p q), scale-invariant and > 2 for eps > 0.
double trace_of_gap_pair(double r_j, double r_k, double eps);

// Real Moebius map sending three extended real points to (0, 1, inf).
MoebiusMap real_moebius_three_points(xcpx p1, xcpx p2, xcpx p3);

// theta(x) = acos(1/x) for |x| >= 1 (pi/2 at infinity): the boundary angle
// whose circle point traces x = sec(theta) over [1, +inf] U [-inf, -1].
double boundary_angle(xcpx x);

}  // namespace denjoy
