#pragma once

#include <vector>

#include "denjoy/moebius.hpp"

namespace denjoy {

enum class Model { Disk, HalfPlane };

// Geodesic with ideal endpoints p, q. Circular carriers store center/radius;
// straight carriers (disk diameters, half-plane vertical lines) are flagged.
// Disk invariant: |center|^2 = 1 + radius^2 (carrier orthogonal to the unit
// circle).
struct Geodesic {
  Model model = Model::Disk;
  bool straight = false;
  xcpx p, q;
  cpx center{0.0};   // circular carrier
  double radius = 0.0;
  cpx dir{1.0};      // straight disk carrier: diameter along dir (unimodular);
                     // straight half-plane carrier: vertical line Re z = center.real()
};

Geodesic geodesic_between(Model model, xcpx p, xcpx q);

MoebiusMap reflection(const Geodesic& g);  // antiholomorphic involution fixing g
cpx reflect(const Geodesic& g, cpx z);
xcpx reflect(const Geodesic& g, xcpx z);

double hyperbolic_distance(Model model, cpx z, cpx w);
double hyperbolic_distance(cpx z, cpx w);  // disk model

// Continuous side classifier vanishing exactly on the geodesic; the two sides
// have opposite signs.
double side_value(const Geodesic& g, cpx z);

struct HalfPlaneRegion {
  Geodesic g;
  cpx witness;
  bool contains(cpx z, double tol = kCompareTol) const;
};
HalfPlaneRegion half_plane_region(const Geodesic& g, cpx witness);

// k sample points strictly inside the model domain, spread along the geodesic.
std::vector<cpx> geodesic_sample(const Geodesic& g, int k);

Geodesic perpendicular_bisector(cpx z, const MoebiusMap& g);  // disk model

// Fixed Cayley transport z -> i(1+z)/(1-z) and its inverse.
xcpx cayley_point(xcpx z, bool disk_to_half);
Geodesic cayley_geodesic(const Geodesic& g);
MoebiusMap cayley_conjugate(const MoebiusMap& m, bool disk_to_half);

}  // namespace denjoy
