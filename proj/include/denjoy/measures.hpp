#pragma once

#include "denjoy/circle_model.hpp"
#include "denjoy/group.hpp"

#include <functional>
#include <string>
#include <vector>

namespace denjoy {

struct MeasureAtom {
    cpx position;
    double mass = 0.0;
};

// constant linear density against arclength on a circular arc or a
// straight segment (collinear p, m, q)
struct MeasureArc {
    ArcPiece arc;
    double density = 0.0;
};

struct DiscreteMeasure {
    std::vector<MeasureAtom> atoms;
    std::vector<MeasureArc> arc_pieces;
};

// density against area on the disk; treated as zero outside
// |z| <= support_radius
struct DensityMeasure {
    std::function<double(cpx)> density;
    double support_radius = 1.0;
};

// Beltrami field given by its modulus on the fundamental domain; the
// group transport rule mu(g z) g'(z)~ / g'(z) leaves the modulus
// constant along orbits, and only the modulus enters the induced
// density |mu|^2 / (1 - |z|^2)
struct BeltramiDensity {
    std::function<double(cpx)> modulus_on_F;
};

struct MeasureSampling {
    int boundary_net = 64;  // test ball centers e^{2 pi i k / N}
    int radii = 28;         // dyadic ladder r_j = 2^(1 - 14 j / radii)
};

void validate_measure(const DiscreteMeasure& m);
double total_mass(const DiscreteMeasure& m);

// arclength with unit density on the domain boundary
DiscreteMeasure boundary_arclength_measure(const FundamentalDomain& fd);

// closed-form mass of the closed ball D(center, r): atom membership is
// boundary inclusive, arc masses come from exact circle and segment
// intersections
double ball_mass(const DiscreteMeasure& m, cpx center, double r);

// sup over net centers and dyadic radii 0 < r < 2 of mass / r; radii
// counts divisible by 14 place r = 1 on the ladder exactly
double carleson_norm(const DiscreteMeasure& m, const MeasureSampling& s);

// same functional by fixed polar quadrature, octave-refined toward the
// rim; non-integrable growth toward the boundary is reported as an
// error naming the witnessing center and radius
double carleson_norm(const DensityMeasure& m, const MeasureSampling& s);

struct PushforwardResult {
    DiscreteMeasure measure;    // one transported copy per orbit element
    EnumerationBudget budget;
    double mass_tail = 0.0;     // geometric fit of the shell mass sums
};

// transports (position, mass) to (g(position), mass |g'(position)|) and
// arc pieces to their moebius images with the same density; the
// derivative factor makes constant-density arcs transport exactly
PushforwardResult orbit_pushforward(const DiscreteMeasure& nu,
                                    const OrbitSummary& orbit);

struct PropertyHReport {
    double norm_on_F = 0.0;     // balls centered along the domain boundary
    double norm_tilde = 0.0;    // disk norm of the truncated pushforward
    EnumerationBudget budget;
    double mass_tail = 0.0;
};

PropertyHReport property_h_probe(const FundamentalDomain& fd,
                                 const OrbitSummary& orbit,
                                 const DiscreteMeasure& nu,
                                 const MeasureSampling& s);

struct BeltramiReport {
    double norm_on_F = 0.0;     // density restricted to the fundamental domain
    double norm_on_disk = 0.0;  // orbit-extended density, same test balls
    double covered_mass = 0.0;
    double uncovered_mass = 0.0;  // quadrature weight not reducible in budget
    EnumerationBudget budget;
};

// evaluates |mu|^2 (1 - |z|^2)^{-1} on the fundamental domain directly
// and on the disk by pulling quadrature nodes back through the group;
// fails when more than 10% of the quadrature weight cannot be reduced
// within the budget
BeltramiReport beltrami_carleson_check(const BeltramiDensity& mu,
                                       const FundamentalDomain& fd,
                                       const OrbitSummary& orbit,
                                       const MeasureSampling& s);

// CSV rows "kind,x1,y1,x2,y2,x3,y3,weight": atoms fill x1,y1 and the
// mass, arcs fill all three points and the density
std::string measure_csv(const DiscreteMeasure& m);

// k >= 2 points spread parameter-uniformly along one boundary piece,
// endpoints included (full circles close up instead)
std::vector<cpx> piece_sample(const ArcPiece& piece, int k);

}  // namespace denjoy
