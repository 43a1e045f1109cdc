#pragma once

#include "denjoy/circle_model.hpp"
#include "denjoy/moebius.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace denjoy {

// one group element: a holomorphic disk automorphism with its reduced
// word over the generators (signed 1-based indices, +k meaning g_k and
// -k its inverse, applied right to left)
struct GroupElement {
    MoebiusMap map;
    std::vector<int> word;
    double origin_image_gap = 1.0;          // 1 - |map(0)|
    double boundary_image_length = -1.0;    // filled lazily, -1 until then
};

// exactly one of the two fields must be positive: breadth-first depth,
// or a floor on 1 - |g(0)|. With a floor, shells are expanded while at
// least one element of the previous shell still clears it, and the
// retained set is filtered by the floor afterwards.
struct EnumerationBudget {
    int max_word_length = 0;
    double min_origin_gap = 0.0;
};

struct OrbitSummary {
    std::vector<GroupElement> elements;     // distinct, origin gap descending
    EnumerationBudget budget;
    double tail_estimate = 0.0;             // geometric fit of the last shells
    std::vector<std::string> collision_log; // near-tolerance dedup audits
};

// one generator per conjugate gap pair: conjugation composed with the
// reflection in the upper wall
std::vector<GroupElement> generators_from_domain(const FundamentalDomain& fd);

OrbitSummary enumerate_group(const std::vector<GroupElement>& generators,
                             const EnumerationBudget& budget);

struct ExponentReport {
    std::vector<double> alphas;
    std::vector<double> partial_sums;       // sum of gap^alpha over the orbit
    bool estimated = false;                 // false when the orbit is small
    double delta_low = 0.0;
    double delta_high = 0.0;                // bracket for the critical exponent
};

ExponentReport convergence_exponent(const OrbitSummary& orbit,
                                    const std::vector<double>& alphas);

// a piece of the domain boundary: circular arc or straight segment,
// described by its endpoints and an interior point
struct ArcPiece {
    cpx p, m, q;
    double length = 0.0;
    bool full_circle = false;
};

std::vector<ArcPiece> boundary_pieces(const FundamentalDomain& fd);

// Euclidean length of the image of one piece: Moebius maps send
// circles to circles, so three image points determine it in closed form
double moebius_arc_length(const MoebiusMap& g, const ArcPiece& piece);

double boundary_image_length(const FundamentalDomain& fd, const MoebiusMap& g);

// total Euclidean length of the orbit of the domain boundary; caches
// the per-element lengths into the summary
double boundary_orbit_length_sum(const FundamentalDomain& fd,
                                 OrbitSummary& orbit);

struct SfltResult {
    double sup_value = 0.0;
    MoebiusMap maximizer;
    double identity_value = 0.0;
};

// sup over sampled disk automorphisms T of the orbit length sum of
// T(g(boundary)); the identity is always sample zero, the rest draw a
// uniform rotation and |a|^2 uniform on [0, (1-1e-3)^2] from the seed
SfltResult sflt_functional(const FundamentalDomain& fd,
                           const OrbitSummary& orbit,
                           int automorphism_samples, std::uint64_t seed);

double min_trace(const OrbitSummary& orbit);

// derivative modulus and inverse application for enumerated elements;
// both use the det-1 disk automorphism structure of the stored matrix,
// which stays exact for deep words where the numeric determinant has
// cancelled away
double element_derivative_modulus(const MoebiusMap& m, cpx z);
cpx element_inverse_apply(const MoebiusMap& m, cpx z);

// truncated Dirichlet test: d(0,z) <= d(0,g z) + 1e-9 for every
// enumerated g != id; exact once the budget covers the relevant words
bool dirichlet_membership(cpx z, const OrbitSummary& orbit);

std::string word_text(const std::vector<int>& word);

// CSV columns: word, trace, origin_image_gap, boundary_image_length
std::string orbit_csv(const FundamentalDomain& fd, OrbitSummary& orbit);

}  // namespace denjoy
