#pragma once

#include "denjoy/group.hpp"
#include "denjoy/measures.hpp"

#include <functional>
#include <string>
#include <vector>

namespace denjoy {

// one factor of the seed composition acting on the closed upper half
// plane: w -> c + rho * G((w - c)/rho) with G(u) = u + 1/u, which
// removes the half-disk bump D(c, rho) exactly and is the identity plus
// a decaying term far away; shifted factors conjugate by the real chart
// w -> -1/(w - pivot) first so bumps whose feet straddle infinity
// flatten in finite coordinates too
struct SeedStep {
    bool shifted = false;
    double pivot = 0.0;
    double c = 0.0;
    double rho = 1.0;
};

// boundary correspondence audit: a vertex of the fundamental domain and
// where the seed sends it, against the prescribed real target sec(theta)
struct CorrespondenceRow {
    int piece = 0;  // 0 diameter endpoint, 1 retained-arc endpoint, 2 wall foot
    int index = 0;
    cpx source;
    xcpx image;
    xcpx target;
    double deviation = 0.0;  // spherical distance
};

// conformal map from the upper half of the fundamental domain onto the
// upper half plane fixing -1 and 1: the explicit half-disk transport
// followed by the recorded peel steps and a final real normalization
struct SeedMap {
    std::vector<SeedStep> steps;
    MoebiusMap post;
    double eps_seed = 0.0;
    double residual = 0.0;  // max bump height relative to the diameter span
    int rounds = 0;
    std::vector<CorrespondenceRow> table;
};

SeedMap seed_riemann_map(const FundamentalDomain& fd, double eps_seed);

// value and derivative of the seed composition at a point of the closed
// upper half of the fundamental domain
cpx seed_apply(const SeedMap& seed, cpx z);
cpx seed_derivative(const SeedMap& seed, cpx z);

enum class CoveringKind { ExplicitJoukowski, NumericalSeed };

// universal covering of the domain complementary to fd.E, evaluated in
// the original coordinates. The explicit kind is (z + 1/z)/2 onto the
// complement of [-1, 1]; the numerical kind composes the seed with the
// model-to-original transport and extends by the group and conjugation.
struct CoveringMap {
    CoveringKind kind = CoveringKind::ExplicitJoukowski;
    FundamentalDomain fd;
    std::vector<GroupElement> generators;
    OrbitSummary group;
    SeedMap seed;
    int reduction_cap = 0;  // 4x the word-length budget of `group`
};

CoveringMap joukowski_covering();
CoveringMap covering_from_domain(const FundamentalDomain& fd,
                                 const OrbitSummary& orbit, double eps_seed);

// reduction into the fundamental domain is greedy descent of d(0, .)
// over generator moves, capped at 4x the word-length budget; points the
// cap cannot reduce raise an error naming the achieved distance
xcpx evaluate_covering(const CoveringMap& cm, cpx z);

// Cauchy-coefficient derivative extraction on the circle of radius
// radius_factor * (1 - |z|), shrunk to keep the explicit kind's pole at
// the origin outside
struct JetScheme {
    double radius_factor = 0.5;
    int nodes = 48;
};

struct CoveringJet {
    cpx f, f1, f2, f3;
};

CoveringJet covering_jet(const CoveringMap& cm, cpx z, const JetScheme& scheme);

// interior evaluation mesh, octave-refined toward the rim; jets filled
// on construction, a tithe of them revalidated against an independent
// Cauchy radius to 1e-5 relative
struct AnalyticSampleGrid {
    std::vector<cpx> points;
    std::vector<CoveringJet> jets;
    int level = 0;
};

AnalyticSampleGrid covering_sample_grid(const CoveringMap& cm, int level,
                                        const JetScheme& scheme = {});

struct SupFunctional {
    double value = 0.0;
    cpx argmax;
};

// sup over the grid of (1 - |z|^2) |(log f')'(z)|
SupFunctional bloch_norm(const CoveringMap& cm,
                         const AnalyticSampleGrid& grid);

cpx schwarzian(const std::function<cpx(cpx)>& f, cpx z,
               const JetScheme& scheme = {});
cpx schwarzian(const CoveringMap& cm, cpx z, const JetScheme& scheme = {});

// Carleson norms of |(log f')'|^2 (1-|z|^2) dxdy and of
// (1-|z|^2)^3 |S_f|^2 dxdy over the shared density quadrature; mass at
// quadrature points the group budget cannot reduce is dropped and
// reported, more than 10% of points fails
struct BmoaReport {
    double garsia_type_norm = 0.0;
    double schwarzian_carleson_norm = 0.0;
    double unreachable_fraction = 0.0;
    MeasureSampling sampling;
};

BmoaReport bmoa_functionals(const CoveringMap& cm, const MeasureSampling& s,
                            const JetScheme& scheme = {},
                            const MoebiusMap* precompose = nullptr);

// line L through `point` at direction `angle`; the traced level set is
// Im(e^{-i angle}(f(z) - point)) = 0
struct LineDescriptor {
    cpx point;
    double angle = 0.0;
};

// marching-squares trace of f^{-1}(L) on a resolution x resolution grid
// with bisection-refined crossings; returns the polyline length
double hayman_wu_length(const CoveringMap& cm, const LineDescriptor& line,
                        int resolution);

struct ConjectureRow {
    std::vector<int> word;
    double integral = 0.0;   // (1-|z|^2)^3 |g'(z)| over the fundamental domain
    double diameter = 0.0;   // diam g(boundary)
    double ratio = 0.0;      // integral / diameter
    bool converged = false;  // quadrature halving moved the integral < 1%
};

// quadrature_level scales the polar mesh over the fundamental domain;
// every row is recomputed on a half-density mesh to set `converged`
std::vector<ConjectureRow> conjecture_probe(const FundamentalDomain& fd,
                                            const OrbitSummary& orbit,
                                            int quadrature_level = 0);

// CSV columns: word, integral, diameter, ratio, converged
std::string conjecture_csv(const std::vector<ConjectureRow>& rows);

}  // namespace denjoy
