#pragma once

#include "denjoy/numeric.hpp"

namespace denjoy {

// 2x2 complex matrix acting on z (holomorphic) or on conj(z) (antiholomorphic):
//   z |-> (a*w + b) / (c*w + d),  w = anti ? conj(z) : z.
// normalized() scales to det = 1 and picks a canonical sign, so table lookups
// can compare entries directly (up to the unavoidable +-1 ambiguity).
struct MoebiusMap {
  cpx a{1.0}, b{0.0}, c{0.0}, d{1.0};
  bool anti = false;
};

cpx det(const MoebiusMap& m);
MoebiusMap normalized(const MoebiusMap& m);
MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2);  // acts as m1 after m2
MoebiusMap inverse(const MoebiusMap& m);

cpx moebius_apply(const MoebiusMap& m, cpx z);  // finite input, rejects exact poles
xcpx moebius_apply(const MoebiusMap& m, xcpx z);

// |f'(z)| for holomorphic maps, |d f / d conj(z)| for antiholomorphic ones.
double derivative_modulus(const MoebiusMap& m, cpx z);

// |a + d| of the det-1 representative. Rejects antiholomorphic input.
double normalized_trace(const MoebiusMap& m);

// Entrywise distance between det-1 representatives, modulo overall sign.
double projective_distance(const MoebiusMap& m1, const MoebiusMap& m2);
bool approx_equal(const MoebiusMap& m1, const MoebiusMap& m2, double tol = kCompareTol);
bool is_identity(const MoebiusMap& m, double tol = kCompareTol);

MoebiusMap moebius_identity();
MoebiusMap rotation(double theta);           // z -> e^{i theta} z
MoebiusMap disk_automorphism(cpx a);         // z -> (z + a) / (1 + conj(a) z)
MoebiusMap conjugation();                    // z -> conj(z)
MoebiusMap cayley();                         // disk -> upper half-plane, 0 -> i
MoebiusMap cayley_inverse();

}  // namespace denjoy
