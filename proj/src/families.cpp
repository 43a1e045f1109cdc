#include "denjoy/families.hpp"

#include <limits>

namespace denjoy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RealBoundarySet two_ray_set() {
  return make_boundary_set({{-kInf, 0.0}, {1.0, kInf}});
}

RealBoundarySet cyclic_set() {
  return make_boundary_set({{-kInf, -2.0}, {-1.0, 1.0}, {2.0, kInf}});
}

RealBoundarySet homogeneous_pair_set() {
  return make_boundary_set({{-kInf, -4.0}, {-2.0, -1.0}, {1.0, 2.0}, {4.0, kInf}});
}

RealBoundarySet cantor_complement_set(int depth) {
  if (depth < 1 || depth > 20) fail("cantor_complement_set: depth out of range");
  std::vector<Interval> pieces{{0.0, 1.0}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Interval> next;
    next.reserve(2 * pieces.size());
    for (const Interval& p : pieces) {
      double third = (p.hi - p.lo) / 3.0;
      next.push_back({p.lo, p.lo + third});
      next.push_back({p.hi - third, p.hi});
    }
    pieces = std::move(next);
  }
  pieces.push_back({-kInf, 0.0});
  pieces.push_back({1.0, kInf});
  return make_boundary_set(std::move(pieces));
}

RealBoundarySet comb_set(int k, double eta) {
  if (k < 1 || k > 4096) fail("comb_set: tooth count out of range");
  if (!(eta > 0.0 && eta < 1.0)) fail("comb_set: eta must lie in (0, 1)");
  std::vector<Interval> iv;
  iv.push_back({-kInf, 1.0});
  for (int i = 1; i < k; ++i) iv.push_back({i + eta, double(i + 1)});
  iv.push_back({k + eta, kInf});
  return make_boundary_set(std::move(iv));
}

RealBoundarySet pinch_set(double delta) {
  if (!(delta > 0.0 && delta < 4.0)) fail("pinch_set: delta must lie in (0, 4)");
  return make_boundary_set({{-kInf, -2.0}, {-delta / 2.0, delta / 2.0}, {2.0, kInf}});
}

}  // namespace denjoy
