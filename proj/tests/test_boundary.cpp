#include <cmath>
#include <cstring>
#include <limits>

#include "denjoy/boundary_set.hpp"
#include "denjoy/families.hpp"
#include "doctest.h"

using namespace denjoy;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool bit_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

// dense grid lower-bound scan; overestimates the true infimum
double homogeneity_grid_scan(const RealBoundarySet& E, double t_max, int nx, int nt) {
  double lo = E.intervals.front().lo, hi = E.intervals.back().hi;
  if (lo == -kInf) lo = finite_endpoints(E).front() - 2.0 * t_max;
  if (hi == kInf) hi = finite_endpoints(E).back() + 2.0 * t_max;
  double best = 1.0;
  for (int i = 0; i <= nx; ++i) {
    double x = lo + (hi - lo) * i / nx;
    if (!contains_point(E, x)) continue;
    for (int j = 1; j <= nt; ++j) {
      double t = t_max * j / nt;
      best = std::min(best, window_measure(E, x, t) / (2.0 * t));
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("boundary") {
  TEST_CASE("construction sorts and merges") {
    RealBoundarySet E = make_boundary_set({{3.0, 4.0}, {0.0, 1.0}, {1.0, 2.0}});
    REQUIRE(E.intervals.size() == 2);
    CHECK(E.intervals[0] == Interval{0.0, 2.0});
    CHECK(E.intervals[1] == Interval{3.0, 4.0});

    RealBoundarySet O = make_boundary_set({{0.0, 2.0}, {1.0, 5.0}, {7.0, 7.0}});
    REQUIRE(O.intervals.size() == 2);
    CHECK(O.intervals[0] == Interval{0.0, 5.0});
    CHECK(O.intervals[1] == Interval{7.0, 7.0});
  }

  TEST_CASE("validation rejects malformed sets") {
    CHECK_THROWS(make_boundary_set({}));
    CHECK_THROWS(make_boundary_set({{1.0, 0.0}}));
    CHECK_THROWS(make_boundary_set({{std::nan(""), 1.0}}));
    CHECK_THROWS(make_boundary_set({{kInf, kInf}}));
    CHECK_THROWS(make_boundary_set({{-kInf, -kInf}}));
    // unbounded set must carry the infinity flag
    CHECK_THROWS(make_boundary_set({{0.0, kInf}}, false));
    CHECK_NOTHROW(make_boundary_set({{0.0, 1.0}}, false));

    RealBoundarySet bad;
    bad.intervals = {{0.0, 2.0}, {1.0, 3.0}};
    CHECK_THROWS(validate_boundary_set(bad));
  }

  TEST_CASE("queries") {
    RealBoundarySet E = two_ray_set();
    CHECK(is_full_line(make_boundary_set({{-kInf, kInf}})));
    CHECK(!is_full_line(E));
    CHECK(!is_bounded(E));
    CHECK(is_bounded(make_boundary_set({{0.0, 1.0}}, false)));
    CHECK(contains_point(E, -3.0));
    CHECK(contains_point(E, 0.0));
    CHECK(!contains_point(E, 0.5));
    CHECK(set_diameter(make_boundary_set({{0.0, 1.0}, {4.0, 5.0}}, false)) == 5.0);
    CHECK(set_diameter(E) == kInf);

    CHECK(finite_endpoints(E) == std::vector<double>{0.0, 1.0});
    CHECK(finite_endpoints(make_boundary_set({{-kInf, kInf}})).empty());
  }

  TEST_CASE("gap extraction") {
    CHECK(gaps(two_ray_set()) == std::vector<Interval>{{0.0, 1.0}});
    CHECK(gaps(make_boundary_set({{-kInf, 0.0}, {1.0, 2.0}})) ==
          std::vector<Interval>{{0.0, 1.0}, {2.0, kInf}});
    CHECK(gaps(make_boundary_set({{0.0, 1.0}, {2.0, 3.0}}, false)) ==
          std::vector<Interval>{{-kInf, 0.0}, {1.0, 2.0}, {3.0, kInf}});
    CHECK(gaps(make_boundary_set({{-kInf, kInf}})).empty());
  }

  TEST_CASE("window measure") {
    RealBoundarySet E = two_ray_set();
    CHECK(window_measure(E, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(window_measure(E, 0.0, 10.0) == doctest::Approx(19.0));
    CHECK(window_measure(E, 0.5, 0.25) == 0.0);
    CHECK(window_measure(make_boundary_set({{-kInf, kInf}}), 123.0, 7.0) ==
          doctest::Approx(14.0));
  }

  TEST_CASE("affine images") {
    RealBoundarySet E = make_boundary_set({{0.0, 1.0}, {2.0, 3.0}}, false);
    RealBoundarySet S = affine_image(E, 2.0, 1.0);
    CHECK(S.intervals == std::vector<Interval>{{1.0, 3.0}, {5.0, 7.0}});
    RealBoundarySet N = affine_image(E, -1.0, 0.0);
    CHECK(N.intervals == std::vector<Interval>{{-3.0, -2.0}, {-1.0, 0.0}});
    CHECK(affine_image(two_ray_set(), -2.0, 0.0).intervals ==
          std::vector<Interval>{{-kInf, -2.0}, {0.0, kInf}});
    CHECK_THROWS(affine_image(E, 0.0, 1.0));
  }

  TEST_CASE("text round-trip is bit-exact") {
    std::vector<Interval> iv = {
        {-kInf, -4.0},
        {-2.0, -0.1},
        {1.0 / 3.0, std::nextafter(0.5, 1.0)},
        {0.7000000000000001, kInf},
    };
    RealBoundarySet E = make_boundary_set(iv);
    std::string text = to_text(E);
    RealBoundarySet back = boundary_set_from_text(text);
    REQUIRE(back.intervals.size() == E.intervals.size());
    CHECK(back.contains_infinity == E.contains_infinity);
    for (std::size_t i = 0; i < E.intervals.size(); ++i) {
      CHECK(bit_equal(back.intervals[i].lo, E.intervals[i].lo));
      CHECK(bit_equal(back.intervals[i].hi, E.intervals[i].hi));
    }
    CHECK(to_text(back) == text);

    CHECK(to_text(two_ray_set()) ==
          R"({"infinity":true,"intervals":[["-inf",0.0],[1.0,"inf"]]})");
    CHECK_THROWS(boundary_set_from_text(R"({"intervals":[[0.0,1.0]]})"));
    CHECK_THROWS(boundary_set_from_text(R"({"infinity":true,"intervals":[["oops",1.0]]})"));
    CHECK_THROWS(boundary_set_from_text(R"({"infinity":true,"intervals":[[2.0,1.0]]})"));
  }

  TEST_CASE("homogeneity constant: pinned values") {
    CHECK(carleson_homogeneity_constant(make_boundary_set({{-kInf, kInf}}), 5.0) == 1.0);
    CHECK(carleson_homogeneity_constant(two_ray_set(), 10.0) == 0.5);
    // isolated point forces zero
    RealBoundarySet P = make_boundary_set({{-kInf, 0.0}, {2.0, 2.0}, {5.0, kInf}});
    CHECK(carleson_homogeneity_constant(P, 10.0) == 0.0);
    CHECK_THROWS(carleson_homogeneity_constant(two_ray_set(), 0.0));
    CHECK_THROWS(carleson_homogeneity_constant(
        make_boundary_set({{1.0, 1.0}}, false), 1.0));
  }

  TEST_CASE("homogeneity constant: grid oracle") {
    std::vector<RealBoundarySet> sets = {
        two_ray_set(),
        homogeneous_pair_set(),
        cyclic_set(),
        make_boundary_set({{-kInf, -1.0}, {0.0, 0.25}, {3.0, kInf}}),
        cantor_complement_set(2),
    };
    for (const RealBoundarySet& E : sets) {
      double exact = carleson_homogeneity_constant(E, 4.0);
      double grid = homogeneity_grid_scan(E, 4.0, 4000, 900);
      CHECK(exact <= grid + 1e-12);
      CHECK(grid - exact < 0.02);
    }
  }

  TEST_CASE("homogeneity constant: exact invariance under scaling and shifts") {
    // dyadic endpoints shift and scale without rounding, so equality is exact
    for (const RealBoundarySet& E : {two_ray_set(), homogeneous_pair_set()}) {
      double base = carleson_homogeneity_constant(E, 2.0);
      CHECK(carleson_homogeneity_constant(affine_image(E, 2.0, 0.0), 4.0) == base);
      CHECK(carleson_homogeneity_constant(affine_image(E, 1.0, 3.0), 2.0) == base);
      CHECK(carleson_homogeneity_constant(affine_image(E, -1.0, 0.0), 2.0) == base);
    }
    // non-dyadic endpoints pick up one rounding step in the shifted copy
    RealBoundarySet C = cantor_complement_set(3);
    double base = carleson_homogeneity_constant(C, 2.0);
    CHECK(carleson_homogeneity_constant(affine_image(C, 2.0, 0.0), 4.0) == base);
    CHECK(carleson_homogeneity_constant(affine_image(C, 1.0, 3.0), 2.0) ==
          doctest::Approx(base).epsilon(1e-13));
  }

  TEST_CASE("homogeneity decays along the cantor family") {
    double prev = 1.0;
    for (int depth = 1; depth <= 6; ++depth) {
      double c = carleson_homogeneity_constant(cantor_complement_set(depth), 1.0);
      CHECK(c > 0.0);
      CHECK(c < prev);
      prev = c;
    }
  }

  TEST_CASE("family constructors") {
    CHECK(cantor_complement_set(1).intervals.size() == 2);
    CHECK(gaps(cantor_complement_set(1)) ==
          std::vector<Interval>{{1.0 / 3.0, 1.0 - 1.0 / 3.0}});
    CHECK(gaps(cantor_complement_set(5)).size() == 31);
    RealBoundarySet comb = comb_set(8, 0.125);
    CHECK(gaps(comb).size() == 8);
    for (const Interval& g : gaps(comb)) CHECK(g.hi - g.lo == 0.125);
    // pinch family homogeneity decreases with the island width
    double prev = 1.0;
    for (int k = 0; k <= 4; ++k) {
      double c = carleson_homogeneity_constant(pinch_set(std::pow(4.0, -k)), 1.0);
      CHECK(c < prev);
      prev = c;
    }
    CHECK_THROWS(comb_set(0, 0.5));
    CHECK_THROWS(comb_set(4, 1.5));
    CHECK_THROWS(pinch_set(0.0));
    CHECK_THROWS(cantor_complement_set(0));
  }
}
