#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "denjoy/families.hpp"
#include "denjoy/geodesic.hpp"
#include "denjoy/group.hpp"
#include "doctest.h"

using namespace denjoy;

namespace {

// raw det-1 product of two disk automorphisms in (a, b; conj b, conj a)
// form; avoids any renormalizing division
MoebiusMap disk_product(const MoebiusMap& x, const MoebiusMap& y) {
  cpx a = x.a * y.a + x.b * std::conj(y.b);
  cpx b = x.a * y.b + x.b * std::conj(y.a);
  return MoebiusMap{a, b, std::conj(b), std::conj(a), false};
}

double entry_distance(const MoebiusMap& x, const MoebiusMap& y) {
  double dm = std::max(std::abs(x.a - y.a), std::abs(x.b - y.b));
  double dp = std::max(std::abs(x.a + y.a), std::abs(x.b + y.b));
  return std::min(dm, dp);
}

std::vector<int> reduce_concat(std::vector<int> w, const std::vector<int>& v) {
  for (int s : v) {
    if (!w.empty() && w.back() == -s)
      w.pop_back();
    else
      w.push_back(s);
  }
  return w;
}

double power_trace(const MoebiusMap& g, int k) {
  MoebiusMap p = moebius_identity();
  for (int i = 0; i < k; ++i) p = disk_product(p, g);
  return 2.0 * std::abs(p.a.real());
}

}  // namespace

TEST_SUITE("group") {
  TEST_CASE("rank-one domain has a single hyperbolic generator") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    REQUIRE(fd.gap_arcs.size() == 2);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    REQUIRE(gens.size() == 1);
    const GroupElement& g = gens[0];
    CHECK(!g.map.anti);
    CHECK(g.word == std::vector<int>{1});
    CHECK(normalized_trace(g.map) > 2.0);
    CHECK(normalized_trace(g.map) == doctest::Approx(67.941125496944).epsilon(1e-9));

    // the generator is conjugation after reflection in the upper wall
    MoebiusMap manual =
        normalized(compose(conjugation(), reflection(fd.geodesics[0])));
    CHECK(projective_distance(g.map, manual) < 1e-12);

    // the lower wall produces the inverse
    MoebiusMap lower =
        normalized(compose(conjugation(), reflection(fd.geodesics[1])));
    CHECK(projective_distance(lower, inverse(g.map)) < 1e-12);

    // origin gap consistency and the image leaving the fundamental domain
    cpx g0 = moebius_apply(g.map, cpx(0.0, 0.0));
    CHECK(g.origin_image_gap == doctest::Approx(1.0 - std::abs(g0)).epsilon(1e-12));
    CHECK(in_fundamental_domain(fd, cpx(0.0, 0.0), 1e-9));
    CHECK(!in_fundamental_domain(fd, g0, 1e-9));

    // trivial domain: no walls, no generators
    FundamentalDomain line = circle_model(make_boundary_set({{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}}));
    CHECK(generators_from_domain(line).empty());
  }

  TEST_CASE("breadth enumeration of the rank-one group") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    OrbitSummary orbit = enumerate_group(gens, {5, 0.0});
    CHECK(orbit.elements.size() == 11);  // id plus g^{+-k}, k = 1..5
    CHECK(orbit.collision_log.empty());
    CHECK(orbit.elements.front().word.empty());  // gap sorts identity first

    for (const GroupElement& e : orbit.elements) {
      // words are freely reduced
      for (std::size_t i = 1; i < e.word.size(); ++i)
        CHECK(e.word[i] != -e.word[i - 1]);
      // stored matrices keep the det-1 disk automorphism form
      CHECK(std::abs(e.map.d - std::conj(e.map.a)) <=
            1e-9 * (1.0 + std::abs(e.map.a)));
      CHECK(std::abs(e.map.c - std::conj(e.map.b)) <=
            1e-9 * (1.0 + std::abs(e.map.b)));
      CHECK(e.origin_image_gap > 0.0);
      CHECK(e.origin_image_gap <= 1.0);
    }

    // gaps weakly decreasing in the sort
    for (std::size_t i = 1; i < orbit.elements.size(); ++i)
      CHECK(orbit.elements[i - 1].origin_image_gap >=
            orbit.elements[i].origin_image_gap);

    // the trace of g^k equals the Chebyshev recursion on the trace of g
    double t1 = normalized_trace(gens[0].map);
    double prev = 2.0, cur = t1;
    for (int k = 1; k <= 5; ++k) {
      CHECK(power_trace(gens[0].map, k) == doctest::Approx(cur).epsilon(1e-10));
      double nxt = t1 * cur - prev;
      prev = cur;
      cur = nxt;
    }
  }

  TEST_CASE("powers of one generator contract geometrically") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    OrbitSummary orbit = enumerate_group(generators_from_domain(fd), {8, 0.0});
    std::vector<double> xs, ys;
    for (const GroupElement& e : orbit.elements) {
      if (e.word.empty() || e.word[0] != 1) continue;
      bool pure = true;
      for (int s : e.word) pure = pure && s == 1;
      if (!pure) continue;
      xs.push_back((double)e.word.size());
      ys.push_back(std::log(e.origin_image_gap));
    }
    REQUIRE(xs.size() == 8);
    double n = 8.0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - slope * sx) / n;
    double ssr = 0, sst = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ssr += std::pow(ys[i] - slope * xs[i] - icept, 2);
      sst += std::pow(ys[i] - sy / n, 2);
    }
    CHECK(slope < -1.0);
    CHECK(1.0 - ssr / sst > 0.999);
  }

  TEST_CASE("deeper budgets only extend the element set") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    OrbitSummary o4 = enumerate_group(gens, {4, 0.0});
    OrbitSummary o5 = enumerate_group(gens, {5, 0.0});
    std::vector<std::vector<int>> w4, w5;
    for (const GroupElement& e : o4.elements) w4.push_back(e.word);
    for (const GroupElement& e : o5.elements) w5.push_back(e.word);
    std::sort(w4.begin(), w4.end());
    std::sort(w5.begin(), w5.end());
    CHECK(std::includes(w5.begin(), w5.end(), w4.begin(), w4.end()));
  }

  TEST_CASE("gap floor budget retains exactly the cleared elements") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    OrbitSummary deep = enumerate_group(gens, {8, 0.0});
    double g3 = 0.0, g4 = 0.0;
    for (const GroupElement& e : deep.elements) {
      if (e.word.size() == 3) g3 = e.origin_image_gap;
      if (e.word.size() == 4) g4 = e.origin_image_gap;
    }
    REQUIRE(g3 > g4);
    double floor = 0.5 * (g3 + g4);
    OrbitSummary orbit = enumerate_group(gens, {0, floor});
    CHECK(orbit.elements.size() == 7);  // id and g^{+-k}, k <= 3
    for (const GroupElement& e : orbit.elements) {
      CHECK(e.origin_image_gap >= floor);
      CHECK(e.word.size() <= 3);
    }
    CHECK(orbit.budget.min_origin_gap == floor);

    // a floor above every generator gap keeps only the identity
    OrbitSummary tiny = enumerate_group(gens, {0, 0.5});
    CHECK(tiny.elements.size() == 1);
  }

  TEST_CASE("budget validation") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    CHECK_THROWS(enumerate_group(gens, {0, 0.0}));
    CHECK_THROWS(enumerate_group(gens, {3, 0.5}));
    CHECK_THROWS(enumerate_group(gens, {0, 1.5}));
    CHECK_THROWS(enumerate_group(gens, {-2, 0.0}));

    // no generators: the orbit is the identity alone
    OrbitSummary trivial = enumerate_group({}, {3, 0.0});
    CHECK(trivial.elements.size() == 1);
    CHECK_THROWS(min_trace(trivial));
  }

  TEST_CASE("free rank-two group fills every shell") {
    FundamentalDomain fd = circle_model(homogeneous_pair_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    REQUIRE(gens.size() == 2);
    // mirror-symmetric walls give equal traces
    CHECK(normalized_trace(gens[0].map) ==
          doctest::Approx(normalized_trace(gens[1].map)).epsilon(1e-9));

    OrbitSummary orbit = enumerate_group(gens, {6, 0.0});
    // 1 + sum of 4 * 3^(k-1): no relation may collapse a shell
    CHECK(orbit.elements.size() == 1457);
    CHECK(orbit.collision_log.empty());
    std::map<std::size_t, int> by_len;
    for (const GroupElement& e : orbit.elements) by_len[e.word.size()]++;
    CHECK(by_len[0] == 1);
    int expect = 4;
    for (std::size_t l = 1; l <= 6; ++l) {
      CHECK(by_len[l] == expect);
      expect *= 3;
    }
    CHECK(orbit.tail_estimate > 0.0);
    CHECK(orbit.tail_estimate < 1e-6);
  }

  TEST_CASE("composition table agrees with matrix products") {
    FundamentalDomain fd = circle_model(homogeneous_pair_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    OrbitSummary o3 = enumerate_group(gens, {3, 0.0});
    OrbitSummary o6 = enumerate_group(gens, {6, 0.0});
    std::map<std::vector<int>, const GroupElement*> lookup;
    for (const GroupElement& e : o6.elements) lookup[e.word] = &e;

    int checked = 0;
    for (const GroupElement& x : o3.elements)
      for (const GroupElement& y : o3.elements) {
        std::vector<int> w = reduce_concat(x.word, y.word);
        auto it = lookup.find(w);
        REQUIRE(it != lookup.end());
        MoebiusMap prod = disk_product(x.map, y.map);
        double scale = std::abs(prod.a) + std::abs(prod.b);
        CHECK(entry_distance(prod, it->second->map) <= 1e-9 * (1.0 + scale));
        ++checked;
      }
    CHECK(checked == 53 * 53);
  }

  TEST_CASE("exponent bracket of the rank-one group sits at zero") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    OrbitSummary orbit = enumerate_group(generators_from_domain(fd), {30, 0.0});
    REQUIRE(orbit.elements.size() == 61);
    ExponentReport rep = convergence_exponent(orbit, {0.25, 0.5, 0.75, 1.0});
    CHECK(rep.estimated);
    CHECK(rep.delta_low == 0.0);
    CHECK(rep.delta_high == 0.25);
    REQUIRE(rep.partial_sums.size() == 4);
    for (std::size_t i = 1; i < 4; ++i)
      CHECK(rep.partial_sums[i - 1] > rep.partial_sums[i]);

    // partial sums only grow with the budget
    OrbitSummary small = enumerate_group(generators_from_domain(fd), {10, 0.0});
    ExponentReport rs = convergence_exponent(small, {0.25, 0.5, 0.75, 1.0});
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(rs.partial_sums[i] <= rep.partial_sums[i]);

    // sums follow the order the exponents were given in
    ExponentReport flipped = convergence_exponent(orbit, {1.0, 0.25});
    CHECK(flipped.partial_sums[0] < flipped.partial_sums[1]);
  }

  TEST_CASE("exponent bracket of the rank-two group stays below one") {
    FundamentalDomain fd = circle_model(homogeneous_pair_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    OrbitSummary orbit = enumerate_group(gens, {6, 0.0});
    ExponentReport rep = convergence_exponent(orbit, {0.2, 0.4, 0.6, 0.8, 1.0});
    CHECK(rep.estimated);
    CHECK(rep.delta_low == 0.2);
    CHECK(rep.delta_high == 0.4);

    // too small an orbit refuses to estimate
    OrbitSummary shallow = enumerate_group(gens, {1, 0.0});
    ExponentReport rshallow = convergence_exponent(shallow, {0.5});
    CHECK(!rshallow.estimated);

    CHECK_THROWS(convergence_exponent(orbit, {}));
    CHECK_THROWS(convergence_exponent(orbit, {0.5, -1.0}));
  }

  TEST_CASE("boundary pieces add up under the identity") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    std::vector<ArcPiece> pieces = boundary_pieces(fd);
    CHECK(pieces.size() == fd.F_arcs.size() + fd.geodesics.size());
    double total = 0.0;
    for (const ArcPiece& p : pieces) {
      CHECK(p.length > 0.0);
      total += p.length;
      CHECK(moebius_arc_length(moebius_identity(), p) ==
            doctest::Approx(p.length).epsilon(1e-12));
    }
    CHECK(boundary_image_length(fd, moebius_identity()) ==
          doctest::Approx(total).epsilon(1e-12));

    // rigid rotations preserve every length
    CHECK(boundary_image_length(fd, rotation(1.234)) ==
          doctest::Approx(total).epsilon(1e-9));
  }

  TEST_CASE("full circle boundary is moebius invariant") {
    FundamentalDomain line = circle_model(make_boundary_set({{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}}));
    std::vector<ArcPiece> pieces = boundary_pieces(line);
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].full_circle);
    CHECK(pieces[0].length == doctest::Approx(2.0 * kPi));
    // disk automorphisms permute the unit circle
    CHECK(moebius_arc_length(disk_automorphism(cpx(0.3, -0.2)), pieces[0]) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-9));
  }

  TEST_CASE("orbit length sums grow and stay close to the base value") {
    FundamentalDomain fd = circle_model(homogeneous_pair_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    OrbitSummary o3 = enumerate_group(gens, {3, 0.0});
    OrbitSummary o6 = enumerate_group(gens, {6, 0.0});
    double b3 = boundary_orbit_length_sum(fd, o3);
    double b6 = boundary_orbit_length_sum(fd, o6);
    CHECK(b3 == doctest::Approx(9.565952729262623).epsilon(1e-9));
    CHECK(b6 > b3);
    CHECK(b6 - b3 < 0.01);  // increments decay geometrically
    for (const GroupElement& e : o6.elements)
      CHECK(e.boundary_image_length >= 0.0);

    // every element obeys one shared gap-to-length constant
    double c = 0.0;
    for (const GroupElement& e : o3.elements)
      c = std::max(c, e.origin_image_gap / e.boundary_image_length);
    for (const GroupElement& e : o6.elements)
      CHECK(e.origin_image_gap <= 1.05 * c * e.boundary_image_length);
  }

  TEST_CASE("automorphism sweep never drops below the identity value") {
    FundamentalDomain fd = circle_model(homogeneous_pair_set(), 1);
    OrbitSummary orbit = enumerate_group(generators_from_domain(fd), {3, 0.0});
    SfltResult one = sflt_functional(fd, orbit, 1, 42);
    CHECK(one.sup_value == one.identity_value);
    CHECK(one.identity_value ==
          doctest::Approx(boundary_orbit_length_sum(fd, orbit)).epsilon(1e-12));

    SfltResult many = sflt_functional(fd, orbit, 64, 42);
    CHECK(many.identity_value == one.identity_value);
    CHECK(many.sup_value >= many.identity_value);
    CHECK(many.sup_value <= 3.0 * many.identity_value);

    SfltResult again = sflt_functional(fd, orbit, 64, 42);
    CHECK(again.sup_value == many.sup_value);
    CHECK_THROWS(sflt_functional(fd, orbit, 0, 42));
  }

  TEST_CASE("minimal trace detects the pinching family") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    OrbitSummary orbit = enumerate_group(generators_from_domain(fd), {3, 0.0});
    CHECK(min_trace(orbit) ==
          doctest::Approx(67.941125496944).epsilon(1e-9));

    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {0.4, 0.04, 0.004, 0.0004}) {
      FundamentalDomain pf = circle_model(pinch_set(delta));
      OrbitSummary po = enumerate_group(generators_from_domain(pf), {1, 0.0});
      double t = min_trace(po);
      CHECK(t > 2.0);
      CHECK(t < prev);
      prev = t;
    }
    CHECK(prev - 2.0 < 0.1);  // tends to the parabolic limit
  }

  TEST_CASE("membership test matches the fundamental domain") {
    FundamentalDomain fd = circle_model(homogeneous_pair_set(), 1);
    std::vector<GroupElement> gens = generators_from_domain(fd);
    OrbitSummary o1 = enumerate_group(gens, {1, 0.0});
    OrbitSummary o2 = enumerate_group(gens, {2, 0.0});

    CHECK(dirichlet_membership(cpx(0.0, 0.0), o2));
    cpx deep = moebius_apply(gens[0].map, cpx(0.05, 0.02));
    CHECK(!dirichlet_membership(deep, o2));
    CHECK_THROWS(dirichlet_membership(cpx(1.0, 0.0), o2));

    int total = 0;
    for (int ix = -9; ix <= 9; ++ix)
      for (int iy = -9; iy <= 9; ++iy) {
        cpx z(ix / 10.0, iy / 10.0);
        if (std::abs(z) >= 0.95) continue;
        bool member2 = dirichlet_membership(z, o2);
        CHECK(member2 == in_fundamental_domain(fd, z, 1e-7));
        // a larger budget only removes points
        if (member2) CHECK(dirichlet_membership(z, o1));
        ++total;
      }
    CHECK(total == 293);
  }

  TEST_CASE("orbit csv is deterministic and well formed") {
    FundamentalDomain fd = circle_model(cyclic_set(), 1);
    OrbitSummary orbit = enumerate_group(generators_from_domain(fd), {2, 0.0});
    std::string csv = orbit_csv(fd, orbit);
    OrbitSummary orbit2 = enumerate_group(generators_from_domain(fd), {2, 0.0});
    CHECK(orbit_csv(fd, orbit2) == csv);

    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "word,trace,origin_image_gap,boundary_image_length");
    REQUIRE(std::getline(in, line));
    CHECK(line.substr(0, 7) == "id,2,1,");
    int rows = 1;
    while (std::getline(in, line)) {
      CHECK(std::count(line.begin(), line.end(), ',') == 3);
      ++rows;
    }
    CHECK(rows == (int)orbit.elements.size());
    CHECK(word_text({}) == "id");
    CHECK(word_text({1, -2, 1}) == "+1-2+1");
  }
}
