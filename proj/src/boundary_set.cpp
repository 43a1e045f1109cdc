#include "denjoy/boundary_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace denjoy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool operator==(const Interval& a, const Interval& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

bool operator==(const RealBoundarySet& a, const RealBoundarySet& b) {
  return a.contains_infinity == b.contains_infinity && a.intervals == b.intervals;
}

void validate_boundary_set(const RealBoundarySet& E) {
  if (E.intervals.empty()) fail("boundary set: empty interval list");
  for (const Interval& iv : E.intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi)) fail("boundary set: NaN endpoint");
    if (!(iv.lo <= iv.hi)) fail("boundary set: interval with lo > hi");
    if (iv.lo == kInf || iv.hi == -kInf) fail("boundary set: interval outside the line");
  }
  for (std::size_t i = 1; i < E.intervals.size(); ++i) {
    if (!(E.intervals[i - 1].hi < E.intervals[i].lo))
      fail("boundary set: intervals not sorted with positive gaps");
  }
  if (!is_bounded(E) && !E.contains_infinity)
    fail("boundary set: unbounded set must contain infinity");
}

RealBoundarySet make_boundary_set(std::vector<Interval> iv, bool contains_infinity) {
  for (const Interval& v : iv) {
    if (std::isnan(v.lo) || std::isnan(v.hi)) fail("boundary set: NaN endpoint");
    if (!(v.lo <= v.hi)) fail("boundary set: interval with lo > hi");
  }
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> merged;
  for (const Interval& v : iv) {
    if (!merged.empty() && v.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, v.hi);
    else
      merged.push_back(v);
  }
  RealBoundarySet E{std::move(merged), contains_infinity};
  validate_boundary_set(E);
  return E;
}

bool is_full_line(const RealBoundarySet& E) {
  return E.intervals.size() == 1 && E.intervals[0].lo == -kInf &&
         E.intervals[0].hi == kInf;
}

bool is_bounded(const RealBoundarySet& E) {
  return !E.intervals.empty() && E.intervals.front().lo > -kInf &&
         E.intervals.back().hi < kInf;
}

bool contains_point(const RealBoundarySet& E, double x) {
  for (const Interval& iv : E.intervals)
    if (iv.lo <= x && x <= iv.hi) return true;
  return false;
}

double set_diameter(const RealBoundarySet& E) {
  if (E.intervals.empty()) return 0.0;
  return E.intervals.back().hi - E.intervals.front().lo;
}

std::vector<double> finite_endpoints(const RealBoundarySet& E) {
  std::vector<double> out;
  for (const Interval& iv : E.intervals) {
    if (iv.lo > -kInf) out.push_back(iv.lo);
    if (iv.hi < kInf && iv.hi != iv.lo) out.push_back(iv.hi);
  }
  return out;
}

std::vector<Interval> gaps(const RealBoundarySet& E) {
  std::vector<Interval> out;
  if (E.intervals.empty()) return out;
  if (E.intervals.front().lo > -kInf)
    out.push_back({-kInf, E.intervals.front().lo});
  for (std::size_t i = 1; i < E.intervals.size(); ++i)
    out.push_back({E.intervals[i - 1].hi, E.intervals[i].lo});
  if (E.intervals.back().hi < kInf) out.push_back({E.intervals.back().hi, kInf});
  return out;
}

double window_measure(const RealBoundarySet& E, double x, double t) {
  double acc = 0.0;
  for (const Interval& iv : E.intervals) {
    double lo = std::max(iv.lo, x - t);
    double hi = std::min(iv.hi, x + t);
    if (hi > lo) acc += hi - lo;
  }
  return acc;
}

RealBoundarySet affine_image(const RealBoundarySet& E, double a, double b) {
  if (a == 0.0 || std::isnan(a) || std::isnan(b)) fail("affine_image: bad coefficients");
  std::vector<Interval> iv;
  iv.reserve(E.intervals.size());
  for (const Interval& v : E.intervals) {
    double p = a * v.lo + b, q = a * v.hi + b;
    iv.push_back({std::min(p, q), std::max(p, q)});
  }
  return make_boundary_set(std::move(iv), E.contains_infinity);
}

namespace {

nlohmann::json encode_endpoint(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double decode_endpoint(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    fail("boundary set text: unknown endpoint sentinel '" + s + "'");
  }
  if (!j.is_number()) fail("boundary set text: endpoint is not a number");
  return j.get<double>();
}

}  // namespace

std::string to_text(const RealBoundarySet& E) {
  nlohmann::json j;
  j["infinity"] = E.contains_infinity;
  nlohmann::json arr = nlohmann::json::array();
  for (const Interval& iv : E.intervals)
    arr.push_back({encode_endpoint(iv.lo), encode_endpoint(iv.hi)});
  j["intervals"] = arr;
  return j.dump();
}

RealBoundarySet boundary_set_from_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || !j.contains("infinity") || !j.contains("intervals"))
    fail("boundary set text: expected object with 'infinity' and 'intervals'");
  RealBoundarySet E;
  E.contains_infinity = j["infinity"].get<bool>();
  for (const nlohmann::json& pair : j["intervals"]) {
    if (!pair.is_array() || pair.size() != 2)
      fail("boundary set text: interval is not a [lo, hi] pair");
    E.intervals.push_back({decode_endpoint(pair[0]), decode_endpoint(pair[1])});
  }
  validate_boundary_set(E);
  return E;
}

namespace {

// 1 when E covers a left (resp. right) neighborhood of x.
double left_density(const RealBoundarySet& E, double x) {
  for (const Interval& iv : E.intervals)
    if (iv.lo < x && x <= iv.hi) return 1.0;
  return 0.0;
}

double right_density(const RealBoundarySet& E, double x) {
  for (const Interval& iv : E.intervals)
    if (iv.lo <= x && x < iv.hi) return 1.0;
  return 0.0;
}

}  // namespace

double carleson_homogeneity_constant(const RealBoundarySet& E, double t_max) {
  validate_boundary_set(E);
  if (!(t_max > 0.0)) fail("carleson_homogeneity_constant: t_max must be positive");
  bool has_length = false;
  for (const Interval& iv : E.intervals) has_length = has_length || iv.hi > iv.lo;
  if (!has_length)
    fail("carleson_homogeneity_constant: requires an interval of positive length");

  std::vector<double> ep = finite_endpoints(E);
  if (ep.empty()) return 1.0;  // full line

  // candidate centers: endpoints, pair midpoints, points at distance t_max
  // from an endpoint; the (x, t) infimum of the piecewise-bilinear ratio is
  // attained with x in this set
  std::vector<double> xs = ep;
  for (std::size_t i = 0; i < ep.size(); ++i) {
    for (std::size_t j = i + 1; j < ep.size(); ++j)
      xs.push_back(0.5 * (ep[i] + ep[j]));
    xs.push_back(ep[i] - t_max);
    xs.push_back(ep[i] + t_max);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double best = 1.0;
  std::vector<double> ts;
  for (double x : xs) {
    if (!contains_point(E, x)) continue;
    best = std::min(best, 0.5 * (left_density(E, x) + right_density(E, x)));
    ts.clear();
    for (double e : ep) {
      double t = std::abs(x - e);
      if (t > 0.0 && t <= t_max) ts.push_back(t);
    }
    ts.push_back(t_max);
    for (double t : ts) best = std::min(best, window_measure(E, x, t) / (2.0 * t));
  }
  return best;
}

}  // namespace denjoy
