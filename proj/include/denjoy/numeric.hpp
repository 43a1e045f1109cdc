#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace denjoy {

using cpx = std::complex<double>;

// Central tolerance constants. Every dedup / equality decision downstream
// inherits these two numbers.
inline constexpr double kCompareTol = 1e-9;
inline constexpr double kNormalizeTol = 1e-12;

inline constexpr double kPi = 3.14159265358979323846;

inline double sq(double x) { return x * x; }
inline double abs2(cpx z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Extended-plane point. Reflections over unbounded gaps and the trace
// bookkeeping touch infinity exactly, so it is a tagged value, not a big
// float.
struct xcpx {
  cpx v{0.0, 0.0};
  bool inf = false;
  xcpx() = default;
  xcpx(cpx z) : v(z) {}
  xcpx(double x) : v(x, 0.0) {}
  static xcpx infinity() {
    xcpx p;
    p.inf = true;
    return p;
  }
  bool finite() const { return !inf; }
};

inline bool approx(double x, double y, double tol = kCompareTol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}
inline bool approx(cpx x, cpx y, double tol = kCompareTol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

// Deterministic sampler built on raw mt19937_64 bits. std::uniform_real_distribution
// is implementation-defined, which would break the byte-identical-output
// contract, so uniforms are derived from the bit stream directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  cpx in_disk(double rmax = 1.0) {
    double r = rmax * std::sqrt(u01());
    double t = 2.0 * kPi * u01();
    return cpx(r * std::cos(t), r * std::sin(t));
  }
  cpx on_circle() {
    double t = 2.0 * kPi * u01();
    return cpx(std::cos(t), std::sin(t));
  }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace denjoy
