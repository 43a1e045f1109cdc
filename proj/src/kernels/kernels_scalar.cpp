#include "denjoy/kernels.hpp"

#include <cmath>

namespace denjoy::kernels {

namespace {

struct ScaledProduct {
  double mantissa = 1.0;
  std::int64_t exponent = 0;
  bool zero = false;

  void renormalize() {
    if (mantissa == 0.0) {
      zero = true;
      return;
    }
    int e = 0;
    mantissa = std::frexp(mantissa, &e);
    exponent += e;
  }

  bool greater_than(const ScaledProduct& o) const {
    if (zero || o.zero) return !zero && o.zero;
    if (exponent != o.exponent) return exponent > o.exponent;
    return mantissa > o.mantissa;
  }
};

}  // namespace

std::size_t best_product_index_scalar(const double* cand, std::size_t n_cand,
                                      const double* re, const double* im,
                                      std::size_t n_pts) {
  std::size_t best = 0;
  ScaledProduct best_prod;
  best_prod.zero = true;
  bool have = false;
  for (std::size_t i = 0; i < n_cand; ++i) {
    ScaledProduct p;
    double x = cand[i];
    for (std::size_t k = 0; k < n_pts; ++k) {
      double dx = x - re[k];
      p.mantissa *= dx * dx + im[k] * im[k];
      if ((k & 7u) == 7u) p.renormalize();
      if (p.zero) break;
    }
    p.renormalize();
    if (!have || p.greater_than(best_prod)) {
      best = i;
      best_prod = p;
      have = true;
    }
  }
  return best;
}

double disk_mass_accumulate_scalar(const double* re, const double* im,
                                   const double* w, std::size_t n,
                                   double cre, double cim, double rr) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double dx = re[k] - cre;
    double dy = im[k] - cim;
    if (dx * dx + dy * dy <= rr) acc += w[k];
  }
  return acc;
}

}  // namespace denjoy::kernels
