#include "denjoy/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace denjoy::kernels {

bool avx2_compiled_in() {
#ifdef DENJOY_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

bool avx2_runtime_ok() {
#if defined(DENJOY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Lane active_lane() {
  static Lane lane = [] {
    const char* e = std::getenv("DENJOY_KERNEL");
    if (e != nullptr) {
      if (std::strcmp(e, "scalar") == 0) return Lane::Scalar;
      if (std::strcmp(e, "avx2") == 0 && avx2_compiled_in() &&
          avx2_runtime_ok())
        return Lane::Avx2;
      return Lane::Scalar;
    }
    return avx2_compiled_in() && avx2_runtime_ok() ? Lane::Avx2 : Lane::Scalar;
  }();
  return lane;
}

const char* lane_name(Lane lane) {
  return lane == Lane::Avx2 ? "avx2" : "scalar";
}

#ifndef DENJOY_HAVE_AVX2
std::size_t best_product_index_avx2(const double* cand, std::size_t n_cand,
                                    const double* re, const double* im,
                                    std::size_t n_pts) {
  return best_product_index_scalar(cand, n_cand, re, im, n_pts);
}
double disk_mass_accumulate_avx2(const double* re, const double* im,
                                 const double* w, std::size_t n, double cre,
                                 double cim, double rr) {
  return disk_mass_accumulate_scalar(re, im, w, n, cre, cim, rr);
}
#endif

std::size_t best_product_index(const double* cand, std::size_t n_cand,
                               const double* re, const double* im,
                               std::size_t n_pts) {
  if (active_lane() == Lane::Avx2)
    return best_product_index_avx2(cand, n_cand, re, im, n_pts);
  return best_product_index_scalar(cand, n_cand, re, im, n_pts);
}

double disk_mass_accumulate(const double* re, const double* im,
                            const double* w, std::size_t n, double cre,
                            double cim, double rr) {
  if (active_lane() == Lane::Avx2)
    return disk_mass_accumulate_avx2(re, im, w, n, cre, cim, rr);
  return disk_mass_accumulate_scalar(re, im, w, n, cre, cim, rr);
}

}  // namespace denjoy::kernels
