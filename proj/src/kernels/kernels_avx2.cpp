#include "denjoy/kernels.hpp"

#ifdef DENJOY_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace denjoy::kernels {

namespace {

// Same comparison rule as the scalar lane.
bool scaled_greater(double m1, std::int64_t e1, bool z1, double m2,
                    std::int64_t e2, bool z2) {
  if (z1 || z2) return !z1 && z2;
  if (e1 != e2) return e1 > e2;
  return m1 > m2;
}

}  // namespace

std::size_t best_product_index_avx2(const double* cand, std::size_t n_cand,
                                    const double* re, const double* im,
                                    std::size_t n_pts) {
  std::size_t best = 0;
  double best_m = 0.0;
  std::int64_t best_e = 0;
  bool best_z = true;
  bool have = false;

  std::size_t i = 0;
  for (; i + 4 <= n_cand; i += 4) {
    // four candidates per pass; the k-loop stays sequential so every lane
    // performs the exact same multiply chain as the scalar kernel
    __m256d x = _mm256_loadu_pd(cand + i);
    __m256d man = _mm256_set1_pd(1.0);
    alignas(32) double mbuf[4];
    std::int64_t ebuf[4] = {0, 0, 0, 0};
    bool zbuf[4] = {false, false, false, false};
    for (std::size_t k = 0; k < n_pts; ++k) {
      __m256d dx = _mm256_sub_pd(x, _mm256_set1_pd(re[k]));
      __m256d imk = _mm256_set1_pd(im[k]);
      __m256d term =
          _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(imk, imk));
      man = _mm256_mul_pd(man, term);
      if ((k & 7u) == 7u) {
        _mm256_store_pd(mbuf, man);
        for (int l = 0; l < 4; ++l) {
          if (zbuf[l]) continue;
          if (mbuf[l] == 0.0) {
            zbuf[l] = true;
            continue;
          }
          int e = 0;
          mbuf[l] = std::frexp(mbuf[l], &e);
          ebuf[l] += e;
        }
        man = _mm256_load_pd(mbuf);
      }
    }
    _mm256_store_pd(mbuf, man);
    for (int l = 0; l < 4; ++l) {
      if (!zbuf[l]) {
        if (mbuf[l] == 0.0) {
          zbuf[l] = true;
        } else {
          int e = 0;
          mbuf[l] = std::frexp(mbuf[l], &e);
          ebuf[l] += e;
        }
      }
      if (!have || scaled_greater(mbuf[l], ebuf[l], zbuf[l], best_m, best_e,
                                  best_z)) {
        best = i + l;
        best_m = mbuf[l];
        best_e = ebuf[l];
        best_z = zbuf[l];
        have = true;
      }
    }
  }
  if (i < n_cand) {
    std::size_t tail = best_product_index_scalar(cand + i, n_cand - i, re, im,
                                                 n_pts);
    // rerun the tail winner against the vector winner
    double m = 1.0;
    std::int64_t e = 0;
    bool z = false;
    double xv = cand[i + tail];
    for (std::size_t k = 0; k < n_pts; ++k) {
      double dx = xv - re[k];
      m *= dx * dx + im[k] * im[k];
      if ((k & 7u) == 7u) {
        if (m == 0.0) {
          z = true;
          break;
        }
        int ee = 0;
        m = std::frexp(m, &ee);
        e += ee;
      }
    }
    if (!z) {
      if (m == 0.0) {
        z = true;
      } else {
        int ee = 0;
        m = std::frexp(m, &ee);
        e += ee;
      }
    }
    if (!have || scaled_greater(m, e, z, best_m, best_e, best_z))
      best = i + tail;
  }
  return best;
}

double disk_mass_accumulate_avx2(const double* re, const double* im,
                                 const double* w, std::size_t n, double cre,
                                 double cim, double rr) {
  __m256d acc = _mm256_setzero_pd();
  __m256d vcre = _mm256_set1_pd(cre);
  __m256d vcim = _mm256_set1_pd(cim);
  __m256d vrr = _mm256_set1_pd(rr);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(re + k), vcre);
    __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(im + k), vcim);
    __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    __m256d mask = _mm256_cmp_pd(d2, vrr, _CMP_LE_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(w + k)));
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double total = (buf[0] + buf[1]) + (buf[2] + buf[3]);
  for (; k < n; ++k) {
    double dx = re[k] - cre;
    double dy = im[k] - cim;
    if (dx * dx + dy * dy <= rr) total += w[k];
  }
  return total;
}

}  // namespace denjoy::kernels

#endif
