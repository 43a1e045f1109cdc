#pragma once
#include <cstddef>
#include <cstdint>

// Hot loops shared by the capacity scan and the measure accumulators.
// Two lanes: a scalar reference and an AVX2 variant picked at runtime.
// The product scan is bit-identical across lanes (vectorized across
// candidates, sequential over points); the mass accumulator reorders the
// sum and is only equal up to roundoff.

namespace denjoy::kernels {

enum class Lane { Scalar, Avx2 };

bool avx2_compiled_in();
bool avx2_runtime_ok();
Lane active_lane();  // honours DENJOY_KERNEL=scalar|avx2
const char* lane_name(Lane lane);

// Index of the candidate x maximizing prod_k ((x - re[k])^2 + im[k]^2).
// Ties break toward the lowest index. Products are tracked as
// mantissa-in-[0.5,1) times 2^exponent so long point lists cannot
// underflow to an uninformative zero.
std::size_t best_product_index(const double* cand, std::size_t n_cand,
                               const double* re, const double* im,
                               std::size_t n_pts);

// Sum of w[k] over points with (re[k]-cre)^2 + (im[k]-cim)^2 <= rr.
double disk_mass_accumulate(const double* re, const double* im,
                            const double* w, std::size_t n,
                            double cre, double cim, double rr);

std::size_t best_product_index_scalar(const double* cand, std::size_t n_cand,
                                      const double* re, const double* im,
                                      std::size_t n_pts);
double disk_mass_accumulate_scalar(const double* re, const double* im,
                                   const double* w, std::size_t n,
                                   double cre, double cim, double rr);
std::size_t best_product_index_avx2(const double* cand, std::size_t n_cand,
                                    const double* re, const double* im,
                                    std::size_t n_pts);
double disk_mass_accumulate_avx2(const double* re, const double* im,
                                 const double* w, std::size_t n,
                                 double cre, double cim, double rr);

}  // namespace denjoy::kernels
