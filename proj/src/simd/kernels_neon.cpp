// AArch64 Advanced SIMD variants; two doubles per lane group.
#include "ifbl/simd/kernels.hpp"

#include <arm_neon.h>

#include <algorithm>
#include <limits>

namespace ifbl::simd {
namespace {

double trapezoid_neon(const double* x, const double* y, std::size_t n) {
  if (n < 2) return 0.0;
  const std::size_t segments = n - 1;
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= segments; i += 2) {
    float64x2_t dx = vsubq_f64(vld1q_f64(x + i + 1), vld1q_f64(x + i));
    float64x2_t sy = vaddq_f64(vld1q_f64(y + i), vld1q_f64(y + i + 1));
    acc = vfmaq_f64(acc, dx, sy);
  }
  double sum = 0.5 * vaddvq_f64(acc);
  for (; i < segments; ++i) sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return sum;
}

void max_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmaxq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = std::max(a[i], b[i]);
}

void min_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vminq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = std::min(a[i], b[i]);
}

void one_minus_neon(const double* a, double* out, std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(one, vld1q_f64(a + i)));
  for (; i < n; ++i) out[i] = 1.0 - a[i];
}

double max_pair_sum_neon(const double* a, const double* b, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 2) {
    float64x2_t acc = vdupq_n_f64(best);
    for (; i + 2 <= n; i += 2) {
      acc = vmaxq_f64(acc, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    best = vmaxvq_f64(acc);
  }
  for (; i < n; ++i) best = std::max(best, a[i] + b[i]);
  return best;
}

}  // namespace

namespace detail {
const KernelTable kNeonTable{Backend::Neon, trapezoid_neon,  max_neon,
                             min_neon,      one_minus_neon,  max_pair_sum_neon};
}  // namespace detail

}  // namespace ifbl::simd
