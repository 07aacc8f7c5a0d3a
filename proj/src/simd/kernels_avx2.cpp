// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "ifbl/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace ifbl::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, shuf));
}

double trapezoid_avx2(const double* x, const double* y, std::size_t n) {
  if (n < 2) return 0.0;
  const std::size_t segments = n - 1;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= segments; i += 4) {
    __m256d x0 = _mm256_loadu_pd(x + i);
    __m256d x1 = _mm256_loadu_pd(x + i + 1);
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 1);
    acc = _mm256_fmadd_pd(_mm256_sub_pd(x1, x0), _mm256_add_pd(y0, y1), acc);
  }
  double sum = 0.5 * hsum(acc);
  for (; i < segments; ++i) sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return sum;
}

// _mm256_max_pd returns the second operand when either is NaN; inputs are
// validated membership degrees so that never matters here.
void max_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = std::max(a[i], b[i]);
}

void min_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = std::min(a[i], b[i]);
}

void one_minus_avx2(const double* a, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(one, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = 1.0 - a[i];
}

double max_pair_sum_avx2(const double* a, const double* b, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_set1_pd(best);
    for (; i + 4 <= n; i += 4) {
      acc = _mm256_max_pd(acc, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    best = hmax(acc);
  }
  for (; i < n; ++i) best = std::max(best, a[i] + b[i]);
  return best;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Backend::Avx2, trapezoid_avx2,  max_avx2,
                             min_avx2,      one_minus_avx2,  max_pair_sum_avx2};
}  // namespace detail

}  // namespace ifbl::simd
