#include "ifbl/simd/kernels.hpp"

#include <algorithm>
#include <limits>

namespace ifbl::simd {
namespace {

double trapezoid_scalar(const double* x, const double* y, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  }
  return sum;
}

void max_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(a[i], b[i]);
}

void min_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(a[i], b[i]);
}

void one_minus_scalar(const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 - a[i];
}

double max_pair_sum_scalar(const double* a, const double* b, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, a[i] + b[i]);
  return best;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Backend::Scalar,  trapezoid_scalar,    max_scalar,
                               min_scalar,       one_minus_scalar,    max_pair_sum_scalar};
}  // namespace detail

}  // namespace ifbl::simd
