#pragma once

// Grid arithmetic used by the intuitionistic fuzzy set layer. Every kernel has
// a scalar reference implementation; vectorized variants are selected once at
// startup from what the CPU reports.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ifbl::simd {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  // sum_i (x[i+1]-x[i]) * (y[i]+y[i+1]) / 2 over n samples
  double (*trapezoid)(const double* x, const double* y, std::size_t n);
  void (*pointwise_max)(const double* a, const double* b, double* out, std::size_t n);
  void (*pointwise_min)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = 1 - a[i]
  void (*one_minus)(const double* a, double* out, std::size_t n);
  // max_i (a[i] + b[i]); -inf when n == 0
  double (*max_pair_sum)(const double* a, const double* b, std::size_t n);
};

/// Table for a specific backend, or nullptr if it was not compiled in or the
/// CPU lacks the instructions.
const KernelTable* kernels_for(Backend backend);

/// Active table. Honors IFBL_SIMD=scalar in the environment.
const KernelTable& kernels();

Backend active_backend();
std::string_view backend_name(Backend backend);

// Span front-ends over the active table.
double trapezoid(std::span<const double> x, std::span<const double> y);
std::vector<double> pointwise_max(std::span<const double> a, std::span<const double> b);
std::vector<double> pointwise_min(std::span<const double> a, std::span<const double> b);
std::vector<double> one_minus(std::span<const double> a);
double max_pair_sum(std::span<const double> a, std::span<const double> b);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(IFBL_WITH_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(IFBL_WITH_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace ifbl::simd
