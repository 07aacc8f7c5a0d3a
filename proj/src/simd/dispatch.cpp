#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ifbl/simd/kernels.hpp"

namespace ifbl::simd {
namespace {

bool cpu_has_avx2() {
#if defined(IFBL_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_table() {
  if (const char* forced = std::getenv("IFBL_SIMD"); forced && std::string(forced) == "scalar") {
    return detail::kScalarTable;
  }
#if defined(IFBL_WITH_AVX2)
  if (cpu_has_avx2()) return detail::kAvx2Table;
#endif
#if defined(IFBL_WITH_NEON)
  return detail::kNeonTable;
#endif
  return detail::kScalarTable;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("simd kernel: operand lengths differ");
}

}  // namespace

const KernelTable* kernels_for(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return &detail::kScalarTable;
    case Backend::Avx2:
#if defined(IFBL_WITH_AVX2)
      if (cpu_has_avx2()) return &detail::kAvx2Table;
#endif
      return nullptr;
    case Backend::Neon:
#if defined(IFBL_WITH_NEON)
      return &detail::kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& kernels() {
  static const KernelTable& table = select_table();
  return table;
}

Backend active_backend() { return kernels().backend; }

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size());
  return kernels().trapezoid(x.data(), y.data(), x.size());
}

std::vector<double> pointwise_max(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  std::vector<double> out(a.size());
  kernels().pointwise_max(a.data(), b.data(), out.data(), a.size());
  return out;
}

std::vector<double> pointwise_min(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  std::vector<double> out(a.size());
  kernels().pointwise_min(a.data(), b.data(), out.data(), a.size());
  return out;
}

std::vector<double> one_minus(std::span<const double> a) {
  std::vector<double> out(a.size());
  kernels().one_minus(a.data(), out.data(), a.size());
  return out;
}

double max_pair_sum(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return kernels().max_pair_sum(a.data(), b.data(), a.size());
}

}  // namespace ifbl::simd
