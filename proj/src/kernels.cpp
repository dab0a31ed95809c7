#include "ppfs/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ppfs::kernels {

namespace {

std::uint64_t scalar_sum(const std::uint64_t* a, std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

std::uint64_t scalar_dot(const std::uint64_t* a, const std::uint64_t* b,
                         std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void scalar_add(const std::uint64_t* a, const std::uint64_t* b,
                std::uint64_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void scalar_sub(const std::uint64_t* a, const std::uint64_t* b,
                std::uint64_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

const Backend kScalar{"scalar", scalar_sum, scalar_dot, scalar_add,
                      scalar_sub};

const Backend& pick_backend() {
  const char* forced = std::getenv("PPFS_KERNEL_BACKEND");
  if (forced && std::strcmp(forced, "scalar") == 0) return kScalar;
#if defined(__x86_64__) || defined(_M_X64)
  if (forced && std::strcmp(forced, "avx2") == 0) return avx2_backend();
  if (avx2_supported()) return avx2_backend();
#endif
  return kScalar;
}

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const Backend& active_backend() {
  static const Backend& chosen = pick_backend();
  return chosen;
}

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() { return __builtin_cpu_supports("avx2"); }
#endif

}  // namespace ppfs::kernels
