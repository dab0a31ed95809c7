#pragma once

// Vector kernels over the ring Z_2^64. All arithmetic wraps modulo 2^64;
// this is the exactness the masking protocols and the fixed-point moment
// accumulation rely on, so every backend must agree bit for bit.
//
// A scalar reference implementation is always available. On x86-64 an AVX2
// variant is selected at runtime when the CPU supports it; the two are
// equivalence-tested against each other. Set PPFS_KERNEL_BACKEND=scalar in
// the environment to pin the reference path.

#include <cstddef>
#include <cstdint>
#include <span>

namespace ppfs::kernels {

struct Backend {
  const char* name;
  // sum(a) mod 2^64
  std::uint64_t (*sum_u64)(const std::uint64_t* a, std::size_t n);
  // dot(a, b) mod 2^64
  std::uint64_t (*dot_u64)(const std::uint64_t* a, const std::uint64_t* b,
                           std::size_t n);
  // out[i] = a[i] + b[i] mod 2^64
  void (*add_u64)(const std::uint64_t* a, const std::uint64_t* b,
                  std::uint64_t* out, std::size_t n);
  // out[i] = a[i] - b[i] mod 2^64
  void (*sub_u64)(const std::uint64_t* a, const std::uint64_t* b,
                  std::uint64_t* out, std::size_t n);
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
bool avx2_supported();
#endif

// Backend chosen at first use: AVX2 if the CPU has it, otherwise scalar.
const Backend& active_backend();

// Convenience wrappers over the active backend.
inline std::uint64_t sum_mod64(std::span<const std::uint64_t> a) {
  return active_backend().sum_u64(a.data(), a.size());
}

inline std::uint64_t dot_mod64(std::span<const std::uint64_t> a,
                               std::span<const std::uint64_t> b) {
  return active_backend().dot_u64(a.data(), b.data(), a.size());
}

inline void add_mod64(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b,
                      std::span<std::uint64_t> out) {
  active_backend().add_u64(a.data(), b.data(), out.data(), a.size());
}

inline void sub_mod64(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b,
                      std::span<std::uint64_t> out) {
  active_backend().sub_u64(a.data(), b.data(), out.data(), a.size());
}

}  // namespace ppfs::kernels
