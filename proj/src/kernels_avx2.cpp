// AVX2 variants of the Z_2^64 kernels. Built as a separate translation unit
// with -mavx2; only reached after a runtime CPU check.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "ppfs/kernels.hpp"

namespace ppfs::kernels {

namespace {

// Low 64 bits of the 64x64 product per lane. AVX2 has no 64-bit multiply,
// so compose one from 32x32->64 pieces:
//   lo64(a*b) = lo(a)*lo(b) + ((hi(a)*lo(b) + lo(a)*hi(b)) << 32)
inline __m256i mullo_epi64(__m256i a, __m256i b) {
  __m256i a_hi = _mm256_srli_epi64(a, 32);
  __m256i b_hi = _mm256_srli_epi64(b, 32);
  __m256i lo = _mm256_mul_epu32(a, b);
  __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a_hi, b),
                                   _mm256_mul_epu32(a, b_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline std::uint64_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

std::uint64_t avx2_sum(const std::uint64_t* a, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_epi64(
        acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)));
  }
  std::uint64_t tail = 0;
  for (; i < n; ++i) tail += a[i];
  return hsum_epi64(acc) + tail;
}

std::uint64_t avx2_dot(const std::uint64_t* a, const std::uint64_t* b,
                       std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, mullo_epi64(va, vb));
  }
  std::uint64_t tail = 0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum_epi64(acc) + tail;
}

void avx2_add(const std::uint64_t* a, const std::uint64_t* b,
              std::uint64_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        _mm256_add_epi64(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void avx2_sub(const std::uint64_t* a, const std::uint64_t* b,
              std::uint64_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        _mm256_sub_epi64(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

const Backend kAvx2{"avx2", avx2_sum, avx2_dot, avx2_add, avx2_sub};

}  // namespace

const Backend& avx2_backend() { return kAvx2; }

}  // namespace ppfs::kernels

#endif  // x86-64
