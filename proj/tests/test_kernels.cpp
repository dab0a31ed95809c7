#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "ppfs/kernels.hpp"

using namespace ppfs::kernels;

namespace {

std::vector<std::uint64_t> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = rng();
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match a widening reference") {
  std::mt19937_64 rng(7);
  const auto& s = scalar_backend();
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_vec(rng, 23);
    auto b = random_vec(rng, 23);
    unsigned __int128 sum = 0, dot = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sum += a[i];
      dot += static_cast<unsigned __int128>(a[i]) * b[i];
    }
    CHECK(s.sum_u64(a.data(), a.size()) == static_cast<std::uint64_t>(sum));
    CHECK(s.dot_u64(a.data(), b.data(), a.size()) ==
          static_cast<std::uint64_t>(dot));
  }
}

TEST_CASE("wrap-around is exact mod 2^64") {
  const auto& s = scalar_backend();
  std::uint64_t max = ~0ull;
  std::uint64_t a[2] = {max, 3};
  CHECK(s.sum_u64(a, 2) == 2);  // (2^64-1) + 3 = 2 mod 2^64
  std::uint64_t x[1] = {max};
  std::uint64_t y[1] = {max};
  // (2^64-1)^2 = 2^128 - 2^65 + 1 = 1 mod 2^64
  CHECK(s.dot_u64(x, y, 1) == 1);
  std::uint64_t out[1];
  s.sub_u64(x, y, out, 1);
  CHECK(out[0] == 0);
  std::uint64_t zero[1] = {0};
  s.sub_u64(zero, y, out, 1);
  CHECK(out[0] == 1);  // 0 - (2^64-1) = 1 mod 2^64
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 backend agrees with scalar bit for bit") {
  if (!avx2_supported()) return;
  const auto& s = scalar_backend();
  const auto& v = avx2_backend();
  std::mt19937_64 rng(1234);
  // Lengths spanning empty, sub-lane, lane-aligned and ragged tails.
  for (std::size_t n = 0; n <= 67; ++n) {
    auto a = random_vec(rng, n);
    auto b = random_vec(rng, n);
    CHECK(s.sum_u64(a.data(), n) == v.sum_u64(a.data(), n));
    CHECK(s.dot_u64(a.data(), b.data(), n) == v.dot_u64(a.data(), b.data(), n));
    std::vector<std::uint64_t> out_s(n), out_v(n);
    s.add_u64(a.data(), b.data(), out_s.data(), n);
    v.add_u64(a.data(), b.data(), out_v.data(), n);
    CHECK(out_s == out_v);
    s.sub_u64(a.data(), b.data(), out_s.data(), n);
    v.sub_u64(a.data(), b.data(), out_v.data(), n);
    CHECK(out_s == out_v);
  }
}

TEST_CASE("avx2 64-bit product handles high-bit operands") {
  if (!avx2_supported()) return;
  const auto& s = scalar_backend();
  const auto& v = avx2_backend();
  // Values with set high halves stress the 32x32 decomposition.
  std::vector<std::uint64_t> a = {0xFFFFFFFF00000001ull, 0x8000000000000000ull,
                                  0xDEADBEEFCAFEBABEull, 0x00000001FFFFFFFFull,
                                  0xFFFFFFFFFFFFFFFFull},
                             b = {0xFFFFFFFFFFFFFFFFull, 0x8000000000000001ull,
                                  0x0123456789ABCDEFull, 0xFFFFFFFF00000000ull,
                                  0xFFFFFFFFFFFFFFFFull};
  CHECK(s.dot_u64(a.data(), b.data(), a.size()) ==
        v.dot_u64(a.data(), b.data(), a.size()));
}
#endif

TEST_CASE("active backend is one of the known implementations") {
  const auto& active = active_backend();
  bool known = std::string_view(active.name) == "scalar";
#if defined(__x86_64__) || defined(_M_X64)
  known = known || std::string_view(active.name) == "avx2";
#endif
  CHECK(known);
}
