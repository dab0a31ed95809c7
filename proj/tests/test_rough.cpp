#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "ppfs/errors.hpp"
#include "ppfs/rough.hpp"
#include "support.hpp"

using namespace ppfs;

namespace {

// Oracle kept independent of the library: an object is certain iff every
// object agreeing with it on all chosen attributes shares its decision.
DependencyDegree pairwise_gamma(const DecisionTable& t,
                                const std::vector<std::size_t>& attrs) {
  std::uint64_t pos = 0;
  for (std::uint32_t o = 0; o < t.n_objects(); ++o) {
    bool certain = true;
    for (std::uint32_t p = 0; p < t.n_objects() && certain; ++p) {
      bool same = true;
      for (std::size_t a : attrs)
        if (t.value(o, a) != t.value(p, a)) { same = false; break; }
      if (same && t.decision(o) != t.decision(p)) certain = false;
    }
    pos += certain;
  }
  return {pos, t.n_objects()};
}

}  // namespace

TEST_CASE("dependency degrees of the walking table") {
  auto t = walk_table();
  std::vector<std::size_t> age{0}, lems{1}, both{0, 1}, none{};
  CHECK(gamma(t, none) == DependencyDegree{0, 7});
  CHECK(gamma(t, age) == DependencyDegree{2, 7});
  CHECK(gamma(t, lems) == DependencyDegree{2, 7});
  CHECK(gamma(t, both) == DependencyDegree{5, 7});
  CHECK(gamma(t, both).str() == "5/7");
}

TEST_CASE("indiscernibility blocks of the walking table under Age") {
  auto t = walk_table();
  std::vector<std::size_t> age{0};
  auto blocks = indiscernibility_blocks(t, age);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0] == std::vector<std::uint32_t>{0, 1, 5});  // 16-30
  CHECK(blocks[1] == std::vector<std::uint32_t>{2, 3});     // 31-45
  CHECK(blocks[2] == std::vector<std::uint32_t>{4, 6});     // 46-60
  CHECK(positive_region(t, age) == std::vector<std::uint32_t>{4, 6});
}

TEST_CASE("region algebra around the Walk=Yes target") {
  auto t = walk_table();
  std::vector<std::size_t> both{0, 1};
  std::vector<std::uint32_t> yes{0, 3, 5};  // x1, x4, x6
  CHECK(lower_approximation(t, both, yes) == std::vector<std::uint32_t>{0, 5});
  CHECK(upper_approximation(t, both, yes) ==
        std::vector<std::uint32_t>{0, 2, 3, 5});
  CHECK(boundary_region(t, both, yes) == std::vector<std::uint32_t>{2, 3});
  CHECK(negative_region(t, both, yes) == std::vector<std::uint32_t>{1, 4, 6});
}

TEST_CASE("forward selection on the walking table picks Age then LEMS") {
  auto t = walk_table();
  auto r = quick_reduct(t);
  CHECK(r.reduct == std::vector<std::size_t>{0, 1});
  CHECK(r.gamma == DependencyDegree{5, 7});
  CHECK(r.stop == StopReason::converged);
  REQUIRE(r.rounds.size() == 2);
  CHECK(r.rounds[0].attribute == 0);
  CHECK(r.rounds[0].gamma == DependencyDegree{2, 7});
  CHECK(r.rounds[1].attribute == 1);
  CHECK(r.rounds[1].gamma == DependencyDegree{5, 7});
  // empty set first, then 2 candidates, then 1
  REQUIRE(r.evaluations.size() == 4);
  CHECK(r.evaluations[0].attrs.empty());
  CHECK(r.evaluations[0].gamma == DependencyDegree{0, 7});
}

TEST_CASE("rational comparison is exact, not reduced") {
  CHECK(DependencyDegree{4, 8} == DependencyDegree{1, 2});
  CHECK(DependencyDegree{2, 7} < DependencyDegree{5, 7});
  CHECK(DependencyDegree{0, 5} != DependencyDegree{1, 5});
  // magnitudes that would overflow a 64-bit cross product without widening
  CHECK(DependencyDegree{~0ull - 1, ~0ull} < DependencyDegree{~0ull, ~0ull});
}

TEST_CASE("blocks partition the universe") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_table(rng, 3, 20, 3, 2);
    std::vector<std::size_t> attrs{0, 2};
    auto blocks = indiscernibility_blocks(t, attrs);
    std::vector<std::uint32_t> all;
    for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    REQUIRE(all.size() == t.n_objects());
    for (std::uint32_t o = 0; o < t.n_objects(); ++o) CHECK(all[o] == o);
  }
}

TEST_CASE("gamma agrees with the pairwise oracle on random tables") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_table(rng, 4, 15, 3, 3);
    for (std::vector<std::size_t> attrs :
         {std::vector<std::size_t>{}, {0}, {1, 3}, {0, 1, 2, 3}}) {
      CHECK(gamma(t, attrs) == pairwise_gamma(t, attrs));
    }
  }
}

TEST_CASE("gamma is monotone under attribute growth") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = random_table(rng, 5, 18, 2, 2);
    std::vector<std::size_t> chain;
    DependencyDegree prev = gamma(t, chain);
    for (std::size_t a = 0; a < 5; ++a) {
      chain.push_back(a);
      DependencyDegree g = gamma(t, chain);
      CHECK_FALSE(g < prev);
      prev = g;
    }
  }
}

TEST_CASE("lower approximation sits inside the upper") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_table(rng, 3, 16, 3, 2);
    std::vector<std::uint32_t> target;
    for (std::uint32_t o = 0; o < t.n_objects(); ++o)
      if (rng() & 1) target.push_back(o);
    std::vector<std::size_t> attrs{0, 1};
    auto lo = lower_approximation(t, attrs, target);
    auto up = upper_approximation(t, attrs, target);
    CHECK(std::includes(up.begin(), up.end(), lo.begin(), lo.end()));
    auto bnd = boundary_region(t, attrs, target);
    CHECK(lo.size() + bnd.size() == up.size());
    auto neg = negative_region(t, attrs, target);
    CHECK(up.size() + neg.size() == t.n_objects());
  }
}

TEST_CASE("forward selection matches an independent greedy rerun") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = random_table(rng, 5, 14, 2, 2);
    auto r = quick_reduct(t);

    // Re-run the greedy loop with different mechanics: materialize all
    // candidate scores, then take the first maximum.
    std::vector<std::size_t> reduct;
    std::vector<std::size_t> empty;
    DependencyDegree prev = gamma(t, empty);
    if (prev.certain()) {
      CHECK(r.reduct.empty());
      CHECK(r.stop == StopReason::uniform_decision);
      continue;
    }
    while (reduct.size() < t.n_attributes()) {
      std::vector<std::pair<std::size_t, DependencyDegree>> scored;
      for (std::size_t a = 0; a < t.n_attributes(); ++a) {
        if (std::find(reduct.begin(), reduct.end(), a) != reduct.end())
          continue;
        auto cand = reduct;
        cand.push_back(a);
        std::sort(cand.begin(), cand.end());
        scored.emplace_back(a, gamma(t, cand));
      }
      auto best = std::max_element(
          scored.begin(), scored.end(),
          [](const auto& x, const auto& y) { return x.second < y.second; });
      if (!(best->second > prev)) break;
      reduct.push_back(best->first);
      prev = best->second;
    }
    CHECK(r.reduct == reduct);
    CHECK(r.gamma == prev);
  }
}

TEST_CASE("uniform decision column yields the empty reduct") {
  DecisionTable t({"a", "b"}, "class");
  t.add_row({"x", "y"}, "same");
  t.add_row({"z", "y"}, "same");
  auto r = quick_reduct(t);
  CHECK(r.reduct.empty());
  CHECK(r.stop == StopReason::uniform_decision);
  CHECK(r.gamma == DependencyDegree{2, 2});
}

TEST_CASE("contradictory rows converge below certainty") {
  DecisionTable t({"a"}, "class");
  t.add_row({"x"}, "p");
  t.add_row({"x"}, "q");
  t.add_row({"y"}, "p");
  auto r = quick_reduct(t);
  CHECK(r.reduct == std::vector<std::size_t>{0});
  CHECK(r.gamma == DependencyDegree{1, 3});
  CHECK(r.stop == StopReason::converged);  // every attribute taken
}

TEST_CASE("xor-style decisions stall the greedy loop") {
  // Neither attribute helps alone, so the loop stops at the empty set even
  // though the pair would discern everything.
  DecisionTable t({"a", "b"}, "class");
  t.add_row({"0", "0"}, "p");
  t.add_row({"0", "1"}, "q");
  t.add_row({"1", "0"}, "q");
  t.add_row({"1", "1"}, "p");
  auto r = quick_reduct(t);
  CHECK(r.reduct.empty());
  CHECK(r.gamma == DependencyDegree{0, 4});
  CHECK(r.stop == StopReason::no_gain);
  std::vector<std::size_t> both{0, 1};
  CHECK(gamma(t, both) == DependencyDegree{4, 4});
}

TEST_CASE("an empty table is rejected") {
  DecisionTable t({"a"}, "class");
  CHECK_THROWS_AS(quick_reduct(t), ConfigError);
}
