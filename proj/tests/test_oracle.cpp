#include <random>

#include "doctest.h"
#include "ppfs/oracle.hpp"
#include "support.hpp"

using namespace ppfs;

TEST_CASE("brute-force dependency degrees on the walking table") {
  auto t = walk_table();
  CHECK(oracle::brute_force_gamma(t, std::vector<std::size_t>{}).str() ==
        "0/1");
  CHECK(oracle::brute_force_gamma(t, std::vector<std::size_t>{0}).str() ==
        "2/7");
  CHECK(oracle::brute_force_gamma(t, std::vector<std::size_t>{1}).str() ==
        "2/7");
  CHECK(oracle::brute_force_gamma(t, std::vector<std::size_t>{0, 1}).str() ==
        "5/7");
}

TEST_CASE("all-distinct rows are fully dependent on the full attribute set") {
  DecisionTable t({"a0", "a1"}, "class");
  t.add_row({"v0", "v0"}, "c0");
  t.add_row({"v0", "v1"}, "c1");
  t.add_row({"v1", "v0"}, "c0");
  t.add_row({"v1", "v1"}, "c1");
  auto g = oracle::brute_force_gamma(t, std::vector<std::size_t>{0, 1});
  CHECK(g.certain());
  CHECK(g.str() == "1/1");
}

TEST_CASE("both dependency implementations agree on 1000 random inputs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    auto t = random_table(rng, 1 + rng() % 5, 1 + rng() % 16, 1 + rng() % 3,
                          2 + rng() % 2);
    std::vector<std::size_t> attrs;
    for (std::size_t a = 0; a < t.n_attributes(); ++a)
      if (rng() & 1) attrs.push_back(a);
    auto bf = oracle::brute_force_gamma(t, attrs);
    auto lib = gamma(t, attrs);
    CHECK(bf.num == lib.num);  // same unreduced counts, not just same value
    CHECK(bf.den == lib.den);
  }
}

TEST_CASE("verify_run passes the worked two-party splits") {
  auto t = walk_table();
  auto hp = oracle::verify_run(split_horizontal(t, std::vector<std::size_t>{4, 3}), 1);
  CHECK(hp.pass());
  CHECK(hp.gammas_match);
  CHECK(hp.reducts_match);
  CHECK(hp.audit_clean);
  CHECK(hp.failures.empty());
  REQUIRE(hp.subsets.size() == 4);
  CHECK(hp.subsets[3].distributed.str() == "5/7");
  CHECK(hp.partition_description == "horizontal rows 4|3");

  auto vp = oracle::verify_run(split_vertical(t, {{0}, {1}}), 1);
  CHECK(vp.pass());
  CHECK(vp.partition_description == "vertical attrs 0|1");
  // same underlying table either way
  CHECK(vp.table_digest == hp.table_digest);
}

TEST_CASE("verify_run flags a corrupted party with the subset it skewed") {
  auto t = walk_table();
  auto rep = oracle::verify_run(
      split_horizontal(t, std::vector<std::size_t>{4, 3}), 1, 0);
  CHECK(!rep.pass());
  CHECK(!rep.gammas_match);
  REQUIRE(!rep.failures.empty());
  CHECK(rep.failures[0] == "subset {0}: distributed 3/7, reference 2/7");

  auto vrep =
      oracle::verify_run(split_vertical(t, {{0}, {1}}), 1, 0);
  CHECK(!vrep.pass());
  CHECK(vrep.failures[0] == "subset {0}: distributed 3/7, reference 2/7");
}

TEST_CASE("verify_run is deterministic in its inputs") {
  auto t = walk_table();
  auto part = split_horizontal(t, std::vector<std::size_t>{2, 2, 3});
  auto a = oracle::verify_run(part, 423);
  auto b = oracle::verify_run(part, 423);
  CHECK(a.table_digest == b.table_digest);
  CHECK(a.messages == b.messages);
  CHECK(a.bytes == b.bytes);
  CHECK(a.pass() == b.pass());
}

TEST_CASE("fuzz campaign: every random case certifies") {
  auto out = oracle::fuzz_campaign(7, 150);
  CHECK(out.cases == 150);
  for (const auto& note : out.notes) MESSAGE(note);
  CHECK(out.failures == 0);
}
