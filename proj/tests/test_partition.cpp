#include <random>
#include <sstream>

#include "doctest.h"
#include "ppfs/csv.hpp"
#include "ppfs/errors.hpp"
#include "ppfs/partition.hpp"
#include "support.hpp"

using namespace ppfs;

TEST_CASE("csv round trip with quoting") {
  std::stringstream ss(
      "a,b,class\r\n"
      "1,\"x,y\",p\n"
      "2,\"he said \"\"hi\"\"\",q\n");
  auto csv = parse_csv(ss);
  REQUIRE(csv.header == std::vector<std::string>{"a", "b", "class"});
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.rows[0][1] == "x,y");
  CHECK(csv.rows[1][1] == "he said \"hi\"");
}

TEST_CASE("csv rejects malformed input with located errors") {
  auto parse = [](const char* text) {
    std::stringstream ss(text);
    return parse_csv(ss);
  };
  CHECK_THROWS_WITH_AS(parse("a,b\n1\n"), doctest::Contains("row 1"),
                       IngestError);
  CHECK_THROWS_WITH_AS(parse("a,a\n1,2\n"), doctest::Contains("duplicate"),
                       IngestError);
  CHECK_THROWS_WITH_AS(parse(""), doctest::Contains("empty"), IngestError);
  CHECK_THROWS_WITH_AS(parse("a,b\n1,\n"), doctest::Contains("empty cell"),
                       IngestError);
}

TEST_CASE("class column selection by name, index and default") {
  std::stringstream ss("x,y,z\n1,2,p\n");
  auto csv = parse_csv(ss);
  CHECK(resolve_column(csv.header, "") == 2);
  CHECK(resolve_column(csv.header, "y") == 1);
  CHECK(resolve_column(csv.header, "0") == 0);
  CHECK_THROWS_AS(resolve_column(csv.header, "nope"), IngestError);
  CHECK_THROWS_AS(resolve_column(csv.header, "9"), IngestError);
}

TEST_CASE("continuous columns are rejected unless binned") {
  std::stringstream ss("f,class\n0.5,p\n1.5,q\n2.5,p\n");
  auto csv = parse_csv(ss);
  CHECK_THROWS_WITH_AS(table_from_csv(csv, ""),
                       doctest::Contains("continuous"), IngestError);
  auto t = table_from_csv(csv, "", 2);
  CHECK(t.raw_value(0, 0) == "b0");
  CHECK(t.raw_value(1, 0) == "b1");
  CHECK(t.raw_value(2, 0) == "b1");
}

TEST_CASE("numeric view for the eigen backend") {
  std::stringstream ss("f,g,class\n1,2.5,p\n3,4.5,q\n");
  auto csv = parse_csv(ss);
  auto t = numeric_from_csv(csv, "class");
  REQUIRE(t.feature_names == std::vector<std::string>{"f", "g"});
  CHECK(t.columns[1][0] == 2.5);
  std::stringstream bad("f,class\nok,p\n");
  auto bcsv = parse_csv(bad);
  CHECK_THROWS_WITH_AS(numeric_from_csv(bcsv, ""), doctest::Contains("'f'"),
                       IngestError);
}

TEST_CASE("horizontal split of the walking table") {
  auto t = walk_table();
  std::vector<std::size_t> cuts{4, 3};
  auto part = split_horizontal(t, cuts);
  REQUIRE(part.party_count() == 2);
  CHECK(part.views[0].local.n_objects() == 4);
  CHECK(part.views[1].local.n_objects() == 3);
  CHECK(part.views[0].local.raw_value(3, 1) == "1-25");   // x4 LEMS
  CHECK(part.views[1].local.raw_decision(1) == "Yes");    // x6
  CHECK(part.views[1].object_ids == std::vector<std::uint32_t>{4, 5, 6});
  // both fragments carry the full schema
  CHECK(part.views[1].local.attribute_names() == t.attribute_names());
}

TEST_CASE("vertical split of the walking table") {
  auto t = walk_table();
  auto part = split_vertical(t, {{0}, {1}});
  REQUIRE(part.party_count() == 2);
  CHECK(part.views[0].local.attribute_names() ==
        std::vector<std::string>{"Age"});
  CHECK(part.views[1].local.attribute_names() ==
        std::vector<std::string>{"LEMS"});
  // decision replicated, object order preserved
  for (std::uint32_t o = 0; o < 7; ++o) {
    CHECK(part.views[0].local.raw_decision(o) == t.raw_decision(o));
    CHECK(part.views[1].local.raw_decision(o) == t.raw_decision(o));
  }
  CHECK(part.views[0].local.raw_value(5, 0) == "16-30");  // x6 Age
  CHECK(part.views[1].local.raw_value(5, 0) == "26-49");  // x6 LEMS
}

TEST_CASE("split validation") {
  auto t = walk_table();
  std::vector<std::size_t> one{7};
  CHECK_THROWS_AS(split_horizontal(t, one), ConfigError);
  std::vector<std::size_t> moar{4, 4};
  CHECK_THROWS_AS(split_horizontal(t, moar), ConfigError);
  CHECK_THROWS_AS(split_vertical(t, {{0}, {0, 1}}), ConfigError);
  CHECK_THROWS_AS(split_vertical(t, {{0}, {}}), ConfigError);  // 1 uncovered
  // zero-sized fragments are fine
  std::vector<std::size_t> zero{0, 7};
  CHECK(split_horizontal(t, zero).views[0].local.n_objects() == 0);
  auto vp = split_vertical(t, {{0, 1}, {}});
  CHECK(vp.views[1].local.n_attributes() == 0);
}

namespace {

bool tables_equal(const DecisionTable& a, const DecisionTable& b) {
  if (a.n_objects() != b.n_objects() || a.n_attributes() != b.n_attributes())
    return false;
  if (a.attribute_names() != b.attribute_names()) return false;
  for (std::uint32_t o = 0; o < a.n_objects(); ++o) {
    if (a.raw_decision(o) != b.raw_decision(o)) return false;
    for (std::size_t c = 0; c < a.n_attributes(); ++c)
      if (a.raw_value(o, c) != b.raw_value(o, c)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("split then merge is the identity") {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_table(rng, 2 + trial % 4, 5 + trial % 20, 3, 2);
    std::size_t parties = 2 + trial % 3;

    // horizontal: random cuts
    std::vector<std::size_t> cuts(parties, 0);
    for (std::size_t o = 0; o < t.n_objects(); ++o) cuts[rng() % parties]++;
    CHECK(tables_equal(merge(split_horizontal(t, cuts)), t));

    // horizontal: scrambled ownership
    std::vector<std::vector<std::uint32_t>> assign(parties);
    for (std::uint32_t o = 0; o < t.n_objects(); ++o)
      assign[rng() % parties].push_back(o);
    CHECK(tables_equal(merge(split_horizontal_assigned(t, assign)), t));

    // vertical: random disjoint cover
    std::vector<std::vector<std::size_t>> groups(parties);
    for (std::size_t a = 0; a < t.n_attributes(); ++a)
      groups[rng() % parties].push_back(a);
    CHECK(tables_equal(merge(split_vertical(t, groups)), t));
  }
}

TEST_CASE("cut and group flag parsing") {
  CHECK(parse_cuts("4,3") == std::vector<std::size_t>{4, 3});
  CHECK_THROWS_AS(parse_cuts("4,x"), ConfigError);
  auto g = parse_groups("Age|LEMS");
  REQUIRE(g.size() == 2);
  CHECK(g[0] == std::vector<std::string>{"Age"});
  auto g2 = parse_groups("a,b|c|d,e");
  CHECK(g2.size() == 3);
  CHECK(g2[2] == std::vector<std::string>{"d", "e"});
}
