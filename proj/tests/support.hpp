#pragma once

// Shared fixtures for the test binaries.

#include <random>
#include <string>
#include <vector>

#include "ppfs/decision_table.hpp"

// The seven-object walking-ability table used as the worked golden throughout
// the tests: two conditional attributes (Age, LEMS) and a yes/no decision.
inline ppfs::DecisionTable walk_table() {
  ppfs::DecisionTable t({"Age", "LEMS"}, "Walk");
  t.add_row({"16-30", "50"}, "Yes");     // x1
  t.add_row({"16-30", "0"}, "No");       // x2
  t.add_row({"31-45", "1-25"}, "No");    // x3
  t.add_row({"31-45", "1-25"}, "Yes");   // x4
  t.add_row({"46-60", "26-49"}, "No");   // x5
  t.add_row({"16-30", "26-49"}, "Yes");  // x6
  t.add_row({"46-60", "26-49"}, "No");   // x7
  return t;
}

inline ppfs::DecisionTable random_table(std::mt19937_64& rng,
                                        std::size_t n_attrs,
                                        std::size_t n_objects,
                                        std::size_t n_values,
                                        std::size_t n_classes) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n_attrs; ++a) names.push_back("a" + std::to_string(a));
  ppfs::DecisionTable t(std::move(names), "class");
  std::uniform_int_distribution<std::size_t> val(0, n_values - 1);
  std::uniform_int_distribution<std::size_t> cls(0, n_classes - 1);
  for (std::size_t o = 0; o < n_objects; ++o) {
    std::vector<std::string> row;
    for (std::size_t a = 0; a < n_attrs; ++a)
      row.push_back("v" + std::to_string(val(rng)));
    t.add_row(row, "c" + std::to_string(cls(rng)));
  }
  return t;
}
