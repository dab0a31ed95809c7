#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppfs/decision_table.hpp"

namespace ppfs {

enum class PartitionMode { horizontal, vertical };
const char* to_string(PartitionMode m);

// One party's slice of the data plus the bookkeeping that relates it back to
// the source table. Horizontal: object_ids are the owned global rows and
// attribute_ids covers every attribute. Vertical: object_ids is 0..n-1 for
// every party (shared row alignment) and attribute_ids are the owned columns.
struct PartyView {
  DecisionTable local;
  std::vector<std::uint32_t> object_ids;
  std::vector<std::size_t> attribute_ids;
};

struct Partition {
  PartitionMode mode;
  std::vector<PartyView> views;
  std::size_t party_count() const { return views.size(); }
};

// Contiguous row ranges of the given sizes; sizes must sum to the object
// count and name at least two parties. Zero-sized fragments are legal.
Partition split_horizontal(const DecisionTable& t,
                           std::span<const std::size_t> cut_counts);

// Arbitrary row ownership for stress tests: assignment[p] lists party p's
// global rows; the sets must partition the universe.
Partition split_horizontal_assigned(
    const DecisionTable& t,
    const std::vector<std::vector<std::uint32_t>>& assignment);

// groups[p] lists party p's attribute indices; disjoint cover required. The
// decision column is replicated to every party and rows keep their order.
// Empty groups are legal.
Partition split_vertical(const DecisionTable& t,
                         const std::vector<std::vector<std::size_t>>& groups);

// Rebuild the source table; the inverse of any split above.
DecisionTable merge(const Partition& p);

// One-line shape summary for reports: "horizontal rows 4|3",
// "vertical attrs 0,2|1".
std::string describe(const Partition& p);

// "a,b,c" -> sizes; "a1,a2|a3" -> attribute name groups resolved elsewhere.
std::vector<std::size_t> parse_cuts(const std::string& s);
std::vector<std::vector<std::string>> parse_groups(const std::string& s);

}  // namespace ppfs
