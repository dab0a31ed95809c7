#pragma once

// Reference implementations kept deliberately naive and separate from the
// library path, plus the harness that certifies a distributed run against
// them: every announced dependency degree is recomputed by brute force on
// the merged table, the selection is replayed centrally, and the transcript
// is audited for leaked plaintext.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ppfs/partition.hpp"
#include "ppfs/rough.hpp"

namespace ppfs::oracle {

// Dependency degree by pairwise row comparison over raw strings: an object
// counts iff no row matching it on `attrs` carries a different class. No
// blocks, no interning, no shared code with the indiscernibility machinery.
DependencyDegree brute_force_gamma(const DecisionTable& t,
                                   std::span<const std::size_t> attrs);

struct SubsetComparison {
  std::vector<std::size_t> attrs;
  DependencyDegree distributed;
  DependencyDegree reference;
  bool equal = false;
};

struct EquivalenceReport {
  std::string table_digest;  // canonical fingerprint of the merged table
  std::string partition_description;
  std::vector<SubsetComparison> subsets;
  bool gammas_match = false;
  bool reducts_match = false;
  bool audit_clean = false;
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
  std::vector<std::string> failures;  // one line per defect found
  bool pass() const { return gammas_match && reducts_match && audit_clean; }
};

// Merge the partition, run the distributed selection, and check it three
// ways: per-subset gamma against brute force, reduct and trajectory against
// the centralized loop, transcript against the leakage audit.
EquivalenceReport verify_run(
    const Partition& partition, std::uint64_t seed,
    std::optional<std::uint32_t> corrupt_party = std::nullopt);

// Fuzz domain: 1-8 attributes, 1-30 objects, value alphabet 1-4, class
// alphabet 2-3, 2-5 parties, either partition mode.
DecisionTable fuzz_table(std::mt19937_64& rng);
Partition fuzz_partition(const DecisionTable& t, std::mt19937_64& rng);

struct FuzzOutcome {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> notes;  // first few failure descriptions
};
FuzzOutcome fuzz_campaign(std::uint64_t seed, std::size_t n_cases);

}  // namespace ppfs::oracle
