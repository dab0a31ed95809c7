#pragma once

// Distributed forward selection over partitioned tables. Every party drives
// its own copy of the shared GreedyLoop; what differs is where a subset's
// dependency degree comes from.
//
// Horizontal: each party computes its local positive count, parties swap
// keyed conflict fingerprints pairwise to find locally-positive objects that
// some other fragment contradicts, and two secure sums per candidate
// aggregate (positive, invalidated) counts. gamma = (pos - inv) / |U| with
// |U| itself a session-start secure sum.
//
// Vertical: parties share impure-block labels (keyed tags, not values) for
// the current reduct. A candidate is scored entirely by its owning party,
// which refines its labeled blocks by the candidate column and announces
// gamma; the winner's refined labels are broadcast as the next state.
//
// Message budget, horizontal, p parties:
//   session:       1 Control hello + (p+1) MaskedSum
//   per candidate: p(p-1) FingerprintSet + 2(p+1) MaskedSum + 1 CandidateGamma
//   per selection: 1 Control;  finish: 1 Control
// Vertical: 1 Control hello; 1 CandidateGamma per candidate; 1 Control +
// 1 BlockLabels per selection; 1 Control at finish.

#include <cstdint>
#include <optional>
#include <vector>

#include "ppfs/decision_table.hpp"
#include "ppfs/digest.hpp"
#include "ppfs/netsim.hpp"
#include "ppfs/partition.hpp"
#include "ppfs/rough.hpp"
#include "ppfs/task.hpp"

namespace ppfs::proto {

// The attribute slot of a CandidateGamma message for the empty set.
inline constexpr std::uint64_t kEmptySubset = ~0ull;

// Control message codes.
inline constexpr std::uint64_t kHello = 0;
inline constexpr std::uint64_t kSelected = 2;
inline constexpr std::uint64_t kFinished = 3;

// Public session metadata every engine starts from. The harness hands this
// out the same way it installs the session key; none of it is secret (class
// labels are announced structure, owners come from the partition shape), but
// none of it may show up in payloads either.
struct SessionConfig {
  PartitionMode mode = PartitionMode::horizontal;
  std::size_t n_attributes = 0;
  std::vector<std::string> class_alphabet;     // sorted, global
  std::vector<std::uint32_t> attribute_owner;  // vertical only: attr -> party
  // Test hook: this party misbehaves (flips outgoing fingerprint tags /
  // inflates its gamma announcements) so detector tests have a live target.
  std::optional<std::uint32_t> corrupt_party;
};

Task<QuickReductResult> hp_party(PartyContext& ctx, const PartyView& view,
                                 const SessionConfig& cfg);
Task<QuickReductResult> vp_party(PartyContext& ctx, const PartyView& view,
                                 const SessionConfig& cfg);

// Session handshake shared by every engine family: party 0 broadcasts its
// 16-byte session digest, everyone else aborts with `mismatch` unless their
// own digest agrees.
Task<std::uint64_t> hello_exchange(PartyContext& ctx, const Tag& digest,
                                   const char* mismatch);

// One label-refinement step of the vertical protocol: split every labeled
// (impure) block by the given local column, relabel the still-impure pieces,
// drop labels from pieces that became pure. Pure objects stay unlabeled.
struct Refinement {
  std::vector<std::optional<Tag>> labels;
  std::uint64_t impure_objects = 0;
  std::vector<std::vector<std::uint32_t>> impure_blocks;  // sorted members
};
Refinement refine_impure_blocks(const std::vector<std::optional<Tag>>& state,
                                const DecisionTable& frag,
                                std::size_t local_attr,
                                std::size_t global_attr, const Tag& key);

// Labels for the empty reduct: one shared block label when the decision
// column is mixed, no labels when it is uniform. Derivable by every vertical
// party without communication since the decision column is replicated.
std::vector<std::optional<Tag>> initial_labels(const DecisionTable& frag,
                                               const Tag& key);

struct DistributedRun {
  QuickReductResult result;  // asserted identical across parties
  Transcript transcript;
};

// Build the session, run one engine per party, check the parties agreed.
DistributedRun distributed_quick_reduct(
    const Partition& partition, std::uint64_t seed,
    std::optional<std::uint32_t> corrupt_party = std::nullopt);

}  // namespace ppfs::proto
