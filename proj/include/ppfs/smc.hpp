#pragma once

// Simulated semi-honest primitives: ring secure sum, keyed equality
// fingerprints for cross-partition indiscernibility checks, and a two-party
// secure dot product with dealer-assisted masking. All arithmetic is modulo
// 2^64; callers keep true magnitudes below 2^63 so results never alias.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppfs/decision_table.hpp"
#include "ppfs/digest.hpp"
#include "ppfs/netsim.hpp"
#include "ppfs/task.hpp"

namespace ppfs::smc {

// Every party calls this with its local value; all parties return the exact
// total. The initiator folds a random mask into the ring pass and removes it
// before broadcasting, so the transcript holds only masked residues and the
// final (intended) total.
Task<std::uint64_t> secure_sum(PartyContext& ctx, std::uint64_t local,
                               std::uint32_t initiator = 0);

// Keyed PRF over a canonical (attribute ids, raw values, optional class)
// encoding. Global attribute ids plus raw value text keep tags comparable
// across parties whose tables interned values in different orders.
Tag tuple_tag(const Tag& key, std::span<const std::size_t> attr_ids,
              const std::vector<std::string>& values);
Tag conflict_tag(const Tag& key, std::span<const std::size_t> attr_ids,
                 const std::vector<std::string>& values,
                 const std::string& decision);

// One tag per fragment object over (attrs, value tuple, class); sorted and
// deduplicated. Sorting also hides the fragment's row order.
std::vector<Tag> make_conflict_fingerprints(
    const DecisionTable& frag, std::span<const std::size_t> attrs,
    const Tag& key);

std::vector<std::uint8_t> encode_tag_set(const std::vector<Tag>& tags);
std::vector<Tag> decode_tag_set(std::span<const std::uint8_t> payload);

// Cross-party invalidation: a local object is invalidated for `attrs` iff
// some remote fragment holds an equal condition tuple under a different
// class. Probes every foreign class from the shared alphabet against the
// remote tag sets. `cached` limits the scan to objects still invalidatable
// (invalidation only ever shrinks as attributes are added); `invalidated`
// in the result is the next round's cache if this candidate wins.
struct Invalidation {
  std::uint64_t positive_invalidated = 0;  // |invalidated ∩ local positives|
  std::vector<std::uint32_t> invalidated;  // all cached objects that conflict
};
Invalidation count_invalidated(const DecisionTable& frag,
                               std::span<const std::size_t> attrs,
                               std::span<const std::uint32_t> cached,
                               const std::vector<bool>& locally_positive,
                               const std::vector<std::vector<Tag>>& remote_sets,
                               const std::vector<std::string>& class_alphabet,
                               const Tag& key);

// Two-party dot product over matching-length vectors; both sides learn the
// scalar and nothing else (the dealer hands each side correlated masks, see
// PartyContext::dealer_share). Initiator holds a, responder holds b.
Task<std::uint64_t> secure_dot_product_initiator(
    PartyContext& ctx, std::uint32_t peer, std::span<const std::uint64_t> a);
Task<std::uint64_t> secure_dot_product_responder(
    PartyContext& ctx, std::uint32_t peer, std::span<const std::uint64_t> b);

}  // namespace ppfs::smc
