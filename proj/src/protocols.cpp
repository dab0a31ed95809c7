#include "ppfs/protocols.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "ppfs/smc.hpp"
#include "ppfs/tlv.hpp"

namespace ppfs::proto {

namespace {

std::vector<std::uint8_t> control_one(std::uint64_t code) {
  TlvWriter w;
  w.put_u64(code);
  return w.take();
}

std::vector<std::uint8_t> control_two(std::uint64_t code, std::uint64_t v) {
  TlvWriter w;
  w.put_u64(code);
  w.put_u64(v);
  return w.take();
}

std::vector<std::uint8_t> gamma_payload(std::uint64_t attr,
                                        DependencyDegree g) {
  TlvWriter w;
  w.put_u64(attr);
  w.put_u64(g.num);
  w.put_u64(g.den);
  return w.take();
}

// Session fingerprint: schema identity for horizontal fragments (shared
// attribute layout), row alignment for vertical ones (replicated decision
// sequence). Only the 16-byte digest ever travels.
Tag hp_session_digest(const PartyView& view, const SessionConfig& cfg) {
  TlvWriter w;
  w.put_u64(cfg.n_attributes);
  for (const auto& name : view.local.attribute_names()) w.put_str(name);
  w.put_str(view.local.decision_name());
  for (const auto& cls : cfg.class_alphabet) w.put_str(cls);
  return digest16(w.take());
}

Tag vp_session_digest(const PartyView& view, const SessionConfig& cfg) {
  TlvWriter w;
  w.put_u64(view.local.n_objects());
  for (std::uint32_t o = 0; o < view.local.n_objects(); ++o)
    w.put_str(view.local.raw_decision(o));
  w.put_str(view.local.decision_name());
  w.put_u64(cfg.n_attributes);
  for (std::uint32_t owner : cfg.attribute_owner) w.put_u64(owner);
  for (const auto& cls : cfg.class_alphabet) w.put_str(cls);
  return digest16(w.take());
}

// Party 0 verbalizes what every loop decided; receivers cross-check their
// own loop reached the same place.
Task<std::uint64_t> announce_check(PartyContext& ctx, std::uint64_t code,
                                   std::uint64_t value) {
  if (ctx.id() == 0) {
    ctx.broadcast(Kind::Control, code == kFinished ? control_one(code)
                                                   : control_two(code, value));
    co_return 0;
  }
  Message m = co_await ctx.recv(0, Kind::Control);
  TlvReader r(m.payload);
  if (r.u64() != code ||
      (code != kFinished && r.u64() != value))
    throw ProtocolError("selection disagreement between parties");
  co_return 0;
}

Task<DependencyDegree> gamma_announce_check(PartyContext& ctx,
                                            std::uint64_t attr,
                                            DependencyDegree g) {
  if (ctx.id() == 0) {
    ctx.broadcast(Kind::CandidateGamma, gamma_payload(attr, g));
    co_return g;
  }
  Message m = co_await ctx.recv(0, Kind::CandidateGamma);
  TlvReader r(m.payload);
  if (r.u64() != attr || r.u64() != g.num || r.u64() != g.den)
    throw ProtocolError("dependency disagreement between parties");
  co_return g;
}

// The attribute a candidate subset adds over the current reduct.
std::size_t added_attribute(const std::vector<std::size_t>& subset,
                            const std::vector<std::size_t>& reduct) {
  for (std::size_t a : subset)
    if (std::find(reduct.begin(), reduct.end(), a) == reduct.end()) return a;
  throw ProtocolError("candidate adds nothing");
}

std::vector<std::uint8_t> encode_labels(
    const std::vector<std::optional<Tag>>& labels) {
  std::uint64_t count = 0;
  for (const auto& l : labels)
    if (l) ++count;
  TlvWriter w;
  w.put_u64(count);
  for (std::size_t o = 0; o < labels.size(); ++o)
    if (labels[o]) {
      w.put_u64(o);
      w.put_bytes(*labels[o]);
    }
  return w.take();
}

std::vector<std::optional<Tag>> decode_labels(
    std::span<const std::uint8_t> payload, std::size_t n) {
  TlvReader r(payload);
  std::uint64_t count = r.u64();
  std::vector<std::optional<Tag>> labels(n);
  std::uint64_t prev = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t idx = r.u64();
    if (idx >= n || (i > 0 && idx <= prev))
      throw ProtocolError("bad block label index");
    prev = idx;
    auto b = r.bytes();
    if (b.size() != sizeof(Tag)) throw ProtocolError("bad label width");
    Tag t;
    std::copy(b.begin(), b.end(), t.begin());
    labels[idx] = t;
  }
  if (!r.done()) throw ProtocolError("trailing tokens in block labels");
  return labels;
}

}  // namespace

Task<std::uint64_t> hello_exchange(PartyContext& ctx, const Tag& digest,
                                   const char* mismatch) {
  if (ctx.id() == 0) {
    TlvWriter w;
    w.put_u64(kHello);
    w.put_bytes(digest);
    ctx.broadcast(Kind::Control, w.take());
    co_return 0;
  }
  Message m = co_await ctx.recv(0, Kind::Control);
  TlvReader r(m.payload);
  if (r.u64() != kHello) throw ProtocolError("expected session hello");
  auto d = r.bytes();
  if (d.size() != digest.size() ||
      !std::equal(d.begin(), d.end(), digest.begin()))
    throw ProtocolError(mismatch);
  co_return 0;
}

Task<QuickReductResult> hp_party(PartyContext& ctx, const PartyView& view,
                                 const SessionConfig& cfg) {
  const Tag key = ctx.session_key();
  const auto me = ctx.id();
  const auto p = static_cast<std::uint32_t>(ctx.party_count());
  const bool corrupt = cfg.corrupt_party && *cfg.corrupt_party == me;

  ctx.set_round(0);
  co_await hello_exchange(ctx, hp_session_digest(view, cfg),
                          "schema mismatch between parties");
  const std::uint64_t universe =
      co_await smc::secure_sum(ctx, view.local.n_objects());

  // Objects that some earlier (smaller) subset saw contradicted; only these
  // can still be contradicted after more attributes are added.
  std::vector<std::uint32_t> cache(view.local.n_objects());
  std::iota(cache.begin(), cache.end(), 0);
  std::map<std::size_t, std::vector<std::uint32_t>> round_cache;

  GreedyLoop loop(cfg.n_attributes);
  std::size_t settled = 0;  // reduct size already announced

  while (auto subset = loop.next()) {
    ctx.set_round(static_cast<std::uint32_t>(subset->size()));

    auto tags = smc::make_conflict_fingerprints(view.local, *subset, key);
    if (corrupt) {
      for (auto& t : tags) t[0] ^= 1;
      std::sort(tags.begin(), tags.end());
    }
    auto payload = smc::encode_tag_set(tags);
    for (std::uint32_t peer = 0; peer < p; ++peer)
      if (peer != me) ctx.send(peer, Kind::FingerprintSet, payload);
    std::vector<std::vector<Tag>> remote;
    remote.reserve(p - 1);
    for (std::uint32_t peer = 0; peer < p; ++peer) {
      if (peer == me) continue;
      Message m = co_await ctx.recv(peer, Kind::FingerprintSet);
      remote.push_back(smc::decode_tag_set(m.payload));
    }

    auto pos = positive_region(view.local, *subset);
    std::vector<bool> flags(view.local.n_objects(), false);
    for (std::uint32_t o : pos) flags[o] = true;
    auto inv = smc::count_invalidated(view.local, *subset, cache, flags,
                                      remote, cfg.class_alphabet, key);

    std::uint64_t total_pos = co_await smc::secure_sum(ctx, pos.size());
    std::uint64_t total_inv =
        co_await smc::secure_sum(ctx, inv.positive_invalidated);
    DependencyDegree g{total_pos - total_inv, universe};

    std::uint64_t slot = kEmptySubset;
    if (!subset->empty()) {
      std::size_t added = added_attribute(*subset, loop.reduct());
      round_cache[added] = std::move(inv.invalidated);
      slot = added;
    }
    co_await gamma_announce_check(ctx, slot, g);

    loop.feed(g);
    if (loop.reduct().size() > settled) {
      std::size_t winner = loop.reduct().back();
      settled = loop.reduct().size();
      cache = std::move(round_cache.at(winner));
      round_cache.clear();
      co_await announce_check(ctx, kSelected, winner);
    }
  }
  co_await announce_check(ctx, kFinished, 0);
  co_return loop.result();
}

std::vector<std::optional<Tag>> initial_labels(const DecisionTable& frag,
                                               const Tag& key) {
  std::vector<std::optional<Tag>> labels(frag.n_objects());
  bool mixed = false;
  for (std::uint32_t o = 1; o < frag.n_objects(); ++o)
    if (frag.decision(o) != frag.decision(0)) {
      mixed = true;
      break;
    }
  if (!mixed) return labels;
  TlvWriter w;
  w.put_u64(0x726F6F74);  // the one shared root block
  Tag root = keyed_tag(key, w.take());
  for (auto& l : labels) l = root;
  return labels;
}

Refinement refine_impure_blocks(const std::vector<std::optional<Tag>>& state,
                                const DecisionTable& frag,
                                std::size_t local_attr,
                                std::size_t global_attr, const Tag& key) {
  std::map<std::pair<Tag, std::uint32_t>, std::vector<std::uint32_t>> groups;
  for (std::uint32_t o = 0; o < frag.n_objects(); ++o)
    if (state[o])
      groups[{*state[o], frag.value(o, local_attr)}].push_back(o);

  Refinement out;
  out.labels.assign(frag.n_objects(), std::nullopt);
  for (const auto& [gk, members] : groups) {
    bool impure = false;
    for (std::uint32_t o : members)
      if (frag.decision(o) != frag.decision(members.front())) {
        impure = true;
        break;
      }
    if (!impure) continue;
    TlvWriter w;
    w.put_bytes(gk.first);
    w.put_u64(global_attr);
    w.put_str(frag.raw_value(members.front(), local_attr));
    Tag label = keyed_tag(key, w.take());
    for (std::uint32_t o : members) out.labels[o] = label;
    out.impure_objects += members.size();
    out.impure_blocks.push_back(members);
  }
  std::sort(out.impure_blocks.begin(), out.impure_blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

Task<QuickReductResult> vp_party(PartyContext& ctx, const PartyView& view,
                                 const SessionConfig& cfg) {
  const Tag key = ctx.session_key();
  const auto me = ctx.id();
  const bool corrupt = cfg.corrupt_party && *cfg.corrupt_party == me;

  ctx.set_round(0);
  co_await hello_exchange(ctx, vp_session_digest(view, cfg),
                          "row alignment mismatch between parties");
  const std::uint64_t universe = view.local.n_objects();

  auto state = initial_labels(view.local, key);
  std::map<std::size_t, std::vector<std::optional<Tag>>> own_stash;

  GreedyLoop loop(cfg.n_attributes);
  std::size_t settled = 0;

  while (auto subset = loop.next()) {
    ctx.set_round(static_cast<std::uint32_t>(subset->size()));
    DependencyDegree g{};
    if (subset->empty()) {
      // Shared state: everyone can score the empty set and must agree.
      std::uint64_t impure = 0;
      for (const auto& l : state)
        if (l) ++impure;
      g = {universe - impure, universe};
      g = co_await gamma_announce_check(ctx, kEmptySubset, g);
    } else {
      std::size_t added = added_attribute(*subset, loop.reduct());
      std::uint32_t owner = cfg.attribute_owner[added];
      if (owner == me) {
        auto it = std::find(view.attribute_ids.begin(),
                            view.attribute_ids.end(), added);
        std::size_t local_attr = it - view.attribute_ids.begin();
        auto ref =
            refine_impure_blocks(state, view.local, local_attr, added, key);
        g = {universe - ref.impure_objects, universe};
        if (corrupt && g.num < g.den) ++g.num;
        own_stash[added] = std::move(ref.labels);
        ctx.broadcast(Kind::CandidateGamma, gamma_payload(added, g));
      } else {
        Message m = co_await ctx.recv(owner, Kind::CandidateGamma);
        TlvReader r(m.payload);
        if (r.u64() != added)
          throw ProtocolError("candidate announcement out of order");
        g.num = r.u64();
        g.den = r.u64();
        if (g.den != universe)
          throw ProtocolError("candidate denominator disagrees with universe");
      }
    }

    loop.feed(g);
    if (loop.reduct().size() > settled) {
      std::size_t winner = loop.reduct().back();
      settled = loop.reduct().size();
      co_await announce_check(ctx, kSelected, winner);
      std::uint32_t owner = cfg.attribute_owner[winner];
      if (owner == me) {
        state = std::move(own_stash.at(winner));
        ctx.broadcast(Kind::BlockLabels, encode_labels(state));
      } else {
        Message m = co_await ctx.recv(owner, Kind::BlockLabels);
        state = decode_labels(m.payload, universe);
      }
      own_stash.clear();
    }
  }
  co_await announce_check(ctx, kFinished, 0);
  co_return loop.result();
}

namespace {

bool same_result(const QuickReductResult& a, const QuickReductResult& b) {
  if (a.reduct != b.reduct || a.stop != b.stop) return false;
  if (a.gamma.num != b.gamma.num || a.gamma.den != b.gamma.den) return false;
  if (a.evaluations.size() != b.evaluations.size()) return false;
  for (std::size_t i = 0; i < a.evaluations.size(); ++i) {
    if (a.evaluations[i].attrs != b.evaluations[i].attrs) return false;
    if (a.evaluations[i].gamma.num != b.evaluations[i].gamma.num ||
        a.evaluations[i].gamma.den != b.evaluations[i].gamma.den)
      return false;
  }
  return true;
}

}  // namespace

DistributedRun distributed_quick_reduct(
    const Partition& partition, std::uint64_t seed,
    std::optional<std::uint32_t> corrupt_party) {
  SessionConfig cfg;
  cfg.mode = partition.mode;
  cfg.corrupt_party = corrupt_party;
  if (partition.mode == PartitionMode::horizontal) {
    cfg.n_attributes = partition.views.front().local.n_attributes();
  } else {
    std::size_t n = 0;
    for (const auto& v : partition.views) n += v.attribute_ids.size();
    cfg.n_attributes = n;
    cfg.attribute_owner.assign(n, 0);
    for (std::uint32_t pi = 0; pi < partition.views.size(); ++pi)
      for (std::size_t a : partition.views[pi].attribute_ids)
        cfg.attribute_owner[a] = pi;
  }
  std::set<std::string> classes;
  for (const auto& v : partition.views)
    for (std::uint32_t o = 0; o < v.local.n_objects(); ++o)
      classes.insert(v.local.raw_decision(o));
  cfg.class_alphabet.assign(classes.begin(), classes.end());

  auto sim = run_parties(
      partition.party_count(), seed,
      [&](PartyContext& ctx) -> Task<QuickReductResult> {
        const PartyView& view = partition.views[ctx.id()];
        return cfg.mode == PartitionMode::horizontal
                   ? hp_party(ctx, view, cfg)
                   : vp_party(ctx, view, cfg);
      });

  for (std::size_t p = 1; p < sim.outputs.size(); ++p)
    if (!same_result(sim.outputs[0], sim.outputs[p]))
      throw ProtocolError("parties disagree on the selection result");
  return {std::move(sim.outputs[0]), std::move(sim.transcript)};
}

}  // namespace ppfs::proto
