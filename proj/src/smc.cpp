#include "ppfs/smc.hpp"

#include <algorithm>

#include "ppfs/kernels.hpp"
#include "ppfs/tlv.hpp"

namespace ppfs::smc {

Task<std::uint64_t> secure_sum(PartyContext& ctx, std::uint64_t local,
                               std::uint32_t initiator) {
  auto p = static_cast<std::uint32_t>(ctx.party_count());
  auto me = ctx.id();
  auto next = (me + 1) % p;
  auto prev = (me + p - 1) % p;

  auto pack = [](std::uint64_t v) {
    TlvWriter w;
    w.put_u64(v);
    return w.take();
  };
  auto unpack = [](const Message& m) { return TlvReader(m.payload).u64(); };

  if (me == initiator) {
    std::uint64_t mask = ctx.rng_u64();
    ctx.send(next, Kind::MaskedSum, pack(local + mask));
    Message back = co_await ctx.recv(prev, Kind::MaskedSum);
    std::uint64_t total = unpack(back) - mask;
    ctx.broadcast(Kind::MaskedSum, pack(total));
    co_return total;
  }
  Message in = co_await ctx.recv(prev, Kind::MaskedSum);
  ctx.send(next, Kind::MaskedSum, pack(unpack(in) + local));
  Message result = co_await ctx.recv(initiator, Kind::MaskedSum);
  co_return unpack(result);
}

namespace {

std::vector<std::uint8_t> encode_tuple(std::span<const std::size_t> attr_ids,
                                       const std::vector<std::string>& values,
                                       const std::string* decision) {
  TlvWriter w;
  w.put_u64(attr_ids.size());
  for (std::size_t i = 0; i < attr_ids.size(); ++i) {
    w.put_u64(attr_ids[i]);
    w.put_str(values[i]);
  }
  w.put_u64(decision ? 1 : 0);
  if (decision) w.put_str(*decision);
  return w.take();
}

}  // namespace

Tag tuple_tag(const Tag& key, std::span<const std::size_t> attr_ids,
              const std::vector<std::string>& values) {
  return keyed_tag(key, encode_tuple(attr_ids, values, nullptr));
}

Tag conflict_tag(const Tag& key, std::span<const std::size_t> attr_ids,
                 const std::vector<std::string>& values,
                 const std::string& decision) {
  return keyed_tag(key, encode_tuple(attr_ids, values, &decision));
}

std::vector<Tag> make_conflict_fingerprints(
    const DecisionTable& frag, std::span<const std::size_t> attrs,
    const Tag& key) {
  std::vector<Tag> tags;
  tags.reserve(frag.n_objects());
  std::vector<std::string> values(attrs.size());
  for (std::uint32_t o = 0; o < frag.n_objects(); ++o) {
    for (std::size_t i = 0; i < attrs.size(); ++i)
      values[i] = frag.raw_value(o, attrs[i]);
    tags.push_back(conflict_tag(key, attrs, values, frag.raw_decision(o)));
  }
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return tags;
}

std::vector<std::uint8_t> encode_tag_set(const std::vector<Tag>& tags) {
  TlvWriter w;
  w.put_u64(tags.size());
  for (const Tag& t : tags) w.put_bytes(t);
  return w.take();
}

std::vector<Tag> decode_tag_set(std::span<const std::uint8_t> payload) {
  TlvReader r(payload);
  std::uint64_t n = r.u64();
  std::vector<Tag> tags(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto b = r.bytes();
    if (b.size() != sizeof(Tag)) throw ProtocolError("bad tag width");
    std::copy(b.begin(), b.end(), tags[i].begin());
  }
  if (!r.done()) throw ProtocolError("trailing tokens in tag set");
  return tags;
}

Invalidation count_invalidated(const DecisionTable& frag,
                               std::span<const std::size_t> attrs,
                               std::span<const std::uint32_t> cached,
                               const std::vector<bool>& locally_positive,
                               const std::vector<std::vector<Tag>>& remote_sets,
                               const std::vector<std::string>& class_alphabet,
                               const Tag& key) {
  Invalidation out;
  std::vector<std::string> values(attrs.size());
  for (std::uint32_t o : cached) {
    for (std::size_t i = 0; i < attrs.size(); ++i)
      values[i] = frag.raw_value(o, attrs[i]);
    const std::string& own = frag.raw_decision(o);
    bool conflict = false;
    for (const std::string& cls : class_alphabet) {
      if (cls == own) continue;
      Tag probe = conflict_tag(key, attrs, values, cls);
      for (const auto& remote : remote_sets) {
        if (std::binary_search(remote.begin(), remote.end(), probe)) {
          conflict = true;
          break;
        }
      }
      if (conflict) break;
    }
    if (conflict) {
      out.invalidated.push_back(o);
      if (locally_positive[o]) ++out.positive_invalidated;
    }
  }
  return out;
}

Task<std::uint64_t> secure_dot_product_initiator(
    PartyContext& ctx, std::uint32_t peer, std::span<const std::uint64_t> a) {
  DealerShare share = ctx.dealer_share(peer, a.size(), true);  // (x, u)

  std::vector<std::uint64_t> masked(a.size());
  kernels::add_mod64(a, share.vec, masked);
  TlvWriter w;
  w.put_u64(masked.size());
  for (std::uint64_t v : masked) w.put_u64(v);
  ctx.send(peer, Kind::MaskedVector, w.take());

  Message reply = co_await ctx.recv(peer, Kind::MaskedVector);
  TlvReader r(reply.payload);
  std::uint64_t n = r.u64();
  if (n != a.size()) throw ProtocolError("dot product length mismatch");
  std::vector<std::uint64_t> b_masked(n);
  for (auto& v : b_masked) v = r.u64();
  std::uint64_t z = r.u64();

  // z = (a+x)·b + v and u + v = x·y, so z + u − x·(b+y) = a·b.
  std::uint64_t result =
      z + share.scalar - kernels::dot_mod64(share.vec, b_masked);
  TlvWriter reveal;
  reveal.put_u64(result);
  ctx.send(peer, Kind::MaskedSum, reveal.take());
  co_return result;
}

Task<std::uint64_t> secure_dot_product_responder(
    PartyContext& ctx, std::uint32_t peer, std::span<const std::uint64_t> b) {
  DealerShare share = ctx.dealer_share(peer, b.size(), false);  // (y, v)

  Message first = co_await ctx.recv(peer, Kind::MaskedVector);
  TlvReader r(first.payload);
  std::uint64_t n = r.u64();
  if (n != b.size()) throw ProtocolError("dot product length mismatch");
  std::vector<std::uint64_t> a_masked(n);
  for (auto& v : a_masked) v = r.u64();

  std::uint64_t z = kernels::dot_mod64(a_masked, b) + share.scalar;
  std::vector<std::uint64_t> b_masked(b.size());
  kernels::add_mod64(b, share.vec, b_masked);
  TlvWriter w;
  w.put_u64(b_masked.size());
  for (std::uint64_t v : b_masked) w.put_u64(v);
  w.put_u64(z);
  ctx.send(peer, Kind::MaskedVector, w.take());

  Message reveal = co_await ctx.recv(peer, Kind::MaskedSum);
  co_return TlvReader(reveal.payload).u64();
}

}  // namespace ppfs::smc
