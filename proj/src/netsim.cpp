#include "ppfs/netsim.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

#include "ppfs/kernels.hpp"
#include "ppfs/tlv.hpp"

namespace ppfs {

const char* to_string(Kind k) {
  switch (k) {
    case Kind::MaskedSum: return "MaskedSum";
    case Kind::FingerprintSet: return "FingerprintSet";
    case Kind::MaskedVector: return "MaskedVector";
    case Kind::BlockLabels: return "BlockLabels";
    case Kind::CandidateGamma: return "CandidateGamma";
    case Kind::Control: return "Control";
  }
  return "?";
}

std::map<std::string, Transcript::Totals> Transcript::per_kind() const {
  std::map<std::string, Totals> out;
  for (const auto& m : messages_) {
    auto& t = out[to_string(m.kind)];
    ++t.count;
    t.bytes += m.payload.size();
  }
  return out;
}

std::vector<Transcript::Totals> Transcript::per_party(
    std::size_t n_parties) const {
  std::vector<Totals> out(n_parties);
  for (const auto& m : messages_) {
    auto& t = out[m.from];
    ++t.count;
    t.bytes += m.payload.size();
  }
  return out;
}

std::uint64_t Transcript::total_bytes() const {
  std::uint64_t b = 0;
  for (const auto& m : messages_) b += m.payload.size();
  return b;
}

void Transcript::write_ndjson(std::ostream& out, bool include_payloads) const {
  for (const auto& m : messages_) {
    out << "{\"round\":" << m.round << ",\"from\":" << m.from << ",\"to\":";
    if (m.to == kBroadcast)
      out << "\"broadcast\"";
    else
      out << m.to;
    out << ",\"kind\":\"" << to_string(m.kind)
        << "\",\"size\":" << m.payload.size() << ",\"digest\":\""
        << to_hex(digest16(m.payload)) << "\"";
    if (include_payloads)
      out << ",\"payload_b64\":\"" << to_base64(m.payload) << "\"";
    out << "}\n";
  }
}

AuditReport audit_transcript(
    const Transcript& t,
    const std::vector<std::vector<std::uint8_t>>& forbidden) {
  AuditReport report;
  for (const auto& m : t.messages()) {
    ++report.messages_scanned;
    std::vector<Token> tokens;
    try {
      tokens = tlv_scan(m.payload);
    } catch (const ProtocolError& e) {
      report.violations.push_back(
          {m.seq, std::string("undecodable payload: ") + e.what()});
      continue;
    }
    for (const auto& pat : forbidden) {
      if (pat.empty()) continue;
      for (const auto& tok : tokens) {
        if (tok.type == TokenType::str) {
          auto it = std::search(tok.data.begin(), tok.data.end(), pat.begin(),
                                pat.end());
          if (it != tok.data.end()) {
            report.violations.push_back(
                {m.seq, "forbidden text in string token"});
          }
        } else if (tok.type == TokenType::bytes) {
          if (tok.data.size() == pat.size() &&
              std::equal(pat.begin(), pat.end(), tok.data.begin()))
            report.violations.push_back(
                {m.seq, "forbidden value as opaque token"});
        }
      }
      if (pat.size() >= 8) {
        auto it = std::search(m.payload.begin(), m.payload.end(), pat.begin(),
                              pat.end());
        if (it != m.payload.end())
          report.violations.push_back(
              {m.seq, "forbidden bytes embedded in payload"});
      }
    }
  }
  return report;
}

// ---- party context ----

std::size_t PartyContext::party_count() const { return sim_->party_count(); }

void PartyContext::send(std::uint32_t to, Kind kind,
                        std::vector<std::uint8_t> payload) {
  if (to >= sim_->party_count())
    throw ProtocolError("send to unknown party " + std::to_string(to));
  sim_->post({0, round_, id_, to, kind, std::move(payload)});
}

void PartyContext::broadcast(Kind kind, std::vector<std::uint8_t> payload) {
  sim_->post({0, round_, id_, kBroadcast, kind, std::move(payload)});
}

Message PartyContext::take(std::uint32_t from, Kind kind) {
  auto& q = inbox_[from];
  if (q.empty()) throw ProtocolError("internal: take from empty channel");
  Message m = std::move(q.front());
  q.pop_front();
  if (m.kind != kind)
    throw ProtocolError("message " + std::to_string(m.seq) + " from party " +
                        std::to_string(from) + ": expected " +
                        to_string(kind) + ", got " + to_string(m.kind));
  return m;
}

const Tag& PartyContext::session_key() const { return sim_->session_key(); }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

DealerShare PartyContext::dealer_share(std::uint32_t peer, std::size_t len,
                                       bool initiator) {
  if (peer == id_ || peer >= sim_->party_count())
    throw ProtocolError("dealer share with invalid peer " +
                        std::to_string(peer));
  auto key = std::minmax(id_, peer);
  auto& counters = sim_->dealer_counters_[{key.first, key.second}];
  std::uint64_t k = counters[initiator ? 0 : 1]++;

  // Both sides regenerate the same stream: the dealer is pure derivation
  // from (seed, pair, invocation).
  std::uint64_t s = splitmix64(sim_->seed_ ^ 0xD3A1E500DEA1E5ull);
  s = splitmix64(s + (std::uint64_t{key.first} << 32) + key.second);
  std::mt19937_64 gen(splitmix64(s + k));
  std::vector<std::uint64_t> x(len), y(len);
  for (auto& v : x) v = gen();
  for (auto& v : y) v = gen();
  std::uint64_t u = gen();
  if (initiator) return {std::move(x), u};
  std::uint64_t v = kernels::dot_mod64(x, y) - u;
  return {std::move(y), v};
}

// ---- simulator ----

Sim::Sim(std::size_t n_parties, std::uint64_t seed) : seed_(seed) {
  if (n_parties < 2)
    throw ProtocolError("need at least 2 parties, got " +
                        std::to_string(n_parties));
  std::uint64_t k0 = splitmix64(seed ^ 0x5E55104EAABBCCull);
  std::uint64_t k1 = splitmix64(k0);
  std::memcpy(session_key_.data(), &k0, 8);
  std::memcpy(session_key_.data() + 8, &k1, 8);
  for (std::size_t p = 0; p < n_parties; ++p) {
    std::uint64_t rs = splitmix64(splitmix64(seed) + p + 1);
    parties_.emplace_back(new PartyContext(
        this, static_cast<std::uint32_t>(p), rs, n_parties));
  }
  tops_.resize(n_parties);
}

void Sim::attach(std::size_t p, std::coroutine_handle<> top,
                 std::function<std::exception_ptr()> error_probe) {
  tops_[p] = {top, std::move(error_probe), false};
}

void Sim::post(Message m) {
  transcript_.append(m);  // assigns seq on the stored copy
  m.seq = transcript_.messages().back().seq;
  if (m.to == kBroadcast) {
    for (auto& party : parties_)
      if (party->id() != m.from) party->inbox_[m.from].push_back(m);
  } else {
    parties_[m.to]->inbox_[m.from].push_back(m);
  }
}

void Sim::run() {
  while (true) {
    bool progressed = false;
    bool all_done = true;
    for (std::size_t p = 0; p < parties_.size(); ++p) {
      Top& top = tops_[p];
      if (!top.handle) throw ProtocolError("party " + std::to_string(p) +
                                           " never attached");
      if (top.handle.done()) continue;
      PartyContext& ctx = *parties_[p];
      if (!top.started) {
        top.started = true;
        top.handle.resume();
      } else if (ctx.waiting_ &&
                 ctx.has_message(ctx.waiting_->from)) {
        auto h = ctx.waiting_->handle;
        ctx.waiting_.reset();
        h.resume();
      } else {
        all_done = false;
        continue;
      }
      progressed = true;
      if (top.handle.done()) {
        if (auto err = top.error()) std::rethrow_exception(err);
      } else {
        all_done = false;
      }
    }
    if (all_done) return;
    if (!progressed) {
      std::ostringstream msg;
      msg << "deadlock:";
      for (std::size_t p = 0; p < parties_.size(); ++p) {
        if (tops_[p].handle.done()) continue;
        msg << " party " << p;
        if (parties_[p]->waiting_)
          msg << " waiting for " << to_string(parties_[p]->waiting_->kind)
              << " from " << parties_[p]->waiting_->from << ";";
        else
          msg << " never ran;";
      }
      throw ProtocolError(msg.str());
    }
  }
}

}  // namespace ppfs
