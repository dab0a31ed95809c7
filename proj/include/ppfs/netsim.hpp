#pragma once

// Deterministic in-memory message passing between party engines. Parties are
// coroutines advanced by a round-robin scheduler; sends are delivered
// reliably, in order, exactly once per ordered pair. Identical (engines,
// inputs, seed) always produce an identical transcript.

#include <coroutine>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "ppfs/digest.hpp"
#include "ppfs/errors.hpp"
#include "ppfs/task.hpp"

namespace ppfs {

enum class Kind : std::uint8_t {
  MaskedSum,
  FingerprintSet,
  MaskedVector,
  BlockLabels,
  CandidateGamma,
  Control,
};
const char* to_string(Kind k);

inline constexpr std::uint32_t kBroadcast = 0xFFFFFFFFu;

struct Message {
  std::uint64_t seq = 0;  // transcript position
  std::uint32_t round = 0;
  std::uint32_t from = 0;
  std::uint32_t to = 0;  // kBroadcast for one-to-all
  Kind kind = Kind::Control;
  std::vector<std::uint8_t> payload;
};

class Transcript {
 public:
  void append(Message m) {
    m.seq = messages_.size();
    messages_.push_back(std::move(m));
  }
  const std::vector<Message>& messages() const { return messages_; }

  struct Totals {
    std::uint64_t count = 0;
    std::uint64_t bytes = 0;
  };
  std::map<std::string, Totals> per_kind() const;
  std::vector<Totals> per_party(std::size_t n_parties) const;  // by sender
  std::uint64_t total_bytes() const;

  // One JSON object per line: round, from, to, kind, size, digest. Payload
  // bytes stay out of the export unless include_payloads asks for base64.
  void write_ndjson(std::ostream& out, bool include_payloads = false) const;

 private:
  std::vector<Message> messages_;
};

struct AuditViolation {
  std::uint64_t message;
  std::string detail;
};
struct AuditReport {
  std::uint64_t messages_scanned = 0;
  std::vector<AuditViolation> violations;
  bool clean() const { return violations.empty(); }
};

// Scan every payload for forbidden plaintext. Payloads must decode as token
// sequences (undecodable ones are violations outright); text tokens are
// checked for substring hits, opaque tokens for whole-value equality, and
// patterns of 8+ bytes additionally for raw occurrence anywhere in the
// payload. Short patterns are not substring-matched against masked residues
// on purpose: a one-byte cell value occurs in uniform random bytes with
// near certainty, which would make the audit cry wolf on every run.
AuditReport audit_transcript(
    const Transcript& t,
    const std::vector<std::vector<std::uint8_t>>& forbidden);

// Correlated randomness handed to a pair of parties by the harness (the
// simulated dealer): initiator gets (vec, scalar) = (x, u), responder gets
// (y, v), with u + v = x·y mod 2^64. Both sides derive the same triple from
// the session seed, so no message traffic is involved.
struct DealerShare {
  std::vector<std::uint64_t> vec;
  std::uint64_t scalar = 0;
};

class Sim;

class PartyContext {
 public:
  std::uint32_t id() const { return id_; }
  std::size_t party_count() const;

  void set_round(std::uint32_t r) { round_ = r; }
  std::uint32_t round() const { return round_; }

  void send(std::uint32_t to, Kind kind, std::vector<std::uint8_t> payload);
  void broadcast(Kind kind, std::vector<std::uint8_t> payload);

  struct RecvAwaiter {
    PartyContext* ctx;
    std::uint32_t from;
    Kind kind;
    bool await_ready() const { return ctx->has_message(from); }
    void await_suspend(std::coroutine_handle<> h) {
      ctx->block_on(from, kind, h);
    }
    Message await_resume() { return ctx->take(from, kind); }
  };
  // Wait for the next message from `from`; a different kind at the head of
  // that channel is a protocol violation and aborts the run.
  RecvAwaiter recv(std::uint32_t from, Kind kind) {
    return RecvAwaiter{this, from, kind};
  }

  std::uint64_t rng_u64() { return rng_(); }
  // Shared session secret (fingerprint key); installed by the harness,
  // never transmitted.
  const Tag& session_key() const;
  DealerShare dealer_share(std::uint32_t peer, std::size_t len,
                           bool initiator);

 private:
  friend class Sim;
  PartyContext(Sim* sim, std::uint32_t id, std::uint64_t rng_seed,
               std::size_t n_parties)
      : sim_(sim), id_(id), rng_(rng_seed), inbox_(n_parties) {}

  bool has_message(std::uint32_t from) const {
    return !inbox_[from].empty();
  }
  void block_on(std::uint32_t from, Kind kind, std::coroutine_handle<> h) {
    waiting_ = Waiting{from, kind, h};
  }
  Message take(std::uint32_t from, Kind kind);

  struct Waiting {
    std::uint32_t from;
    Kind kind;
    std::coroutine_handle<> handle;
  };

  Sim* sim_;
  std::uint32_t id_;
  std::uint32_t round_ = 0;
  std::mt19937_64 rng_;
  std::vector<std::deque<Message>> inbox_;  // indexed by sender
  std::optional<Waiting> waiting_;
};

class Sim {
 public:
  Sim(std::size_t n_parties, std::uint64_t seed);

  PartyContext& context(std::size_t p) { return *parties_[p]; }
  std::size_t party_count() const { return parties_.size(); }

  void attach(std::size_t p, std::coroutine_handle<> top,
              std::function<std::exception_ptr()> error_probe);
  // Drive all parties to completion; throws on deadlock and re-throws the
  // first party failure.
  void run();

  Transcript& transcript() { return transcript_; }
  const Tag& session_key() const { return session_key_; }

 private:
  friend class PartyContext;
  void post(Message m);  // transcript + delivery

  std::uint64_t seed_;
  Tag session_key_;
  std::vector<std::unique_ptr<PartyContext>> parties_;
  struct Top {
    std::coroutine_handle<> handle;
    std::function<std::exception_ptr()> error;
    bool started = false;
  };
  std::vector<Top> tops_;
  Transcript transcript_;
  std::map<std::pair<std::uint32_t, std::uint32_t>,
           std::array<std::uint64_t, 2>>
      dealer_counters_;
};

template <typename R>
struct SimResult {
  Transcript transcript;
  std::vector<R> outputs;
};

// Run one coroutine per party and collect their results. fn is invoked once
// per party with that party's context and must return Task<R>.
template <typename Fn>
auto run_parties(std::size_t n_parties, std::uint64_t seed, Fn&& fn)
    -> SimResult<
        typename std::invoke_result_t<Fn&, PartyContext&>::value_type> {
  using TaskT = std::invoke_result_t<Fn&, PartyContext&>;
  using R = typename TaskT::value_type;
  Sim sim(n_parties, seed);
  std::vector<TaskT> tasks;
  tasks.reserve(n_parties);
  for (std::size_t p = 0; p < n_parties; ++p)
    tasks.push_back(fn(sim.context(p)));
  for (std::size_t p = 0; p < n_parties; ++p)
    sim.attach(p, tasks[p].handle(),
               [&tasks, p] { return tasks[p].error(); });
  sim.run();
  SimResult<R> out{std::move(sim.transcript()), {}};
  out.outputs.reserve(n_parties);
  for (auto& t : tasks) out.outputs.push_back(t.result());
  return out;
}

}  // namespace ppfs
