#include "ppfs/oracle.hpp"

#include <sstream>

#include "ppfs/digest.hpp"
#include "ppfs/protocols.hpp"
#include "ppfs/tlv.hpp"

namespace ppfs::oracle {

DependencyDegree brute_force_gamma(const DecisionTable& t,
                                   std::span<const std::size_t> attrs) {
  const std::uint32_t n = static_cast<std::uint32_t>(t.n_objects());
  std::uint64_t num = 0;
  for (std::uint32_t o = 0; o < n; ++o) {
    bool consistent = true;
    for (std::uint32_t o2 = 0; o2 < n && consistent; ++o2) {
      bool same = true;
      for (std::size_t a : attrs)
        if (t.raw_value(o, a) != t.raw_value(o2, a)) {
          same = false;
          break;
        }
      if (same && t.raw_decision(o2) != t.raw_decision(o)) consistent = false;
    }
    if (consistent) ++num;
  }
  return {num, n};
}

namespace {

std::string subset_str(const std::vector<std::size_t>& attrs) {
  std::ostringstream s;
  s << "{";
  for (std::size_t i = 0; i < attrs.size(); ++i)
    s << (i ? "," : "") << attrs[i];
  s << "}";
  return s.str();
}

std::string table_fingerprint(const DecisionTable& t) {
  TlvWriter w;
  w.put_u64(t.n_attributes());
  for (const auto& name : t.attribute_names()) w.put_str(name);
  w.put_str(t.decision_name());
  w.put_u64(t.n_objects());
  for (std::uint32_t o = 0; o < t.n_objects(); ++o) {
    for (std::size_t a = 0; a < t.n_attributes(); ++a)
      w.put_str(t.raw_value(o, a));
    w.put_str(t.raw_decision(o));
  }
  return to_hex(digest16(w.take()));
}

}  // namespace

EquivalenceReport verify_run(const Partition& partition, std::uint64_t seed,
                             std::optional<std::uint32_t> corrupt_party) {
  EquivalenceReport rep;
  auto table = merge(partition);
  rep.table_digest = table_fingerprint(table);
  rep.partition_description = describe(partition);

  auto run = proto::distributed_quick_reduct(partition, seed, corrupt_party);
  auto central = quick_reduct(table);

  rep.gammas_match = true;
  for (const auto& ev : run.result.evaluations) {
    SubsetComparison cmp;
    cmp.attrs = ev.attrs;
    cmp.distributed = ev.gamma;
    cmp.reference = brute_force_gamma(table, ev.attrs);
    cmp.equal = cmp.distributed == cmp.reference;
    if (!cmp.equal) {
      rep.gammas_match = false;
      rep.failures.push_back("subset " + subset_str(ev.attrs) +
                             ": distributed " + cmp.distributed.str() +
                             ", reference " + cmp.reference.str());
    }
    rep.subsets.push_back(std::move(cmp));
  }

  rep.reducts_match = run.result.reduct == central.reduct;
  if (!rep.reducts_match)
    rep.failures.push_back("reduct mismatch: distributed " +
                           subset_str(run.result.reduct) + ", centralized " +
                           subset_str(central.reduct));
  if (run.result.evaluations.size() != central.evaluations.size()) {
    rep.reducts_match = false;
    rep.failures.push_back("selection trajectory length differs");
  } else {
    for (std::size_t i = 0; i < central.evaluations.size(); ++i)
      if (run.result.evaluations[i].attrs != central.evaluations[i].attrs) {
        rep.reducts_match = false;
        rep.failures.push_back("trajectory diverges at step " +
                               std::to_string(i));
        break;
      }
  }

  std::vector<std::vector<std::uint8_t>> forbidden;
  for (std::uint32_t o = 0; o < table.n_objects(); ++o) {
    for (std::size_t a = 0; a < table.n_attributes(); ++a) {
      const auto& v = table.raw_value(o, a);
      forbidden.emplace_back(v.begin(), v.end());
    }
    const auto& d = table.raw_decision(o);
    forbidden.emplace_back(d.begin(), d.end());
  }
  auto audit = audit_transcript(run.transcript, forbidden);
  rep.audit_clean = audit.clean();
  for (const auto& v : audit.violations)
    rep.failures.push_back("leak in message " + std::to_string(v.message) +
                           ": " + v.detail);

  rep.messages = run.transcript.messages().size();
  rep.bytes = run.transcript.total_bytes();
  return rep;
}

DecisionTable fuzz_table(std::mt19937_64& rng) {
  const std::size_t n_attrs = 1 + rng() % 8;
  const std::size_t n_objects = 1 + rng() % 30;
  const std::size_t n_values = 1 + rng() % 4;
  const std::size_t n_classes = 2 + rng() % 2;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n_attrs; ++a)
    names.push_back("a" + std::to_string(a));
  DecisionTable t(std::move(names), "class");
  for (std::size_t o = 0; o < n_objects; ++o) {
    std::vector<std::string> row;
    for (std::size_t a = 0; a < n_attrs; ++a)
      row.push_back("v" + std::to_string(rng() % n_values));
    t.add_row(row, "c" + std::to_string(rng() % n_classes));
  }
  return t;
}

Partition fuzz_partition(const DecisionTable& t, std::mt19937_64& rng) {
  const std::size_t parties = 2 + rng() % 4;
  if (rng() & 1) {
    std::vector<std::vector<std::uint32_t>> assignment(parties);
    for (std::uint32_t o = 0; o < t.n_objects(); ++o)
      assignment[rng() % parties].push_back(o);
    return split_horizontal_assigned(t, assignment);
  }
  std::vector<std::vector<std::size_t>> groups(parties);
  for (std::size_t a = 0; a < t.n_attributes(); ++a)
    groups[rng() % parties].push_back(a);
  return split_vertical(t, groups);
}

FuzzOutcome fuzz_campaign(std::uint64_t seed, std::size_t n_cases) {
  std::mt19937_64 rng(seed);
  FuzzOutcome out;
  for (std::size_t c = 0; c < n_cases; ++c) {
    auto t = fuzz_table(rng);
    auto part = fuzz_partition(t, rng);
    auto rep = verify_run(part, rng());
    ++out.cases;
    if (!rep.pass()) {
      ++out.failures;
      if (out.notes.size() < 10) {
        std::string head = "case " + std::to_string(c) + " (" +
                           rep.partition_description + ")";
        for (const auto& f : rep.failures) out.notes.push_back(head + ": " + f);
      }
    }
  }
  return out;
}

}  // namespace ppfs::oracle
