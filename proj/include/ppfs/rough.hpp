#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppfs/decision_table.hpp"

namespace ppfs {

// Exact rational |POS| / |U|. The representation is never reduced;
// comparisons cross-multiply in 128 bits so 4/8 == 1/2 holds without
// touching it. str() renders in lowest terms ("5/7", full dependency
// "1/1") for reports.
struct DependencyDegree {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  bool certain() const { return num == den; }  // gamma == 1 (or 0/0)
  std::string str() const {
    std::uint64_t g = std::gcd(num, den);
    if (g == 0) return "0/0";
    return std::to_string(num / g) + "/" + std::to_string(den / g);
  }
};

inline bool operator==(DependencyDegree a, DependencyDegree b) {
  return static_cast<unsigned __int128>(a.num) * b.den ==
         static_cast<unsigned __int128>(b.num) * a.den;
}
inline bool operator<(DependencyDegree a, DependencyDegree b) {
  return static_cast<unsigned __int128>(a.num) * b.den <
         static_cast<unsigned __int128>(b.num) * a.den;
}
inline bool operator!=(DependencyDegree a, DependencyDegree b) {
  return !(a == b);
}
inline bool operator>(DependencyDegree a, DependencyDegree b) { return b < a; }

// Blocks of the indiscernibility relation IND(attrs), each a sorted list of
// object ids, ordered by smallest member. attrs empty means one block = U.
std::vector<std::vector<std::uint32_t>> indiscernibility_blocks(
    const DecisionTable& t, std::span<const std::size_t> attrs);

// Classical region algebra against an arbitrary target set of objects.
// All results are sorted object id lists.
std::vector<std::uint32_t> lower_approximation(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target);
std::vector<std::uint32_t> upper_approximation(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target);
std::vector<std::uint32_t> boundary_region(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target);
std::vector<std::uint32_t> negative_region(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target);

// Positive region of the decision: union of all blocks whose members share
// one decision value.
std::vector<std::uint32_t> positive_region(const DecisionTable& t,
                                           std::span<const std::size_t> attrs);

DependencyDegree gamma(const DecisionTable& t,
                       std::span<const std::size_t> attrs);

// ---- greedy forward selection ----

enum class StopReason { converged, no_gain, uniform_decision };
const char* to_string(StopReason r);

struct RoundPick {
  std::size_t attribute;
  DependencyDegree gamma;
};

struct SubsetEval {
  std::vector<std::size_t> attrs;  // ascending
  DependencyDegree gamma;
};

struct QuickReductResult {
  std::vector<std::size_t> reduct;  // in selection order
  std::vector<RoundPick> rounds;
  std::vector<SubsetEval> evaluations;  // every subset handed to the evaluator
  DependencyDegree gamma;               // of the final reduct
  StopReason stop;
};

using GammaFn = std::function<DependencyDegree(std::span<const std::size_t>)>;

// Forward selection as a pull-based state machine: next() yields the subset
// to evaluate, feed() takes its dependency degree. The empty set comes
// first; each round then offers reduct ∪ {a} for every unchosen a in
// ascending order, the round's strict maximum is added (ties fall to the
// lowest index), and the loop finishes when a round brings no strict gain
// or every attribute is in. Both the centralized runner and the per-party
// protocol engines drive this same machine, so selection semantics cannot
// drift between them.
class GreedyLoop {
 public:
  explicit GreedyLoop(std::size_t n_attributes);

  // nullopt once finished; otherwise the next subset, sorted ascending.
  std::optional<std::vector<std::size_t>> next();
  void feed(DependencyDegree g);

  bool finished() const { return phase_ == Phase::done; }
  // Grows by one right after the feed() that closes a winning round.
  const std::vector<std::size_t>& reduct() const { return res_.reduct; }
  const QuickReductResult& result() const;

 private:
  void start_round();
  void finish(StopReason r, DependencyDegree g);

  enum class Phase { empty, rounds, done };
  Phase phase_ = Phase::empty;
  std::size_t n_;
  QuickReductResult res_;
  DependencyDegree prev_{};
  std::vector<bool> chosen_;
  std::vector<std::size_t> pending_;  // this round's candidate attributes
  std::size_t pos_ = 0;
  bool have_best_ = false;
  std::size_t best_attr_ = 0;
  DependencyDegree best_{};
  std::vector<std::size_t> last_subset_;
};

// Drive a GreedyLoop to completion with a synchronous evaluator.
QuickReductResult quick_reduct(std::size_t n_attributes, const GammaFn& eval);

// quick_reduct over a local table.
QuickReductResult quick_reduct(const DecisionTable& t);

}  // namespace ppfs
