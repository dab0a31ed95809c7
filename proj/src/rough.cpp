#include "ppfs/rough.hpp"

#include <algorithm>
#include <map>

#include "ppfs/errors.hpp"

namespace ppfs {

std::vector<std::vector<std::uint32_t>> indiscernibility_blocks(
    const DecisionTable& t, std::span<const std::size_t> attrs) {
  std::map<std::vector<std::uint32_t>, std::size_t> seen;
  std::vector<std::vector<std::uint32_t>> blocks;
  std::vector<std::uint32_t> key(attrs.size());
  for (std::uint32_t o = 0; o < t.n_objects(); ++o) {
    for (std::size_t i = 0; i < attrs.size(); ++i) key[i] = t.value(o, attrs[i]);
    auto [it, fresh] = seen.try_emplace(key, blocks.size());
    if (fresh) blocks.emplace_back();
    blocks[it->second].push_back(o);
  }
  return blocks;  // members ascend by construction; blocks by first member
}

namespace {

std::vector<bool> membership(const DecisionTable& t,
                             std::span<const std::uint32_t> target) {
  std::vector<bool> in(t.n_objects(), false);
  for (std::uint32_t o : target) in[o] = true;
  return in;
}

}  // namespace

std::vector<std::uint32_t> lower_approximation(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target) {
  auto in = membership(t, target);
  std::vector<std::uint32_t> out;
  for (const auto& block : indiscernibility_blocks(t, attrs)) {
    bool inside = std::all_of(block.begin(), block.end(),
                              [&](std::uint32_t o) { return in[o]; });
    if (inside) out.insert(out.end(), block.begin(), block.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> upper_approximation(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target) {
  auto in = membership(t, target);
  std::vector<std::uint32_t> out;
  for (const auto& block : indiscernibility_blocks(t, attrs)) {
    bool touches = std::any_of(block.begin(), block.end(),
                               [&](std::uint32_t o) { return in[o]; });
    if (touches) out.insert(out.end(), block.begin(), block.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> boundary_region(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target) {
  auto lo = lower_approximation(t, attrs, target);
  auto up = upper_approximation(t, attrs, target);
  std::vector<std::uint32_t> out;
  std::set_difference(up.begin(), up.end(), lo.begin(), lo.end(),
                      std::back_inserter(out));
  return out;
}

std::vector<std::uint32_t> negative_region(
    const DecisionTable& t, std::span<const std::size_t> attrs,
    std::span<const std::uint32_t> target) {
  auto up = upper_approximation(t, attrs, target);
  std::vector<std::uint32_t> out;
  std::size_t j = 0;
  for (std::uint32_t o = 0; o < t.n_objects(); ++o) {
    if (j < up.size() && up[j] == o)
      ++j;
    else
      out.push_back(o);
  }
  return out;
}

std::vector<std::uint32_t> positive_region(
    const DecisionTable& t, std::span<const std::size_t> attrs) {
  std::vector<std::uint32_t> out;
  for (const auto& block : indiscernibility_blocks(t, attrs)) {
    std::uint32_t d = t.decision(block.front());
    bool pure = std::all_of(block.begin(), block.end(), [&](std::uint32_t o) {
      return t.decision(o) == d;
    });
    if (pure) out.insert(out.end(), block.begin(), block.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

DependencyDegree gamma(const DecisionTable& t,
                       std::span<const std::size_t> attrs) {
  return {positive_region(t, attrs).size(), t.n_objects()};
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::no_gain: return "no_gain";
    case StopReason::uniform_decision: return "uniform_decision";
  }
  return "?";
}

GreedyLoop::GreedyLoop(std::size_t n_attributes)
    : n_(n_attributes), chosen_(n_attributes, false) {}

std::optional<std::vector<std::size_t>> GreedyLoop::next() {
  switch (phase_) {
    case Phase::empty:
      last_subset_ = {};
      return last_subset_;
    case Phase::rounds: {
      std::vector<std::size_t> s = res_.reduct;
      s.push_back(pending_[pos_]);
      std::sort(s.begin(), s.end());
      last_subset_ = s;
      return s;
    }
    case Phase::done:
      return std::nullopt;
  }
  return std::nullopt;
}

void GreedyLoop::start_round() {
  pending_.clear();
  for (std::size_t a = 0; a < n_; ++a)
    if (!chosen_[a]) pending_.push_back(a);
  pos_ = 0;
  have_best_ = false;
  if (pending_.empty()) finish(StopReason::converged, prev_);
}

void GreedyLoop::finish(StopReason r, DependencyDegree g) {
  res_.stop = r;
  res_.gamma = g;
  phase_ = Phase::done;
}

void GreedyLoop::feed(DependencyDegree g) {
  if (phase_ == Phase::done) throw ConfigError("feed after completion");
  res_.evaluations.push_back({last_subset_, g});
  if (phase_ == Phase::empty) {
    if (g.den == 0) throw ConfigError("decision table has no objects");
    prev_ = g;
    if (g.certain()) {
      // Single decision class: nothing to discern, the empty set suffices.
      finish(StopReason::uniform_decision, g);
      return;
    }
    phase_ = Phase::rounds;
    start_round();
    return;
  }
  std::size_t cand = pending_[pos_];
  if (!have_best_ || g > best_) {  // strict > keeps the lowest-index tie
    have_best_ = true;
    best_attr_ = cand;
    best_ = g;
  }
  if (++pos_ < pending_.size()) return;
  // round complete
  if (!(best_ > prev_)) {
    finish(prev_.certain() ? StopReason::converged : StopReason::no_gain,
           prev_);
    return;
  }
  chosen_[best_attr_] = true;
  res_.reduct.push_back(best_attr_);
  res_.rounds.push_back({best_attr_, best_});
  prev_ = best_;
  if (res_.reduct.size() == n_)
    finish(StopReason::converged, prev_);
  else
    start_round();
}

const QuickReductResult& GreedyLoop::result() const {
  if (phase_ != Phase::done) throw ConfigError("selection still in progress");
  return res_;
}

QuickReductResult quick_reduct(std::size_t n_attributes, const GammaFn& eval) {
  GreedyLoop loop(n_attributes);
  while (auto subset = loop.next()) loop.feed(eval(*subset));
  return loop.result();
}

QuickReductResult quick_reduct(const DecisionTable& t) {
  return quick_reduct(t.n_attributes(), [&](std::span<const std::size_t> s) {
    return gamma(t, s);
  });
}

}  // namespace ppfs
