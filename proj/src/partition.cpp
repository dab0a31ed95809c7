#include "ppfs/partition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ppfs/errors.hpp"

namespace ppfs {

const char* to_string(PartitionMode m) {
  return m == PartitionMode::horizontal ? "horizontal" : "vertical";
}

namespace {

std::vector<std::string> row_of(const DecisionTable& t, std::uint32_t o) {
  std::vector<std::string> row;
  row.reserve(t.n_attributes());
  for (std::size_t a = 0; a < t.n_attributes(); ++a)
    row.push_back(t.raw_value(o, a));
  return row;
}

}  // namespace

Partition split_horizontal(const DecisionTable& t,
                           std::span<const std::size_t> cut_counts) {
  if (cut_counts.size() < 2)
    throw ConfigError("need at least 2 parties, got " +
                      std::to_string(cut_counts.size()));
  std::size_t total = std::accumulate(cut_counts.begin(), cut_counts.end(),
                                      std::size_t{0});
  if (total != t.n_objects())
    throw ConfigError("cut sizes sum to " + std::to_string(total) +
                      " but the table has " + std::to_string(t.n_objects()) +
                      " objects");
  std::vector<std::vector<std::uint32_t>> assignment;
  std::uint32_t next = 0;
  for (std::size_t count : cut_counts) {
    auto& rows = assignment.emplace_back();
    for (std::size_t i = 0; i < count; ++i) rows.push_back(next++);
  }
  return split_horizontal_assigned(t, assignment);
}

Partition split_horizontal_assigned(
    const DecisionTable& t,
    const std::vector<std::vector<std::uint32_t>>& assignment) {
  if (assignment.size() < 2)
    throw ConfigError("need at least 2 parties, got " +
                      std::to_string(assignment.size()));
  std::vector<int> owner(t.n_objects(), -1);
  for (std::size_t p = 0; p < assignment.size(); ++p)
    for (std::uint32_t o : assignment[p]) {
      if (o >= t.n_objects())
        throw ConfigError("row " + std::to_string(o) + " out of range");
      if (owner[o] != -1)
        throw ConfigError("row " + std::to_string(o) +
                          " assigned to two parties");
      owner[o] = static_cast<int>(p);
    }
  for (std::uint32_t o = 0; o < t.n_objects(); ++o)
    if (owner[o] == -1)
      throw ConfigError("row " + std::to_string(o) + " assigned to no party");

  Partition part{PartitionMode::horizontal, {}};
  std::vector<std::size_t> all_attrs(t.n_attributes());
  std::iota(all_attrs.begin(), all_attrs.end(), 0);
  for (const auto& rows : assignment) {
    PartyView v;
    v.local = DecisionTable(t.attribute_names(), t.decision_name());
    for (std::uint32_t o : rows) v.local.add_row(row_of(t, o), t.raw_decision(o));
    v.object_ids = rows;
    v.attribute_ids = all_attrs;
    part.views.push_back(std::move(v));
  }
  return part;
}

Partition split_vertical(const DecisionTable& t,
                         const std::vector<std::vector<std::size_t>>& groups) {
  if (groups.size() < 2)
    throw ConfigError("need at least 2 parties, got " +
                      std::to_string(groups.size()));
  std::vector<int> owner(t.n_attributes(), -1);
  for (std::size_t p = 0; p < groups.size(); ++p)
    for (std::size_t a : groups[p]) {
      if (a >= t.n_attributes())
        throw ConfigError("attribute index " + std::to_string(a) +
                          " out of range");
      if (owner[a] != -1)
        throw ConfigError("attribute '" + t.attribute_name(a) +
                          "' assigned to two parties");
      owner[a] = static_cast<int>(p);
    }
  for (std::size_t a = 0; a < t.n_attributes(); ++a)
    if (owner[a] == -1)
      throw ConfigError("attribute '" + t.attribute_name(a) +
                        "' assigned to no party");

  Partition part{PartitionMode::vertical, {}};
  std::vector<std::uint32_t> all_rows(t.n_objects());
  std::iota(all_rows.begin(), all_rows.end(), 0);
  for (const auto& attrs : groups) {
    PartyView v;
    std::vector<std::string> names;
    for (std::size_t a : attrs) names.push_back(t.attribute_name(a));
    v.local = DecisionTable(std::move(names), t.decision_name());
    for (std::uint32_t o = 0; o < t.n_objects(); ++o) {
      std::vector<std::string> row;
      for (std::size_t a : attrs) row.push_back(t.raw_value(o, a));
      v.local.add_row(row, t.raw_decision(o));
    }
    v.object_ids = all_rows;
    v.attribute_ids = attrs;
    part.views.push_back(std::move(v));
  }
  return part;
}

DecisionTable merge(const Partition& p) {
  if (p.views.empty()) throw ConfigError("empty partition");
  if (p.mode == PartitionMode::horizontal) {
    const auto& first = p.views.front();
    std::size_t total = 0;
    for (const auto& v : p.views) {
      if (v.local.attribute_names() != first.local.attribute_names() ||
          v.local.decision_name() != first.local.decision_name())
        throw ConfigError("fragments disagree on schema");
      total += v.local.n_objects();
    }
    // global row id -> (party, local row)
    std::vector<std::pair<std::size_t, std::uint32_t>> where(total);
    std::vector<bool> seen(total, false);
    for (std::size_t pi = 0; pi < p.views.size(); ++pi) {
      const auto& v = p.views[pi];
      for (std::uint32_t i = 0; i < v.local.n_objects(); ++i) {
        std::uint32_t g = v.object_ids[i];
        if (g >= total || seen[g]) throw ConfigError("bad row ownership");
        seen[g] = true;
        where[g] = {pi, i};
      }
    }
    DecisionTable out(first.local.attribute_names(),
                      first.local.decision_name());
    for (std::size_t g = 0; g < total; ++g) {
      const auto& v = p.views[where[g].first];
      out.add_row(row_of(v.local, where[g].second),
                  v.local.raw_decision(where[g].second));
    }
    return out;
  }

  // vertical
  std::size_t n_attrs = 0;
  for (const auto& v : p.views) n_attrs += v.attribute_ids.size();
  std::size_t n_objects = p.views.front().local.n_objects();
  std::vector<std::pair<std::size_t, std::size_t>> where(n_attrs);
  std::vector<std::string> names(n_attrs);
  std::vector<bool> seen(n_attrs, false);
  for (std::size_t pi = 0; pi < p.views.size(); ++pi) {
    const auto& v = p.views[pi];
    if (v.local.n_objects() != n_objects)
      throw ConfigError("fragments disagree on object count");
    for (std::size_t i = 0; i < v.attribute_ids.size(); ++i) {
      std::size_t g = v.attribute_ids[i];
      if (g >= n_attrs || seen[g]) throw ConfigError("bad attribute ownership");
      seen[g] = true;
      where[g] = {pi, i};
      names[g] = v.local.attribute_name(i);
    }
  }
  for (std::uint32_t o = 0; o < n_objects; ++o)
    for (const auto& v : p.views)
      if (v.local.raw_decision(o) != p.views.front().local.raw_decision(o))
        throw ConfigError("fragments disagree on the decision column");

  DecisionTable out(names, p.views.front().local.decision_name());
  for (std::uint32_t o = 0; o < n_objects; ++o) {
    std::vector<std::string> row;
    for (std::size_t g = 0; g < n_attrs; ++g) {
      const auto& v = p.views[where[g].first];
      row.push_back(v.local.raw_value(o, where[g].second));
    }
    out.add_row(row, p.views.front().local.raw_decision(o));
  }
  return out;
}

std::vector<std::size_t> parse_cuts(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() ||
        !std::all_of(item.begin(), item.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      throw ConfigError("bad cut list '" + s + "'");
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw ConfigError("empty cut list");
  return out;
}

std::vector<std::vector<std::string>> parse_groups(const std::string& s) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(s);
  std::string group;
  while (std::getline(ss, group, '|')) {
    auto& names = out.emplace_back();
    std::stringstream gs(group);
    std::string name;
    while (std::getline(gs, name, ',')) {
      if (!name.empty()) names.push_back(name);
    }
  }
  if (out.empty()) throw ConfigError("empty group list");
  return out;
}

std::string describe(const Partition& p) {
  std::ostringstream s;
  s << to_string(p.mode) << " ";
  if (p.mode == PartitionMode::horizontal) {
    s << "rows ";
    for (std::size_t i = 0; i < p.views.size(); ++i)
      s << (i ? "|" : "") << p.views[i].object_ids.size();
  } else {
    s << "attrs ";
    for (std::size_t i = 0; i < p.views.size(); ++i) {
      s << (i ? "|" : "");
      const auto& ids = p.views[i].attribute_ids;
      for (std::size_t k = 0; k < ids.size(); ++k)
        s << (k ? "," : "") << ids[k];
    }
  }
  return s.str();
}

}  // namespace ppfs
