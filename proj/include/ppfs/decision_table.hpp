#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ppfs {

// A decision table: objects x (categorical attributes + one decision column).
// Cell values are interned per column; ids are dense and assigned in first-seen
// order, so two tables built from the same rows in the same order get the same
// ids. Raw strings are kept alongside because cross-party hashing has to agree
// on the original text, not on per-table id assignment.
class DecisionTable {
 public:
  DecisionTable() = default;
  DecisionTable(std::vector<std::string> attribute_names,
                std::string decision_name);

  // values.size() must equal n_attributes().
  void add_row(const std::vector<std::string>& values,
               const std::string& decision);

  std::size_t n_objects() const { return n_objects_; }
  std::size_t n_attributes() const { return attr_names_.size(); }

  std::uint32_t value(std::uint32_t obj, std::size_t attr) const {
    return columns_[attr].ids[obj];
  }
  const std::string& raw_value(std::uint32_t obj, std::size_t attr) const {
    const Column& c = columns_[attr];
    return c.labels[c.ids[obj]];
  }
  std::uint32_t decision(std::uint32_t obj) const {
    return decision_.ids[obj];
  }
  const std::string& raw_decision(std::uint32_t obj) const {
    return decision_.labels[decision_.ids[obj]];
  }

  std::size_t n_values(std::size_t attr) const {
    return columns_[attr].labels.size();
  }
  std::size_t n_decisions() const { return decision_.labels.size(); }

  const std::string& attribute_name(std::size_t attr) const {
    return attr_names_[attr];
  }
  const std::vector<std::string>& attribute_names() const {
    return attr_names_;
  }
  const std::string& decision_name() const { return decision_name_; }

 private:
  struct Column {
    std::vector<std::uint32_t> ids;                      // per object
    std::vector<std::string> labels;                     // id -> raw text
    std::unordered_map<std::string, std::uint32_t> lut;  // raw text -> id
    std::uint32_t intern(const std::string& s);
  };

  std::vector<std::string> attr_names_;
  std::string decision_name_;
  std::vector<Column> columns_;
  Column decision_;
  std::size_t n_objects_ = 0;
};

}  // namespace ppfs
