#include "ppfs/decision_table.hpp"

#include "ppfs/errors.hpp"

namespace ppfs {

DecisionTable::DecisionTable(std::vector<std::string> attribute_names,
                             std::string decision_name)
    : attr_names_(std::move(attribute_names)),
      decision_name_(std::move(decision_name)),
      columns_(attr_names_.size()) {}

std::uint32_t DecisionTable::Column::intern(const std::string& s) {
  auto [it, fresh] = lut.try_emplace(s, static_cast<std::uint32_t>(labels.size()));
  if (fresh) labels.push_back(s);
  return it->second;
}

void DecisionTable::add_row(const std::vector<std::string>& values,
                            const std::string& decision) {
  if (values.size() != n_attributes())
    throw ConfigError("row arity " + std::to_string(values.size()) +
                      " does not match attribute count " +
                      std::to_string(n_attributes()));
  for (std::size_t a = 0; a < values.size(); ++a)
    columns_[a].ids.push_back(columns_[a].intern(values[a]));
  decision_.ids.push_back(decision_.intern(decision));
  ++n_objects_;
}

}  // namespace ppfs
