// Copyright 2026 The kfp-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kfp/csv.hpp"

#include <cmath>
#include <cstdio>

#include "kfp/errors.hpp"

namespace kfp {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns_.size())
    throw SizeMismatchError("row has " + std::to_string(row.size()) + " values, table has " +
                            std::to_string(columns_.size()) + " columns");
  data_.push_back(std::move(row));
}

std::size_t Table::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  throw ParameterError("no column named '" + std::string(name) + "'");
}

std::vector<double> Table::column(std::string_view name) const {
  const std::size_t k = index_of(name);
  std::vector<double> out;
  out.reserve(data_.size());
  for (const auto& row : data_) out.push_back(row[k]);
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, const nlohmann::json& config, const nlohmann::json& summary) {
  out << "# kfp-lab " << kToolVersion << '\n';
  out << "# config: " << config.dump() << '\n';
  if (!summary.is_null()) out << "# summary: " << summary.dump() << '\n';
  const auto& cols = table.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].name;
  out << '\n';
  for (const auto& row : table.data()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

nlohmann::json schema_json(std::string_view experiment, const std::vector<ColumnSpec>& columns) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns) cols.push_back({{"name", c.name}, {"type", "float64"}, {"description", c.description}});
  return {{"experiment", std::string(experiment)}, {"tool_version", std::string(kToolVersion)}, {"columns", cols}};
}

}  // namespace kfp
