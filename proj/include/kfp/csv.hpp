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

#pragma once

// Tabular experiment output and its CSV serialisation.

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace kfp {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct ColumnSpec {
  std::string name;
  std::string description;
};

class Table {
 public:
  Table() = default;
  explicit Table(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<double> row);

  std::size_t rows() const { return data_.size(); }
  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& data() const { return data_; }

  std::size_t index_of(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
  double at(std::size_t row, std::string_view name) const { return data_.at(row)[index_of(name)]; }

 private:
  std::vector<ColumnSpec> columns_;
  std::vector<std::vector<double>> data_;
};

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double x);

/// `#` comments (tool version, resolved config, summary), header row, data rows.
void write_csv(std::ostream& out, const Table& table, const nlohmann::json& config, const nlohmann::json& summary);

nlohmann::json schema_json(std::string_view experiment, const std::vector<ColumnSpec>& columns);

}  // namespace kfp
