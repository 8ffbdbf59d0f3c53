// Copyright 2026 The Authsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUTHSIM_RISK_POPULATION_H_
#define AUTHSIM_RISK_POPULATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace authsim::risk {

// Attribute name -> canonical value text.
using AttributeAssignment = std::map<std::string, std::string>;

// Row set over a PopulationTable, one bit per row.
class RowSet {
 public:
  RowSet() = default;
  RowSet(std::size_t rows, bool filled);

  void Set(std::size_t row) { words_[row / 64] |= 1ULL << (row % 64); }
  bool Test(std::size_t row) const { return (words_[row / 64] >> (row % 64)) & 1; }
  RowSet& operator&=(const RowSet& other);
  std::size_t Count() const;

 private:
  std::size_t rows_ = 0;
  std::vector<std::uint64_t> words_;
};

// Immutable population sample used as the reference distribution for the
// risk indicators. Indexed by (column, value) for fast conjunctive counts.
class PopulationTable {
 public:
  // Header row of attribute names, then one row per individual. Cells are
  // taken verbatim after trimming whitespace.
  static absl::StatusOr<PopulationTable> FromCsv(std::string_view text);
  static absl::StatusOr<PopulationTable> LoadCsv(const std::string& path);
  static absl::StatusOr<PopulationTable> FromRows(
      std::vector<std::string> columns,
      std::vector<std::vector<std::string>> rows);

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::optional<std::size_t> ColumnIndex(std::string_view name) const;
  bool HasColumn(std::string_view name) const {
    return ColumnIndex(name).has_value();
  }
  // Distinct values of a column in ascending order.
  std::vector<std::string> Values(std::string_view column) const;

  // Rows satisfying every (column = value) in `filter`. Unknown columns must
  // be rejected by the caller.
  RowSet Match(const AttributeAssignment& filter) const;
  std::size_t CountMatching(const AttributeAssignment& filter) const {
    return Match(filter).Count();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  // index_[column][value] = rows with that value.
  std::vector<std::map<std::string, RowSet, std::less<>>> index_;
};

}  // namespace authsim::risk

#endif  // AUTHSIM_RISK_POPULATION_H_
