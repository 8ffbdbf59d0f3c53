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

#include "authsim/risk/population.h"

#include <bit>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "authsim/common/status.h"

namespace authsim::risk {
namespace {

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

// RFC 4180 style: fields may be double-quoted, "" escapes a quote.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line,
                                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(Trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "unterminated quote on line " + std::to_string(line_no));
  }
  fields.push_back(Trim(current));
  return fields;
}

}  // namespace

RowSet::RowSet(std::size_t rows, bool filled)
    : rows_(rows), words_((rows + 63) / 64, filled ? ~0ULL : 0ULL) {
  if (filled && rows % 64 != 0) {
    words_.back() = (1ULL << (rows % 64)) - 1;
  }
}

RowSet& RowSet::operator&=(const RowSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

std::size_t RowSet::Count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

absl::StatusOr<PopulationTable> PopulationTable::FromCsv(std::string_view text) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;
    if (Trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    AUTHSIM_ASSIGN_OR_RETURN(std::vector<std::string> fields,
                             SplitCsvLine(line, line_no));
    if (columns.empty()) {
      columns = std::move(fields);
    } else {
      if (fields.size() != columns.size()) {
        return MakeError(ErrorCode::kInvalidArgument,
                         "line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(columns.size()));
      }
      rows.push_back(std::move(fields));
    }
    if (end == text.size()) break;
  }
  return FromRows(std::move(columns), std::move(rows));
}

absl::StatusOr<PopulationTable> PopulationTable::LoadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorCode::kNotFound, "cannot open population " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromCsv(buffer.str());
}

absl::StatusOr<PopulationTable> PopulationTable::FromRows(
    std::vector<std::string> columns, std::vector<std::vector<std::string>> rows) {
  if (columns.empty()) {
    return MakeError(ErrorCode::kInvalidArgument, "population has no header");
  }
  std::set<std::string> unique(columns.begin(), columns.end());
  if (unique.size() != columns.size()) {
    return MakeError(ErrorCode::kInvalidArgument, "duplicate population column");
  }
  if (rows.empty()) {
    return MakeError(ErrorCode::kInvalidArgument, "population has no rows");
  }
  PopulationTable table;
  table.columns_ = std::move(columns);
  table.rows_ = std::move(rows);
  const std::size_t n = table.rows_.size();
  table.index_.resize(table.columns_.size());
  for (std::size_t r = 0; r < n; ++r) {
    if (table.rows_[r].size() != table.columns_.size()) {
      return MakeError(ErrorCode::kInvalidArgument,
                       "row " + std::to_string(r) + " does not match header");
    }
    for (std::size_t c = 0; c < table.columns_.size(); ++c) {
      auto& by_value = table.index_[c];
      auto it = by_value.find(table.rows_[r][c]);
      if (it == by_value.end()) {
        it = by_value.emplace(table.rows_[r][c], RowSet(n, false)).first;
      }
      it->second.Set(r);
    }
  }
  return table;
}

std::optional<std::size_t> PopulationTable::ColumnIndex(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> PopulationTable::Values(std::string_view column) const {
  std::vector<std::string> out;
  if (std::optional<std::size_t> c = ColumnIndex(column)) {
    for (const auto& [value, rows] : index_[*c]) out.push_back(value);
  }
  return out;
}

RowSet PopulationTable::Match(const AttributeAssignment& filter) const {
  RowSet result(rows_.size(), true);
  for (const auto& [name, value] : filter) {
    std::optional<std::size_t> c = ColumnIndex(name);
    if (!c) continue;
    auto it = index_[*c].find(value);
    if (it == index_[*c].end()) return RowSet(rows_.size(), false);
    result &= it->second;
  }
  return result;
}

}  // namespace authsim::risk
