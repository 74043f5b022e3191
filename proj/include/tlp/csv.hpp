// Copyright 2026 The tlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tlp::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style reader: quoted fields may contain commas, quotes ("")
/// and newlines.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. line() reports the physical
  /// line on which the returned record started (1-based).
  std::optional<Row> next();
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t physical_line_ = 0;
  std::size_t record_line_ = 0;
};

std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

/// Reads a whole file with a header row; throws DataError if unreadable.
struct Table {
  Row header;
  std::vector<Row> rows;

  /// Index of a header column, or throws DataError.
  std::size_t column(std::string_view name) const;
};
Table read_file(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view text, char sep);
std::string join(const std::vector<std::string>& parts, char sep);

}  // namespace tlp::csv
