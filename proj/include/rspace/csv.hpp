// Copyright 2026 The Research Space Authors.
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

#ifndef RSPACE_CSV_HPP
#define RSPACE_CSV_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rspace::csv {

/// Splits one RFC 4180 style line. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_line(std::string_view line);

/// Quotes a cell when needed.
std::string escape(std::string_view cell);

std::string join(const std::vector<std::string>& cells);

/// Line-oriented reader with a mandatory header row.
class Reader {
 public:
  /// Reads the header; throws std::runtime_error when the stream is empty
  /// or a required column is missing (the message names the column).
  Reader(std::istream& in, const std::vector<std::string>& required);

  struct Row {
    std::size_t line = 0;
    /// Cells of the required columns, in constructor order.
    std::vector<std::string> cells;
    /// Nonempty when the line could not be split into the header's width.
    std::string error;
    bool ok() const { return error.empty(); }
  };

  /// Next nonblank data row, or nullopt at end of stream.
  std::optional<Row> next();

  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::vector<std::size_t> positions_;
  std::size_t header_width_ = 0;
  std::size_t line_number_ = 0;
};

/// Opens a file for reading; throws std::runtime_error naming the path.
std::vector<std::vector<std::string>> read_file(const std::filesystem::path& path,
                                                const std::vector<std::string>& required);

}  // namespace rspace::csv

#endif  // RSPACE_CSV_HPP
