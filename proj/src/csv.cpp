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

#include "rspace/csv.hpp"

#include <fstream>
#include <stdexcept>

namespace rspace::csv {

std::optional<std::vector<std::string>> split_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  cells.push_back(std::move(cell));
  return cells;
}

std::string escape(std::string_view cell) {
  if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(cells[i]);
  }
  return out;
}

Reader::Reader(std::istream& in, const std::vector<std::string>& required) : in_(in) {
  std::string line;
  if (!std::getline(in_, line)) throw std::runtime_error("missing CSV header row");
  ++line_number_;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto header = split_line(line);
  if (!header) throw std::runtime_error("malformed CSV header row");
  header_width_ = header->size();
  for (const auto& name : required) {
    std::size_t pos = 0;
    while (pos < header->size() && (*header)[pos] != name) ++pos;
    if (pos == header->size()) throw std::runtime_error("missing mandatory column '" + name + "'");
    positions_.push_back(pos);
  }
}

std::optional<Reader::Row> Reader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (line.empty() || line == "\r") continue;
    Row row;
    row.line = line_number_;
    auto cells = split_line(line);
    if (!cells) {
      row.error = "unterminated quote";
    } else if (cells->size() != header_width_) {
      row.error = "expected " + std::to_string(header_width_) + " cells, found " +
                  std::to_string(cells->size());
    } else {
      row.cells.reserve(positions_.size());
      for (auto p : positions_) row.cells.push_back(std::move((*cells)[p]));
    }
    return row;
  }
  return std::nullopt;
}

std::vector<std::vector<std::string>> read_file(const std::filesystem::path& path,
                                                const std::vector<std::string>& required) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Reader reader(in, required);
  std::vector<std::vector<std::string>> rows;
  while (auto row = reader.next()) {
    if (!row->ok())
      throw std::runtime_error(path.string() + ":" + std::to_string(row->line) + ": " + row->error);
    rows.push_back(std::move(row->cells));
  }
  return rows;
}

}  // namespace rspace::csv
