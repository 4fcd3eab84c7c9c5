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

#include "rspace/ingest.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rspace/csv.hpp"

namespace rspace {

namespace {

bool parse_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// Empty string on success, otherwise the rejection reason.
std::string validate(const PublicationRecord& r) {
  if (r.author_id.empty()) return "empty author_id";
  if (r.paper_id.empty()) return "empty paper_id";
  if (r.journal_id.empty()) return "empty journal_id";
  if (r.coauthor_count < 1) return "coauthor_count must be >= 1";
  return {};
}

const std::vector<std::string> kCorpusColumns = {"author_id", "paper_id", "year", "journal_id",
                                                 "coauthor_count"};

ParseResult parse_csv(std::istream& in) {
  ParseResult result;
  csv::Reader reader(in, kCorpusColumns);
  while (auto row = reader.next()) {
    if (!row->ok()) {
      result.rejected.push_back({row->line, row->error});
      continue;
    }
    auto& c = row->cells;
    PublicationRecord r{c[0], c[1], 0, c[3], 0};
    if (!parse_int(c[2], r.year)) {
      result.rejected.push_back({row->line, "year is not an integer"});
      continue;
    }
    if (!parse_int(c[4], r.coauthor_count)) {
      result.rejected.push_back({row->line, "coauthor_count is not an integer"});
      continue;
    }
    if (auto why = validate(r); !why.empty()) {
      result.rejected.push_back({row->line, why});
      continue;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

ParseResult parse_jsonl(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      result.rejected.push_back({line_no, "not a JSON object"});
      continue;
    }
    std::string missing;
    for (const auto& key : kCorpusColumns) {
      if (!doc.contains(key)) {
        missing = key;
        break;
      }
    }
    if (!missing.empty()) {
      result.rejected.push_back({line_no, "missing key '" + missing + "'"});
      continue;
    }
    const auto& a = doc["author_id"];
    const auto& p = doc["paper_id"];
    const auto& j = doc["journal_id"];
    const auto& y = doc["year"];
    const auto& n = doc["coauthor_count"];
    if (!a.is_string() || !p.is_string() || !j.is_string()) {
      result.rejected.push_back({line_no, "id fields must be strings"});
      continue;
    }
    if (!y.is_number_integer() || !n.is_number_integer()) {
      result.rejected.push_back({line_no, "year and coauthor_count must be integers"});
      continue;
    }
    PublicationRecord r{a.get<std::string>(), p.get<std::string>(), y.get<int>(),
                        j.get<std::string>(), n.get<int>()};
    if (auto why = validate(r); !why.empty()) {
      result.rejected.push_back({line_no, why});
      continue;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace

FieldClassification::FieldClassification(
    std::map<std::string, std::set<std::string>> journal_to_fields,
    std::map<std::string, FieldMeta> field_meta)
    : journal_to_fields_(std::move(journal_to_fields)), field_meta_(std::move(field_meta)) {
  for (const auto& [journal, fields] : journal_to_fields_) {
    if (fields.empty()) throw std::invalid_argument("journal " + journal + " maps to no field");
    for (const auto& f : fields) {
      if (!field_meta_.count(f))
        throw std::invalid_argument("journal " + journal + " references unknown field " + f);
    }
  }
}

const std::set<std::string>* FieldClassification::fields_of(const std::string& journal_id) const {
  auto it = journal_to_fields_.find(journal_id);
  return it == journal_to_fields_.end() ? nullptr : &it->second;
}

const FieldMeta* FieldClassification::meta(const std::string& field_id) const {
  auto it = field_meta_.find(field_id);
  return it == field_meta_.end() ? nullptr : &it->second;
}

ParseResult parse_corpus(std::istream& in, CorpusFormat format) {
  return format == CorpusFormat::Csv ? parse_csv(in) : parse_jsonl(in);
}

ParseResult parse_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto ext = path.extension().string();
  return parse_corpus(in, (ext == ".jsonl" || ext == ".json") ? CorpusFormat::Jsonl
                                                              : CorpusFormat::Csv);
}

YearFilterResult filter_years(std::vector<PublicationRecord> records, YearWindow range) {
  YearFilterResult out;
  out.records.reserve(records.size());
  for (auto& r : records) {
    if (range.contains(r.year))
      out.records.push_back(std::move(r));
    else
      ++out.dropped;
  }
  return out;
}

std::vector<PublicationRecord> filter_prolific(const std::vector<PublicationRecord>& records,
                                               int max_per_year) {
  if (max_per_year < 1) throw std::invalid_argument("max_per_year must be >= 1");
  std::unordered_map<std::string, std::unordered_map<int, std::unordered_set<std::string>>> papers;
  for (const auto& r : records) papers[r.author_id][r.year].insert(r.paper_id);

  std::unordered_set<std::string> banned;
  for (const auto& [author, by_year] : papers) {
    for (const auto& [year, ids] : by_year) {
      if (ids.size() >= static_cast<std::size_t>(max_per_year)) {
        banned.insert(author);
        break;
      }
    }
  }
  std::vector<PublicationRecord> out;
  out.reserve(records.size());
  for (const auto& r : records)
    if (!banned.count(r.author_id)) out.push_back(r);
  return out;
}

FieldMappingResult map_to_fields(const std::vector<PublicationRecord>& records,
                                 const FieldClassification& classification) {
  FieldMappingResult out;
  for (const auto& r : records) {
    const auto* fields = classification.fields_of(r.journal_id);
    if (!fields) {
      ++out.unmapped_records;
      continue;
    }
    const double weight =
        1.0 / (static_cast<double>(r.coauthor_count) * static_cast<double>(fields->size()));
    for (const auto& f : *fields) out.pubs.push_back({r.author_id, f, r.year, weight});
  }
  return out;
}

AggregationResult aggregate_entities(const std::vector<FieldedPublication>& pubs,
                                     const AffiliationMap& affiliations, Level level) {
  AggregationResult out;
  if (level == Level::Author) {
    out.pubs = pubs;
    return out;
  }
  std::set<std::string> excluded;
  out.pubs.reserve(pubs.size());
  for (const auto& p : pubs) {
    auto org = affiliations.author_to_org.find(p.entity_id);
    const std::string* target = nullptr;
    if (org != affiliations.author_to_org.end()) {
      if (level == Level::Organization) {
        target = &org->second;
      } else {
        auto country = affiliations.org_to_country.find(org->second);
        if (country != affiliations.org_to_country.end()) target = &country->second;
      }
    }
    if (!target) {
      excluded.insert(p.entity_id);
      ++out.excluded_pubs;
      continue;
    }
    out.pubs.push_back({*target, p.field_id, p.year, p.weight});
  }
  out.excluded_authors = excluded.size();
  return out;
}

FieldIndex field_universe(const std::vector<FieldedPublication>& pubs) {
  std::set<std::string> ids;
  for (const auto& p : pubs) ids.insert(p.field_id);
  return FieldIndex(std::vector<std::string>(ids.begin(), ids.end()));
}

FieldClassification load_classification(const std::filesystem::path& journal_fields_csv,
                                        const std::filesystem::path& field_meta_csv) {
  std::map<std::string, std::set<std::string>> journals;
  for (auto& row : csv::read_file(journal_fields_csv, {"journal_id", "field_id"}))
    journals[row[0]].insert(row[1]);
  std::map<std::string, FieldMeta> meta;
  for (auto& row :
       csv::read_file(field_meta_csv, {"field_id", "field_name", "area_id", "area_name"})) {
    if (meta.count(row[0])) throw std::invalid_argument("duplicate field metadata for " + row[0]);
    meta[row[0]] = {row[1], row[2], row[3]};
  }
  return FieldClassification(std::move(journals), std::move(meta));
}

AffiliationMap load_affiliations(const std::filesystem::path& author_org_csv,
                                 const std::filesystem::path& org_country_csv) {
  AffiliationMap map;
  for (auto& row : csv::read_file(author_org_csv, {"author_id", "org_id"})) {
    auto [it, inserted] = map.author_to_org.emplace(row[0], row[1]);
    if (!inserted && it->second != row[1])
      throw std::invalid_argument("author " + row[0] + " has conflicting organizations");
  }
  for (auto& row : csv::read_file(org_country_csv, {"org_id", "country_id"})) {
    auto [it, inserted] = map.org_to_country.emplace(row[0], row[1]);
    if (!inserted && it->second != row[1])
      throw std::invalid_argument("organization " + row[0] + " has conflicting countries");
  }
  return map;
}

}  // namespace rspace
