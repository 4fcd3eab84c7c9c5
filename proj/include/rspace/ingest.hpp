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

#ifndef RSPACE_INGEST_HPP
#define RSPACE_INGEST_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rspace/common.hpp"

namespace rspace {

/// One (author, paper) authorship event.
struct PublicationRecord {
  std::string author_id;
  std::string paper_id;
  int year = 0;
  std::string journal_id;
  int coauthor_count = 1;  // n_p, this author included

  friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct FieldMeta {
  std::string name;
  std::string area_id;
  std::string area_name;
};

/// Journal to field multi-map plus the field to area hierarchy.
class FieldClassification {
 public:
  FieldClassification() = default;
  /// Throws std::invalid_argument if a journal has no fields or references a
  /// field that has no metadata.
  FieldClassification(std::map<std::string, std::set<std::string>> journal_to_fields,
                      std::map<std::string, FieldMeta> field_meta);

  const std::set<std::string>* fields_of(const std::string& journal_id) const;
  const FieldMeta* meta(const std::string& field_id) const;
  const std::map<std::string, std::set<std::string>>& journals() const { return journal_to_fields_; }
  const std::map<std::string, FieldMeta>& fields() const { return field_meta_; }

 private:
  std::map<std::string, std::set<std::string>> journal_to_fields_;
  std::map<std::string, FieldMeta> field_meta_;
};

struct AffiliationMap {
  std::map<std::string, std::string> author_to_org;
  std::map<std::string, std::string> org_to_country;
};

/// One field share of one publication, attributed to an entity.
struct FieldedPublication {
  std::string entity_id;
  std::string field_id;
  int year = 0;
  double weight = 0.0;  // 1 / (n_p * m_p)

  friend bool operator==(const FieldedPublication&, const FieldedPublication&) = default;
};

enum class CorpusFormat { Csv, Jsonl };

struct RejectedLine {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<PublicationRecord> records;
  std::vector<RejectedLine> rejected;
};

/// Parses the corpus stream. Malformed lines are skipped and reported with
/// their line number; a missing mandatory CSV column throws std::runtime_error.
ParseResult parse_corpus(std::istream& in, CorpusFormat format);
ParseResult parse_corpus_file(const std::filesystem::path& path);

struct YearFilterResult {
  std::vector<PublicationRecord> records;
  std::size_t dropped = 0;
};

/// Keeps records whose year lies in `range`.
YearFilterResult filter_years(std::vector<PublicationRecord> records, YearWindow range);

/// Removes every record of any author having >= max_per_year distinct papers
/// in some calendar year.
std::vector<PublicationRecord> filter_prolific(const std::vector<PublicationRecord>& records,
                                               int max_per_year = 50);

struct FieldMappingResult {
  std::vector<FieldedPublication> pubs;
  std::size_t unmapped_records = 0;
};

/// Expands each record into one share per field of its journal.
FieldMappingResult map_to_fields(const std::vector<PublicationRecord>& records,
                                 const FieldClassification& classification);

struct AggregationResult {
  std::vector<FieldedPublication> pubs;
  /// Distinct authors with no affiliation at the requested level.
  std::size_t excluded_authors = 0;
  std::size_t excluded_pubs = 0;
};

/// Relabels author-level shares with their organization or country.
AggregationResult aggregate_entities(const std::vector<FieldedPublication>& pubs,
                                     const AffiliationMap& affiliations, Level level);

/// Field universe: every field with at least one mapped share.
FieldIndex field_universe(const std::vector<FieldedPublication>& pubs);

FieldClassification load_classification(const std::filesystem::path& journal_fields_csv,
                                        const std::filesystem::path& field_meta_csv);
AffiliationMap load_affiliations(const std::filesystem::path& author_org_csv,
                                 const std::filesystem::path& org_country_csv);

}  // namespace rspace

#endif  // RSPACE_INGEST_HPP
