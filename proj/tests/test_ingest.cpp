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

#include <doctest.h>

#include <sstream>

#include "rspace/ingest.hpp"

using namespace rspace;

namespace {

ParseResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in, CorpusFormat::Csv);
}

const char* kHeader = "author_id,paper_id,year,journal_id,coauthor_count\n";

FieldClassification toy_classification() {
  std::map<std::string, std::set<std::string>> journals;
  journals["j1"] = {"f1"};
  std::set<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.insert("g" + std::to_string(i));
  journals["j10"] = ten;
  std::map<std::string, FieldMeta> meta;
  meta["f1"] = {"Field one", "a1", "Area one"};
  for (const auto& g : ten) meta[g] = {g, "a2", "Area two"};
  return FieldClassification(journals, meta);
}

std::vector<PublicationRecord> papers_in_year(const std::string& author, int year, int n) {
  std::vector<PublicationRecord> out;
  for (int i = 0; i < n; ++i)
    out.push_back({author, author + "-" + std::to_string(year) + "-" + std::to_string(i), year,
                   "j1", 1});
  return out;
}

}  // namespace

TEST_CASE("parse_corpus maps csv columns") {
  auto r = parse_csv(std::string(kHeader) + "a1,p1,2005,j1,3\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0] == PublicationRecord{"a1", "p1", 2005, "j1", 3});
  CHECK(r.rejected.empty());
}

TEST_CASE("parse_corpus accepts reordered columns and quoted cells") {
  auto r = parse_csv("year,coauthor_count,journal_id,paper_id,author_id,extra\n"
                     "2001,2,\"j,1\",p9,a9,zzz\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0] == PublicationRecord{"a9", "p9", 2001, "j,1", 2});
}

TEST_CASE("coauthor_count of zero is rejected") {
  auto r = parse_csv(std::string(kHeader) + "a1,p1,2005,j1,0\n");
  CHECK(r.records.empty());
  REQUIRE(r.rejected.size() == 1);
  CHECK(r.rejected[0].line == 2);
}

TEST_CASE("three lines with one malformed give two records and one rejection") {
  auto r = parse_csv(std::string(kHeader) + "a1,p1,2005,j1,3\na2,p2,notayear,j1,1\na3,p3,2006,j2,1\n");
  CHECK(r.records.size() == 2);
  REQUIRE(r.rejected.size() == 1);
  CHECK(r.rejected[0].line == 3);
}

TEST_CASE("short rows and unterminated quotes are rejected with line numbers") {
  auto r = parse_csv(std::string(kHeader) + "a1,p1,2005\n\"a2,p2,2005,j1,1\n\na3,p3,2005,j1,1\n");
  CHECK(r.records.size() == 1);
  REQUIRE(r.rejected.size() == 2);
  CHECK(r.rejected[0].line == 2);
  CHECK(r.rejected[1].line == 3);
}

TEST_CASE("missing mandatory column is a hard error naming the column") {
  std::istringstream in("author_id,paper_id,year,journal_id\na1,p1,2005,j1\n");
  try {
    parse_corpus(in, CorpusFormat::Csv);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("coauthor_count") != std::string::npos);
  }
}

TEST_CASE("jsonl corpus") {
  std::istringstream in(
      R"({"author_id":"a1","paper_id":"p1","year":2005,"journal_id":"j1","coauthor_count":3})"
      "\nnot json\n"
      R"({"author_id":"a1","paper_id":"p2","year":2005,"journal_id":"j1"})"
      "\n"
      R"({"author_id":"a1","paper_id":"p3","year":"2005","journal_id":"j1","coauthor_count":1})"
      "\n");
  auto r = parse_corpus(in, CorpusFormat::Jsonl);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0] == PublicationRecord{"a1", "p1", 2005, "j1", 3});
  REQUIRE(r.rejected.size() == 3);
  CHECK(r.rejected[0].line == 2);
  CHECK(r.rejected[1].reason.find("coauthor_count") != std::string::npos);
}

TEST_CASE("parse is deterministic") {
  std::string text = std::string(kHeader);
  for (int i = 0; i < 200; ++i)
    text += "a" + std::to_string(i % 7) + ",p" + std::to_string(i) + "," +
            std::to_string(2000 + i % 11) + ",j" + std::to_string(i % 3) + "," +
            std::to_string(1 + i % 5) + "\n";
  auto a = parse_csv(text);
  auto b = parse_csv(text);
  CHECK(a.records == b.records);
}

TEST_CASE("filter_years drops and counts") {
  std::vector<PublicationRecord> recs = {{"a", "p1", 1900, "j1", 1},
                                         {"a", "p2", 1990, "j1", 1},
                                         {"a", "p3", 2024, "j1", 1}};
  auto r = filter_years(recs, {1971, 2015});
  CHECK(r.records.size() == 1);
  CHECK(r.dropped == 2);
}

TEST_CASE("filter_prolific boundary") {
  SUBCASE("49 papers every year is kept") {
    auto recs = papers_in_year("a", 2009, 49);
    auto more = papers_in_year("a", 2010, 49);
    recs.insert(recs.end(), more.begin(), more.end());
    CHECK(filter_prolific(recs).size() == recs.size());
  }
  SUBCASE("50 papers in one year drops every record of the author") {
    auto recs = papers_in_year("a", 2009, 50);
    auto more = papers_in_year("a", 2010, 3);
    recs.insert(recs.end(), more.begin(), more.end());
    auto other = papers_in_year("b", 2009, 5);
    recs.insert(recs.end(), other.begin(), other.end());
    auto kept = filter_prolific(recs);
    CHECK(kept.size() == 5);
    for (const auto& r : kept) CHECK(r.author_id == "b");
  }
  SUBCASE("duplicate paper ids count once") {
    auto recs = papers_in_year("a", 2009, 49);
    recs.push_back(recs.front());
    CHECK(filter_prolific(recs).size() == recs.size());
  }
  SUBCASE("empty input") { CHECK(filter_prolific({}).empty()); }
  SUBCASE("idempotent") {
    std::vector<PublicationRecord> recs;
    for (int a = 0; a < 6; ++a) {
      auto more = papers_in_year("a" + std::to_string(a), 2000 + a, 45 + 2 * a);
      recs.insert(recs.end(), more.begin(), more.end());
    }
    auto once = filter_prolific(recs, 50);
    CHECK(filter_prolific(once, 50) == once);
    CHECK(once.size() == 45 + 47 + 49);
  }
}

TEST_CASE("map_to_fields weights") {
  auto cls = toy_classification();
  SUBCASE("n_p = 10, m_p = 1 gives one share of 0.1") {
    auto r = map_to_fields({{"a", "p", 2000, "j1", 10}}, cls);
    REQUIRE(r.pubs.size() == 1);
    CHECK(r.pubs[0].weight == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r.pubs[0].field_id == "f1");
  }
  SUBCASE("n_p = 1, m_p = 10 gives ten shares of 0.1") {
    auto r = map_to_fields({{"a", "p", 2000, "j10", 1}}, cls);
    REQUIRE(r.pubs.size() == 10);
    for (const auto& p : r.pubs) CHECK(p.weight == doctest::Approx(0.1).epsilon(1e-15));
  }
  SUBCASE("unknown journal is counted") {
    auto r = map_to_fields({{"a", "p", 2000, "nope", 1}}, cls);
    CHECK(r.pubs.empty());
    CHECK(r.unmapped_records == 1);
  }
  SUBCASE("shares of one record sum to 1/n_p") {
    for (int n = 1; n <= 40; ++n) {
      auto r = map_to_fields({{"a", "p", 2000, "j10", n}}, cls);
      double sum = 0.0;
      for (const auto& p : r.pubs) {
        CHECK(p.weight > 0.0);
        CHECK(p.weight <= 1.0);
        sum += p.weight;
      }
      CHECK(std::abs(sum - 1.0 / n) <= 1e-12);
    }
  }
}

TEST_CASE("classification validation") {
  std::map<std::string, FieldMeta> meta{{"f1", {"F", "a", "A"}}};
  CHECK_THROWS_AS(FieldClassification({{"j", {}}}, meta), std::invalid_argument);
  CHECK_THROWS_AS(FieldClassification({{"j", {"f2"}}}, meta), std::invalid_argument);
  CHECK_NOTHROW(FieldClassification({{"j", {"f1"}}}, meta));
}

TEST_CASE("aggregate_entities") {
  AffiliationMap aff;
  aff.author_to_org = {{"a1", "o1"}, {"a2", "o1"}, {"a3", "o2"}};
  aff.org_to_country = {{"o1", "c1"}};
  std::vector<FieldedPublication> pubs = {{"a1", "f", 2000, 0.5},
                                          {"a2", "f", 2001, 0.25},
                                          {"a3", "g", 2001, 0.125},
                                          {"a4", "g", 2002, 1.0}};
  SUBCASE("author level is the identity") {
    auto r = aggregate_entities(pubs, aff, Level::Author);
    CHECK(r.pubs == pubs);
    CHECK(r.excluded_authors == 0);
  }
  SUBCASE("organization relabels and excludes unaffiliated authors") {
    auto r = aggregate_entities(pubs, aff, Level::Organization);
    REQUIRE(r.pubs.size() == 3);
    CHECK(r.pubs[0].entity_id == "o1");
    CHECK(r.pubs[1].entity_id == "o1");
    CHECK(r.pubs[0].weight == 0.5);
    CHECK(r.pubs[1].weight == 0.25);
    CHECK(r.excluded_authors == 1);
    CHECK(r.excluded_pubs == 1);
  }
  SUBCASE("country level also excludes orgs without a country") {
    auto r = aggregate_entities(pubs, aff, Level::Country);
    REQUIRE(r.pubs.size() == 2);
    CHECK(r.excluded_authors == 2);
  }
  SUBCASE("total weight of kept authors is preserved") {
    auto r = aggregate_entities(pubs, aff, Level::Organization);
    double in = 0.0, out = 0.0;
    for (const auto& p : pubs)
      if (aff.author_to_org.count(p.entity_id)) in += p.weight;
    for (const auto& p : r.pubs) out += p.weight;
    CHECK(in == out);
  }
}

TEST_CASE("field universe holds mapped fields only") {
  auto cls = toy_classification();
  auto r = map_to_fields({{"a", "p", 2000, "j1", 1}}, cls);
  auto u = field_universe(r.pubs);
  CHECK(u.size() == 1);
  CHECK(u.id(0) == "f1");
}
