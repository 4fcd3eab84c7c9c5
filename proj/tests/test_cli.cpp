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

#include <cstdlib>
#include <map>

#include <json.hpp>

#include "rspace/pipeline.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace rspace;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rspace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files[entry.path().filename().string()] = support::read_file(entry.path());
  return files;
}

// Three scholars: s1 in {f1, f2}, s2 in {f1}, s3 in {f1, f2, f3}; s2 enters f2 in 2012.
void write_toy(const fs::path& dir) {
  support::write_file(dir / "corpus.csv",
                      "author_id,paper_id,year,journal_id,coauthor_count\n"
                      "s1,p1,2009,j1,1\ns1,p2,2009,j2,1\n"
                      "s2,p3,2009,j1,1\n"
                      "s3,p4,2009,j1,1\ns3,p5,2010,j2,1\ns3,p6,2010,j3,1\n"
                      "s1,p7,2012,j1,1\ns2,p8,2012,j2,1\ns3,p9,2012,j3,1\n");
  support::write_file(dir / "journal_fields.csv", "journal_id,field_id\nj1,f1\nj2,f2\nj3,f3\n");
  support::write_file(dir / "field_meta.csv",
                      "field_id,field_name,area_id,area_name\n"
                      "f1,One,a,Area A\nf2,Two,a,Area A\nf3,Three,b,Area B\n");
  support::write_file(dir / "author_org.csv", "author_id,org_id\ns1,o1\ns2,o1\ns3,o2\n");
  support::write_file(dir / "org_country.csv", "org_id,country_id\no1,c1\no2,c1\n");
  support::write_file(dir / "config.json", R"({
  "corpus": "corpus.csv",
  "journal_fields": "journal_fields.csv",
  "field_meta": "field_meta.csv",
  "author_org": "author_org.csv",
  "org_country": "org_country.csv",
  "output_dir": "out",
  "b": 0
})");
}

std::vector<std::vector<std::string>> toy_chain(const std::string& config) {
  return {{"build-space", "--config", config},
          {"states", "--config", config},
          {"predict", "--config", config},
          {"predict", "--config", config, "--map", "shuffled", "--shuffle-seed", "4"},
          {"evaluate", "--config", config},
          {"export-backbone", "--config", config, "--overlay-entity", "s2"},
          {"export-backbone", "--config", config, "--format", "json"},
          {"export-backbone", "--config", config, "--format", "dot"}};
}

}  // namespace

TEST_CASE("toy corpus through every command") {
  support::TempDir dir("cli-toy");
  write_toy(dir.path());
  const auto config = (dir.path() / "config.json").string();
  for (const auto& args : toy_chain(config)) {
    auto r = run(args);
    INFO(args[0] << ": " << r.err);
    REQUIRE(r.code == 0);
  }
  const auto out = dir.path() / "out";
  const auto phi = support::read_file(out / "phi.csv");
  CHECK(phi.find("f1,f2,1\n") != std::string::npos);
  CHECK(phi.find("f2,f1,0.666666666667\n") != std::string::npos);
  CHECK(phi.find("f3,f2,0.5\n") != std::string::npos);
  auto report = nlohmann::json::parse(support::read_file(out / "build_report.json"));
  CHECK(report["n_scholars"] == 3);
  CHECK(report["n_fields"] == 3);

  auto eval = nlohmann::json::parse(support::read_file(out / "evaluation.json"));
  CHECK(eval["reference_values"]["author"]["inactive_to_active"]["research-space"] == 0.896);
  CHECK(eval["reference_values"]["author"]["inactive_to_active"]["external"] == 0.803);
  bool found = false;
  for (const auto& r : eval["results"])
    if (r["map"] == "research-space" && r["transition"] == "inactive_to_active") {
      found = true;
      CHECK(r["n"] == 1);
      CHECK(r["mean"] == 1.0);
      for (const char* key : {"median", "q1", "q3", "w_lo", "w_hi", "excluded_undefined", "F", "p_value"})
        CHECK(r.contains(key));
    }
  CHECK(found);
  CHECK(fs::exists(out / "table.txt"));
  CHECK(support::read_file(out / "backbone.graphml").find("<data key=\"state\">") != std::string::npos);
  CHECK(fs::exists(out / "backbone.json"));
  CHECK(fs::exists(out / "backbone.dot"));
  for (const auto& entry : fs::directory_iterator(out))
    CHECK(entry.path().extension() != ".tmp");
}

TEST_CASE("commands are byte-identical across reruns and thread counts") {
  support::TempDir dir("cli-det");
  REQUIRE(run({"synth", "--out", dir.path().string(), "--seed", "3", "--scholars", "150"}).code == 0);
  const auto config = (dir.path() / "config.json").string();
  std::vector<std::vector<std::string>> chain = {
      {"build-space"}, {"states"}, {"states", "--level", "organization"}, {"predict"},
      {"predict", "--map", "external"}, {"predict", "--map", "shuffled"},
      {"predict", "--level", "organization", "--transition", "nascent_to_developed"},
      {"evaluate"}, {"export-backbone"}};
  std::vector<std::map<std::string, std::string>> snaps;
  for (const char* threads : {"1", "1", "4", "0"}) {
    for (auto args : chain) {
      args.insert(args.end(), {"--config", config, "--threads", threads});
      auto r = run(args);
      INFO(args[0] << ": " << r.err);
      REQUIRE(r.code == 0);
    }
    snaps.push_back(snapshot(dir.path()));
  }
  CHECK(snaps[0].size() > 20);
  CHECK(snaps[0] == snaps[1]);
  CHECK(snaps[0] == snaps[2]);
  CHECK(snaps[0] == snaps[3]);
}

TEST_CASE("synthetic seed 1 beats the shuffled baseline") {
  support::TempDir dir("cli-seed1");
  REQUIRE(run({"synth", "--out", dir.path().string(), "--seed", "1"}).code == 0);
  const auto config = (dir.path() / "config.json").string();
  for (std::vector<std::string> args :
       {std::vector<std::string>{"build-space"}, {"states"}, {"predict"},
        {"predict", "--map", "shuffled"}, {"predict", "--map", "external"}, {"evaluate"}}) {
    args.insert(args.end(), {"--config", config});
    REQUIRE(run(args).code == 0);
  }
  auto eval = nlohmann::json::parse(support::read_file(dir.path() / "evaluation.json"));
  std::map<std::string, double> mean;
  for (const auto& r : eval["results"])
    if (r["level"] == "author" && r["transition"] == "inactive_to_active")
      mean[r["map"]] = r["mean"].get<double>();
  REQUIRE(mean.count("research-space"));
  REQUIRE(mean.count("shuffled"));
  CHECK(mean["research-space"] > mean["shuffled"]);
  const auto table = support::read_file(dir.path() / "table.txt");
  CHECK(table.find("research-space") != std::string::npos);
  CHECK(table.find("external") != std::string::npos);
  CHECK(table.find("p=") != std::string::npos);
  auto report = nlohmann::json::parse(support::read_file(dir.path() / "build_report.json"));
  CHECK(report["map_correlation"]["pairs"].get<int>() > 0);
  CHECK(fs::exists(dir.path() / "scatter.csv"));
}

TEST_CASE("exit codes") {
  support::TempDir dir("cli-codes");
  SUBCASE("unknown flag is a usage error") {
    auto r = run({"build-space", "--no-such-flag"});
    CHECK(r.code == 64);
    CHECK(r.err.find("Usage") != std::string::npos);
  }
  SUBCASE("missing subcommand is a usage error") { CHECK(run({}).code == 64); }
  SUBCASE("bad window is a usage error") {
    CHECK(run({"states", "--state-window", "2012-2010"}).code == 64);
    CHECK(run({"states", "--state-window", "2008-2012"}).code == 64);
  }
  SUBCASE("missing upstream artifact names the path") {
    auto r = run({"predict", "--out", dir.path().string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("phi.csv") != std::string::npos);
    auto e = run({"evaluate", "--out", dir.path().string()});
    CHECK(e.code == 2);
  }
  SUBCASE("missing corpus") {
    auto r = run({"build-space", "--corpus", (dir.path() / "nope.csv").string(), "--out",
                  dir.path().string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("nope.csv") != std::string::npos);
  }
  SUBCASE("empty corpus") {
    write_toy(dir.path());
    support::write_file(dir.path() / "corpus.csv",
                        "author_id,paper_id,year,journal_id,coauthor_count\n");
    auto r = run({"build-space", "--config", (dir.path() / "config.json").string()});
    CHECK(r.code == 65);
    CHECK(r.err.find("no scholars after filtering") != std::string::npos);
  }
  SUBCASE("help") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("build-space") != std::string::npos);
  }
}

TEST_CASE("configuration layering") {
  support::TempDir dir("cli-config");
  write_toy(dir.path());
  const auto config = (dir.path() / "config.json").string();
  auto cfg = load_config_file(config);
  CHECK(cfg.corpus == dir.path() / "corpus.csv");
  CHECK(cfg.b_for(Level::Country) == 0.0);
  CHECK(cfg.train_end_year == 2011);
  CHECK(cfg.state_window == YearWindow{2008, 2011});
  CHECK(cfg.outcome_window == YearWindow{2011, 2014});
  CHECK(cfg.presence_threshold == 0.1);
  CHECK(cfg.backbone_tau == 0.212);
  CHECK(RunConfig{}.b_for(Level::Author) == 3.0);
  CHECK(RunConfig{}.b_for(Level::Organization) == 30.0);
  CHECK(parse_inclusive_window("2008-2010") == YearWindow{2008, 2011});
  CHECK(format_inclusive_window({2008, 2011}) == "2008-2010");
  RunConfig bad;
  CHECK_THROWS_AS(apply_config_json(bad, nlohmann::json{{"nonsense", 1}}, "."), std::invalid_argument);

  SUBCASE("environment variable supplies the default config") {
    ::setenv("RSPACE_CONFIG", config.c_str(), 1);
    auto r = run({"build-space"});
    ::unsetenv("RSPACE_CONFIG");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.path() / "out" / "phi.csv"));
  }
  SUBCASE("flags override the file") {
    auto r = run({"build-space", "--config", config, "--out", (dir.path() / "other").string(),
                  "--threshold", "5"});
    CHECK(r.code == 65);
    auto ok = run({"build-space", "--config", config, "--out", (dir.path() / "other").string()});
    CHECK(ok.code == 0);
    CHECK(fs::exists(dir.path() / "other" / "phi.csv"));
  }
}
