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

#ifndef RSPACE_PIPELINE_HPP
#define RSPACE_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rspace/common.hpp"
#include "rspace/ingest.hpp"
#include "rspace/predict.hpp"
#include "rspace/synth.hpp"

namespace rspace {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitMissingArtifact = 2,
  kExitUsage = 64,
  kExitDataError = 65,
  kExitInternal = 70,
};

/// An input or upstream artifact that does not exist or cannot be read.
class MissingArtifact : public std::runtime_error {
 public:
  explicit MissingArtifact(const std::filesystem::path& path)
      : std::runtime_error("missing artifact: " + path.string()), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Inputs that were read but cannot produce a result.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declarative run configuration. Year windows are half-open internally; the
/// config file and flags spell them as inclusive "first-last" ranges.
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path journal_fields;
  std::filesystem::path field_meta;
  std::filesystem::path author_org;
  std::filesystem::path org_country;
  std::filesystem::path external_map;
  std::filesystem::path output_dir = ".";

  YearWindow year_range{1971, 2015};
  int train_end_year = 2011;
  YearWindow state_window{2008, 2011};
  YearWindow outcome_window{2011, 2014};
  double presence_threshold = 0.1;
  double backbone_tau = 0.212;
  int max_papers_per_year = 50;

  Level level = Level::Author;
  Transition transition = Transition::InactiveToActive;
  std::string map = "research-space";  // research-space | external | shuffled
  std::optional<double> b;             // 3 for authors, 30 otherwise
  int delta_t = 3;
  std::uint64_t shuffle_seed = 1;
  bool transpose_density = false;

  std::string graph_format = "graphml";
  std::string overlay_entity;
  unsigned threads = 0;

  SynthConfig synth;

  double b_for(Level l) const { return b ? *b : (l == Level::Author ? 3.0 : 30.0); }
  YearWindow train_window() const { return {year_range.start, train_end_year}; }
  /// Throws std::invalid_argument on inconsistent windows or knobs.
  void validate() const;
};

/// "2008-2010" -> [2008, 2011).
YearWindow parse_inclusive_window(const std::string& text);
std::string format_inclusive_window(YearWindow w);

/// Applies the keys present in `doc` on top of `cfg`. Relative paths are
/// resolved against `base_dir`.
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc,
                       const std::filesystem::path& base_dir);
RunConfig load_config_file(const std::filesystem::path& path);

/// Filtered, field-annotated author-level corpus plus ingest counters.
struct LoadedCorpus {
  FieldClassification classification;
  std::vector<FieldedPublication> author_pubs;
  FieldIndex fields;
  nlohmann::ordered_json report;
};

/// Rejected corpus lines are reported on `log`.
LoadedCorpus load_corpus(const RunConfig& cfg, std::ostream& log);

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

void cmd_build_space(const RunConfig& cfg, std::ostream& log);
void cmd_states(const RunConfig& cfg, std::ostream& log);
void cmd_predict(const RunConfig& cfg, std::ostream& log);
void cmd_evaluate(const RunConfig& cfg, std::ostream& log);
void cmd_export_backbone(const RunConfig& cfg, std::ostream& log);
void cmd_synth(const RunConfig& cfg, std::ostream& log);

/// Artifact file names inside the output directory.
std::string states_file(Level level, int which);  // which: 0 = state window, 1 = outcome window
std::string totals_file(Level level);
std::string predictions_file(Level level, const std::string& map, Transition t);

/// Entry point of the `rspace` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rspace

#endif  // RSPACE_PIPELINE_HPP
