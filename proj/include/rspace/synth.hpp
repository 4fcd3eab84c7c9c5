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

#ifndef RSPACE_SYNTH_HPP
#define RSPACE_SYNTH_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rspace/common.hpp"
#include "rspace/ingest.hpp"
#include "rspace/space.hpp"

namespace rspace {

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_scholars = 500;
  int n_fields = 20;
  int n_blocks = 2;
  double p_in = 0.8;
  double p_out = 0.05;
  YearWindow years{2001, 2011};
  YearWindow outcome_years{2011, 2014};
  double papers_per_scholar_year = 12.0;
  double transition_rate = 0.5;
  /// Extra two-field journals, as a fraction of n_fields (within-block pairs).
  double multi_field_journal_fraction = 0.1;
  /// Probability that a paper goes to an eligible two-field journal.
  double multi_field_share = 0.1;
  int scholars_per_org = 10;
  int orgs_per_country = 10;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

struct SynthCorpus {
  SynthConfig config;
  std::vector<PublicationRecord> records;  // years in config.years
  FieldClassification classification;
  AffiliationMap affiliations;
  std::vector<std::string> field_ids;        // position = planted field number
  std::vector<int> block_of_field;
  std::vector<std::string> scholar_ids;
  std::vector<std::vector<std::size_t>> scholar_fields;  // ascending planted field numbers
  /// p_in within a block, p_out across blocks, 1 on the diagonal.
  ProximityMatrix planted;
};

/// Deterministic given cfg.seed. Scholar field sets are drawn blockwise
/// around a uniformly chosen home block.
SynthCorpus generate_corpus(const SynthConfig& cfg);

/// Records for cfg.outcome_years. With probability `transition_rate` a
/// scholar enters one new field drawn with weight sum_{g in set} planted[f][g].
std::vector<PublicationRecord> generate_outcomes(const SynthCorpus& corpus,
                                                 const ProximityMatrix& planted,
                                                 double transition_rate, std::uint64_t seed);

/// Candidate weights for the proximity-proportional entry draw; fields
/// already held get weight 0.
std::vector<double> entry_weights(const ProximityMatrix& planted,
                                  const std::vector<std::size_t>& held);

void write_corpus_csv(std::ostream& out, const std::vector<PublicationRecord>& records);

}  // namespace rspace

#endif  // RSPACE_SYNTH_HPP
