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

#include "rspace/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "rspace/csv.hpp"
#include "rspace/random.hpp"

namespace rspace {

namespace {

std::string padded(char prefix, long value, long count) {
  int width = 1;
  for (long c = count; c >= 10; c /= 10) ++width;
  auto digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

// Journals usable for a paper in field f by a scholar holding `held`.
struct JournalChoice {
  std::string single;
  std::vector<std::pair<std::string, std::size_t>> multi;  // (journal, other field)
};

void emit_papers(Rng& rng, const SynthConfig& cfg, const std::string& author,
                 const std::string& paper_prefix, const std::vector<std::size_t>& fields,
                 const std::vector<JournalChoice>& journals,
                 YearWindow years, std::size_t forced_first, std::size_t& paper_counter,
                 std::vector<PublicationRecord>& out) {
  bool force = forced_first != static_cast<std::size_t>(-1);
  for (int year = years.start; year < years.end; ++year) {
    int count = std::min(rng.poisson(cfg.papers_per_scholar_year), 49);
    if (force && count == 0) count = 1;
    for (int k = 0; k < count; ++k) {
      std::size_t f = fields[rng.below(fields.size())];
      if (force) {
        f = forced_first;
        force = false;
      }
      std::string journal = journals[f].single;
      std::vector<std::string> eligible;
      for (const auto& [j, other] : journals[f].multi)
        if (std::binary_search(fields.begin(), fields.end(), other)) eligible.push_back(j);
      if (!eligible.empty() && rng.bernoulli(cfg.multi_field_share))
        journal = eligible[rng.below(eligible.size())];
      const int n_p = static_cast<int>(rng.between(1, 10));
      out.push_back({author, paper_prefix + padded('P', static_cast<long>(paper_counter++), 99999),
                     year, journal, n_p});
    }
  }
}

std::vector<JournalChoice> journal_choices(const SynthCorpus& c) {
  std::vector<JournalChoice> choices(c.field_ids.size());
  const auto fid = FieldIndex(c.field_ids);
  for (const auto& [journal, fields] : c.classification.journals()) {
    std::vector<std::size_t> pos;
    for (const auto& f : fields) pos.push_back(fid.index_of(f));
    if (pos.size() == 1) {
      choices[pos[0]].single = journal;
    } else {
      for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = 0; j < pos.size(); ++j)
          if (i != j) choices[pos[i]].multi.emplace_back(journal, pos[j]);
    }
  }
  return choices;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_scholars < 1) throw std::invalid_argument("n_scholars must be >= 1");
  if (n_fields < 1) throw std::invalid_argument("n_fields must be >= 1");
  if (n_blocks < 1 || n_blocks > n_fields)
    throw std::invalid_argument("n_blocks must lie in [1, n_fields]");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
    throw std::invalid_argument("need 0 <= p_out < p_in <= 1");
  if (years.empty()) throw std::invalid_argument("years window is empty");
  if (outcome_years.empty()) throw std::invalid_argument("outcome window is empty");
  if (outcome_years.start < years.end)
    throw std::invalid_argument("outcome window must start after the corpus years");
  if (!(papers_per_scholar_year > 0.0 && papers_per_scholar_year < 49.0))
    throw std::invalid_argument("papers_per_scholar_year must lie in (0, 49)");
  if (!(transition_rate >= 0.0 && transition_rate <= 1.0))
    throw std::invalid_argument("transition_rate must lie in [0, 1]");
  if (!(multi_field_journal_fraction >= 0.0) || !(multi_field_share >= 0.0 && multi_field_share <= 1.0))
    throw std::invalid_argument("multi-field journal settings out of range");
  if (scholars_per_org < 1 || orgs_per_country < 1)
    throw std::invalid_argument("affiliation group sizes must be >= 1");
}

std::vector<double> entry_weights(const ProximityMatrix& planted,
                                  const std::vector<std::size_t>& held) {
  std::vector<double> w(planted.size(), 0.0);
  for (std::size_t f = 0; f < planted.size(); ++f) {
    if (std::binary_search(held.begin(), held.end(), f)) continue;
    for (auto g : held) w[f] += planted.at(f, g);
  }
  return w;
}

SynthCorpus generate_corpus(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SynthCorpus c;
  c.config = cfg;
  const auto nf = static_cast<std::size_t>(cfg.n_fields);
  const int block_size = cfg.n_fields / cfg.n_blocks;

  std::map<std::string, FieldMeta> meta;
  std::map<std::string, std::set<std::string>> journals;
  for (std::size_t f = 0; f < nf; ++f) {
    c.field_ids.push_back(padded('F', static_cast<long>(f), cfg.n_fields - 1));
    const int block = std::min(static_cast<int>(f) / block_size, cfg.n_blocks - 1);
    c.block_of_field.push_back(block);
    meta[c.field_ids[f]] = {"Field " + std::to_string(f), "B" + std::to_string(block),
                            "Block " + std::to_string(block)};
    journals[padded('J', static_cast<long>(f), cfg.n_fields - 1)] = {c.field_ids[f]};
  }
  const auto n_multi = static_cast<long>(cfg.multi_field_journal_fraction * cfg.n_fields + 0.5);
  for (long m = 0; m < n_multi; ++m) {
    const std::size_t a = rng.below(nf);
    std::vector<std::size_t> mates;
    for (std::size_t g = 0; g < nf; ++g)
      if (g != a && c.block_of_field[g] == c.block_of_field[a]) mates.push_back(g);
    if (mates.empty()) continue;
    const std::size_t b = mates[rng.below(mates.size())];
    journals["M" + padded('J', m, n_multi)] = {c.field_ids[a], c.field_ids[b]};
  }
  c.classification = FieldClassification(std::move(journals), std::move(meta));

  c.planted = ProximityMatrix(FieldIndex(c.field_ids), MapKind::External);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t g = 0; g < nf; ++g)
      c.planted.at(f, g) =
          f == g ? 1.0 : (c.block_of_field[f] == c.block_of_field[g] ? cfg.p_in : cfg.p_out);

  const long n_orgs = (cfg.n_scholars + cfg.scholars_per_org - 1) / cfg.scholars_per_org;
  const long n_countries = (n_orgs + cfg.orgs_per_country - 1) / cfg.orgs_per_country;
  for (long o = 0; o < n_orgs; ++o)
    c.affiliations.org_to_country[padded('O', o, n_orgs - 1)] =
        padded('C', o % n_countries, n_countries - 1);

  const auto choices = journal_choices(c);
  std::size_t paper_counter = 0;
  for (int s = 0; s < cfg.n_scholars; ++s) {
    const std::string id = padded('A', s, cfg.n_scholars - 1);
    c.scholar_ids.push_back(id);
    c.affiliations.author_to_org[id] = padded('O', s % n_orgs, n_orgs - 1);

    const int home = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.n_blocks)));
    std::vector<std::size_t> held;
    for (std::size_t f = 0; f < nf; ++f)
      if (rng.bernoulli(c.block_of_field[f] == home ? cfg.p_in : cfg.p_out)) held.push_back(f);
    if (held.empty()) {
      std::vector<std::size_t> home_fields;
      for (std::size_t f = 0; f < nf; ++f)
        if (c.block_of_field[f] == home) home_fields.push_back(f);
      held.push_back(home_fields[rng.below(home_fields.size())]);
    }
    emit_papers(rng, cfg, id, id + "-", held, choices, cfg.years, static_cast<std::size_t>(-1),
                paper_counter, c.records);
    c.scholar_fields.push_back(std::move(held));
  }
  return c;
}

std::vector<PublicationRecord> generate_outcomes(const SynthCorpus& corpus,
                                                 const ProximityMatrix& planted,
                                                 double transition_rate, std::uint64_t seed) {
  if (planted.size() != corpus.field_ids.size())
    throw std::invalid_argument("planted proximity does not match the corpus fields");
  Rng rng(seed);
  const auto choices = journal_choices(corpus);
  std::vector<PublicationRecord> out;
  std::size_t paper_counter = 0;
  for (std::size_t s = 0; s < corpus.scholar_ids.size(); ++s) {
    auto held = corpus.scholar_fields[s];
    std::size_t entered = static_cast<std::size_t>(-1);
    if (rng.bernoulli(transition_rate)) {
      const auto w = entry_weights(planted, held);
      if (std::any_of(w.begin(), w.end(), [](double x) { return x > 0.0; })) {
        entered = rng.weighted_index(w);
        held.insert(std::upper_bound(held.begin(), held.end(), entered), entered);
      }
    }
    emit_papers(rng, corpus.config, corpus.scholar_ids[s], corpus.scholar_ids[s] + "-X", held,
                choices, corpus.config.outcome_years, entered, paper_counter, out);
  }
  return out;
}

void write_corpus_csv(std::ostream& out, const std::vector<PublicationRecord>& records) {
  out << "author_id,paper_id,year,journal_id,coauthor_count\n";
  for (const auto& r : records)
    out << csv::escape(r.author_id) << ',' << csv::escape(r.paper_id) << ',' << r.year << ','
        << csv::escape(r.journal_id) << ',' << r.coauthor_count << '\n';
}

}  // namespace rspace
