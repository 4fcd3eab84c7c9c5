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

#include "rspace/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rspace/backbone.hpp"
#include "rspace/csv.hpp"
#include "rspace/evaluate.hpp"
#include "rspace/parallel.hpp"
#include "rspace/space.hpp"
#include "rspace/states.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace rspace {

namespace {

constexpr Level kLevels[] = {Level::Author, Level::Organization, Level::Country};
constexpr Transition kTransitions[] = {Transition::InactiveToActive,
                                       Transition::NascentToDeveloped,
                                       Transition::IntermediateToDeveloped};
const char* const kMaps[] = {"research-space", "external", "shuffled"};

void require_file(const fs::path& path) {
  if (path.empty() || !fs::is_regular_file(path)) throw MissingArtifact(path);
  std::ifstream probe(path);
  if (!probe) throw MissingArtifact(path);
}

void require_input(const fs::path& path, const char* option) {
  if (path.empty()) throw MissingArtifact(std::string(option) + " (not set)");
  require_file(path);
}

std::string read_text(const fs::path& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json window_json(YearWindow w) { return ordered_json::array({w.start, w.end - 1}); }

// Field metadata plus node size, one row per field of the universe.
struct FieldTable {
  std::map<std::string, FieldMeta> meta;
  std::map<std::string, double> sizes;
};

FieldTable read_field_table(const fs::path& path) {
  require_file(path);
  FieldTable t;
  for (auto& row :
       csv::read_file(path, {"field_id", "field_name", "area_id", "area_name", "size"})) {
    t.meta[row[0]] = {row[1], row[2], row[3]};
    t.sizes[row[0]] = std::stod(row[4]);
  }
  return t;
}

std::map<std::string, double> read_totals(const fs::path& path) {
  require_file(path);
  std::map<std::string, double> totals;
  for (auto& row : csv::read_file(path, {"entity_id", "total"})) totals[row[0]] = std::stod(row[1]);
  return totals;
}

ProximityMatrix select_map(const RunConfig& cfg, const ProximityMatrix& phi, std::ostream& log) {
  if (cfg.map == "research-space") return phi;
  if (cfg.map == "shuffled") return shuffle_fields(phi, cfg.shuffle_seed);
  if (cfg.map == "external") {
    require_file(cfg.external_map);
    auto loaded = load_external_map(cfg.external_map, phi.fields());
    if (!loaded.unknown_fields.empty())
      log << "warning: external map: " << loaded.skipped_edges << " edges skipped, "
          << loaded.unknown_fields.size() << " unknown field ids\n";
    return std::move(loaded.map);
  }
  throw std::invalid_argument("unknown map: " + cfg.map);
}

std::string stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  return "";
}

// Values reported for the 319,049-author corpus; reference only, never asserted.
ordered_json reference_values() {
  auto cell = [](std::optional<double> rs, std::optional<double> ucsd) {
    ordered_json c;
    c["research-space"] = rs ? ordered_json(*rs) : ordered_json(nullptr);
    c["external"] = ucsd ? ordered_json(*ucsd) : ordered_json(nullptr);
    return c;
  };
  ordered_json ref;
  ref["description"] = "published mean AUCs on the full Google Scholar corpus (external = UCSD map)";
  ref["author"]["inactive_to_active"] = cell(0.896, 0.803);
  ref["author"]["nascent_to_developed"] = cell(std::nullopt, std::nullopt);
  ref["author"]["intermediate_to_developed"] = cell(std::nullopt, std::nullopt);
  ref["organization"]["inactive_to_active"] = cell(0.715, 0.687);
  ref["organization"]["nascent_to_developed"] = cell(0.693, 0.670);
  ref["organization"]["intermediate_to_developed"] = cell(0.639, 0.616);
  ref["country"]["inactive_to_active"] = cell(0.682, 0.682);
  ref["country"]["nascent_to_developed"] = cell(0.639, 0.624);
  ref["country"]["intermediate_to_developed"] = cell(0.645, 0.621);
  return ref;
}

}  // namespace

void RunConfig::validate() const {
  if (year_range.empty()) throw std::invalid_argument("year_range is empty");
  if (train_window().empty()) throw std::invalid_argument("train_end_year precedes year_range");
  if (state_window.empty()) throw std::invalid_argument("state_window is empty");
  if (outcome_window.empty()) throw std::invalid_argument("outcome_window is empty");
  if (state_window.end > outcome_window.start)
    throw std::invalid_argument("state_window must end before outcome_window begins");
  if (!(presence_threshold >= 0.0)) throw std::invalid_argument("presence_threshold must be >= 0");
  if (!(backbone_tau >= 0.0 && backbone_tau <= 1.0))
    throw std::invalid_argument("backbone_tau must lie in [0, 1]");
  if (max_papers_per_year < 1) throw std::invalid_argument("max_papers_per_year must be >= 1");
  if (b && !(*b >= 0.0)) throw std::invalid_argument("b must be >= 0");
  if (delta_t < 1) throw std::invalid_argument("delta_t must be >= 1");
  if (map != "research-space" && map != "external" && map != "shuffled")
    throw std::invalid_argument("map must be research-space, external or shuffled");
  parse_graph_format(graph_format);
}

YearWindow parse_inclusive_window(const std::string& text) {
  int first = 0, last = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d-%d%c", &first, &last, &tail) != 2 &&
      std::sscanf(text.c_str(), "%d:%d%c", &first, &last, &tail) != 2)
    throw std::invalid_argument("year window must look like 2008-2010, got '" + text + "'");
  if (last < first) throw std::invalid_argument("year window ends before it starts: " + text);
  return {first, last + 1};
}

std::string format_inclusive_window(YearWindow w) {
  return std::to_string(w.start) + "-" + std::to_string(w.end - 1);
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto path_of = [&](const char* key, fs::path& dst) {
    if (!doc.contains(key)) return;
    fs::path p = doc.at(key).get<std::string>();
    dst = (p.is_relative() && !p.empty()) ? base_dir / p : p;
  };
  auto window_of = [&](const char* key, YearWindow& dst) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if (v.is_string()) {
      dst = parse_inclusive_window(v.get<std::string>());
    } else if (v.is_array() && v.size() == 2) {
      dst = {v[0].get<int>(), v[1].get<int>() + 1};
    } else {
      throw std::invalid_argument(std::string("bad year window for '") + key + "'");
    }
  };
  static const std::set<std::string> known = {
      "corpus", "journal_fields", "field_meta", "author_org", "org_country", "external_map",
      "output_dir", "year_range", "train_end_year", "state_window", "outcome_window",
      "presence_threshold", "backbone_tau", "max_papers_per_year", "level", "transition", "map",
      "b", "delta_t", "shuffle_seed", "transpose_density", "graph_format", "overlay_entity",
      "threads", "synth"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");

  path_of("corpus", cfg.corpus);
  path_of("journal_fields", cfg.journal_fields);
  path_of("field_meta", cfg.field_meta);
  path_of("author_org", cfg.author_org);
  path_of("org_country", cfg.org_country);
  path_of("external_map", cfg.external_map);
  path_of("output_dir", cfg.output_dir);
  window_of("year_range", cfg.year_range);
  window_of("state_window", cfg.state_window);
  window_of("outcome_window", cfg.outcome_window);
  if (doc.contains("train_end_year")) cfg.train_end_year = doc.at("train_end_year").get<int>();
  if (doc.contains("presence_threshold"))
    cfg.presence_threshold = doc.at("presence_threshold").get<double>();
  if (doc.contains("backbone_tau")) cfg.backbone_tau = doc.at("backbone_tau").get<double>();
  if (doc.contains("max_papers_per_year"))
    cfg.max_papers_per_year = doc.at("max_papers_per_year").get<int>();
  if (doc.contains("level")) cfg.level = parse_level(doc.at("level").get<std::string>());
  if (doc.contains("transition"))
    cfg.transition = parse_transition(doc.at("transition").get<std::string>());
  if (doc.contains("map")) cfg.map = doc.at("map").get<std::string>();
  if (doc.contains("b")) {
    if (doc.at("b").is_null())
      cfg.b.reset();
    else
      cfg.b = doc.at("b").get<double>();
  }
  if (doc.contains("delta_t")) cfg.delta_t = doc.at("delta_t").get<int>();
  if (doc.contains("shuffle_seed")) cfg.shuffle_seed = doc.at("shuffle_seed").get<std::uint64_t>();
  if (doc.contains("transpose_density"))
    cfg.transpose_density = doc.at("transpose_density").get<bool>();
  if (doc.contains("graph_format")) cfg.graph_format = doc.at("graph_format").get<std::string>();
  if (doc.contains("overlay_entity"))
    cfg.overlay_entity = doc.at("overlay_entity").get<std::string>();
  if (doc.contains("threads")) cfg.threads = doc.at("threads").get<unsigned>();
  if (doc.contains("synth")) {
    const auto& s = doc.at("synth");
    auto& sc = cfg.synth;
    if (s.contains("seed")) sc.seed = s.at("seed").get<std::uint64_t>();
    if (s.contains("n_scholars")) sc.n_scholars = s.at("n_scholars").get<int>();
    if (s.contains("n_fields")) sc.n_fields = s.at("n_fields").get<int>();
    if (s.contains("n_blocks")) sc.n_blocks = s.at("n_blocks").get<int>();
    if (s.contains("p_in")) sc.p_in = s.at("p_in").get<double>();
    if (s.contains("p_out")) sc.p_out = s.at("p_out").get<double>();
    if (s.contains("papers_per_scholar_year"))
      sc.papers_per_scholar_year = s.at("papers_per_scholar_year").get<double>();
    if (s.contains("transition_rate")) sc.transition_rate = s.at("transition_rate").get<double>();
    if (s.contains("multi_field_journal_fraction"))
      sc.multi_field_journal_fraction = s.at("multi_field_journal_fraction").get<double>();
    if (s.contains("multi_field_share"))
      sc.multi_field_share = s.at("multi_field_share").get<double>();
    if (s.contains("years")) {
      const auto& y = s.at("years");
      sc.years = y.is_string() ? parse_inclusive_window(y.get<std::string>())
                               : YearWindow{y.at(0).get<int>(), y.at(1).get<int>() + 1};
    }
    if (s.contains("outcome_years")) {
      const auto& y = s.at("outcome_years");
      sc.outcome_years = y.is_string() ? parse_inclusive_window(y.get<std::string>())
                                       : YearWindow{y.at(0).get<int>(), y.at(1).get<int>() + 1};
    }
  }
}

RunConfig load_config_file(const fs::path& path) {
  const auto text = read_text(path);
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw std::invalid_argument("config " + path.string() + " is not JSON");
  RunConfig cfg;
  apply_config_json(cfg, doc, path.parent_path());
  return cfg;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string states_file(Level level, int which) {
  return "states_" + std::string(to_string(level)) + (which == 0 ? "_t0.csv" : "_t1.csv");
}

std::string totals_file(Level level) { return "totals_" + std::string(to_string(level)) + ".csv"; }

std::string predictions_file(Level level, const std::string& map, Transition t) {
  return "predictions_" + std::string(to_string(level)) + "_" + map + "_" +
         std::string(to_string(t)) + ".csv";
}

LoadedCorpus load_corpus(const RunConfig& cfg, std::ostream& log) {
  require_input(cfg.corpus, "--corpus");
  require_input(cfg.journal_fields, "--journal-fields");
  require_input(cfg.field_meta, "--field-meta");
  LoadedCorpus lc;
  ParseResult parsed;
  try {
    lc.classification = load_classification(cfg.journal_fields, cfg.field_meta);
    parsed = parse_corpus_file(cfg.corpus);
  } catch (const MissingArtifact&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
  constexpr std::size_t kMaxLogged = 20;
  for (std::size_t i = 0; i < parsed.rejected.size() && i < kMaxLogged; ++i)
    log << "warning: " << cfg.corpus.string() << ":" << parsed.rejected[i].line
        << ": skipped: " << parsed.rejected[i].reason << '\n';
  if (parsed.rejected.size() > kMaxLogged)
    log << "warning: " << parsed.rejected.size() - kMaxLogged << " more malformed lines\n";

  auto ranged = filter_years(std::move(parsed.records), cfg.year_range);
  std::set<std::string> authors_before;
  for (const auto& r : ranged.records) authors_before.insert(r.author_id);
  auto kept = filter_prolific(ranged.records, cfg.max_papers_per_year);
  std::set<std::string> authors_after;
  for (const auto& r : kept) authors_after.insert(r.author_id);
  auto mapped = map_to_fields(kept, lc.classification);

  lc.author_pubs = std::move(mapped.pubs);
  lc.fields = field_universe(lc.author_pubs);
  lc.report["records_parsed"] = ranged.records.size() + ranged.dropped;
  lc.report["lines_rejected"] = parsed.rejected.size();
  lc.report["records_out_of_year_range"] = ranged.dropped;
  lc.report["prolific_authors_removed"] = authors_before.size() - authors_after.size();
  lc.report["records_after_filters"] = kept.size();
  lc.report["records_unmapped_journal"] = mapped.unmapped_records;
  lc.report["fielded_shares"] = lc.author_pubs.size();
  lc.report["fields_in_universe"] = lc.fields.size();
  return lc;
}

void cmd_build_space(const RunConfig& cfg, std::ostream& log) {
  auto lc = load_corpus(cfg, log);
  if (lc.author_pubs.empty()) throw DataError("no scholars after filtering");
  const auto x = presence_matrix(lc.author_pubs, lc.fields, cfg.train_window(), Level::Author);
  if (x.values.empty()) throw DataError("no scholars after filtering");
  const auto p = discretize(x, cfg.presence_threshold);
  if (std::all_of(p.members.begin(), p.members.end(), [](const auto& r) { return r.empty(); }))
    throw DataError("no scholar has presence above the threshold");
  const auto m = cooccurrence(p);
  const auto phi = proximity(m, p);

  std::ostringstream phi_csv;
  write_phi_csv(phi_csv, phi);
  write_atomic(cfg.output_dir / "phi.csv", phi_csv.str());

  const auto sizes = x.values.column_sums();
  std::ostringstream fields_csv;
  fields_csv << "field_id,field_name,area_id,area_name,size\n";
  for (std::size_t f = 0; f < lc.fields.size(); ++f) {
    const auto* meta = lc.classification.meta(lc.fields.id(f));
    fields_csv << csv::join({lc.fields.id(f), meta->name, meta->area_id, meta->area_name,
                             format_number(sizes[f], 17)})
               << '\n';
  }
  write_atomic(cfg.output_dir / "fields.csv", fields_csv.str());

  std::size_t with_presence = 0;
  for (const auto& row : p.members) with_presence += !row.empty();
  std::size_t linked = 0;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m.at(i, j) > 0) ++linked;

  ordered_json report;
  report["ingest"] = lc.report;
  report["train_window"] = window_json(cfg.train_window());
  report["presence_threshold"] = cfg.presence_threshold;
  report["n_scholars"] = x.values.n_entities();
  report["n_scholars_with_presence"] = with_presence;
  report["n_fields"] = n;
  report["m_density"] = n > 1 ? static_cast<double>(linked) / static_cast<double>(n * (n - 1)) : 0.0;

  if (!cfg.external_map.empty()) {
    require_file(cfg.external_map);
    auto ext = load_external_map(cfg.external_map, phi.fields());
    ordered_json corr;
    corr["unknown_fields"] = ext.unknown_fields;
    corr["skipped_edges"] = ext.skipped_edges;
    try {
      const auto c = correlate_maps(symmetrize_max(phi), ext.map);
      std::ostringstream scatter;
      write_scatter_csv(scatter, c);
      write_atomic(cfg.output_dir / "scatter.csv", scatter.str());
      corr["pairs"] = c.pairs.size();
      corr["slope"] = c.slope;
      corr["intercept"] = c.intercept;
      corr["r_squared"] = c.r_squared;
    } catch (const std::invalid_argument& e) {
      corr["error"] = e.what();
    }
    report["map_correlation"] = corr;
  }
  write_atomic(cfg.output_dir / "build_report.json", report.dump(2) + "\n");
  log << "build-space: " << x.values.n_entities() << " scholars, " << n << " fields\n";
}

void cmd_states(const RunConfig& cfg, std::ostream& log) {
  auto lc = load_corpus(cfg, log);
  if (lc.author_pubs.empty()) throw DataError("no scholars after filtering");
  AffiliationMap affiliations;
  if (cfg.level != Level::Author) {
    require_file(cfg.author_org);
    require_file(cfg.org_country);
    affiliations = load_affiliations(cfg.author_org, cfg.org_country);
  }
  const auto agg = aggregate_entities(lc.author_pubs, affiliations, cfg.level);
  const auto x0 = presence_matrix(agg.pubs, lc.fields, cfg.state_window, cfg.level);
  const auto x1 = presence_matrix(agg.pubs, lc.fields, cfg.outcome_window, cfg.level);
  if (x0.values.empty()) throw DataError("no entities with output in the state window");
  const auto s0 = classify_states(rca(x0));
  const auto s1 = x1.values.empty() ? StateMatrix(cfg.level, cfg.outcome_window, lc.fields, {}, {})
                                    : classify_states(rca(x1));
  const YearWindow incl{cfg.state_window.start, cfg.state_window.start + cfg.delta_t};
  const auto totals = entity_totals(presence_matrix(agg.pubs, lc.fields, incl, cfg.level));

  std::ostringstream a, b, t;
  write_states_csv(a, s0);
  write_states_csv(b, s1);
  t << "entity_id,total\n";
  for (const auto& [entity, total] : totals)
    t << csv::escape(entity) << ',' << format_number(total, 17) << '\n';
  write_atomic(cfg.output_dir / states_file(cfg.level, 0), a.str());
  write_atomic(cfg.output_dir / states_file(cfg.level, 1), b.str());
  write_atomic(cfg.output_dir / totals_file(cfg.level), t.str());

  ordered_json report;
  report["level"] = std::string(to_string(cfg.level));
  report["state_window"] = window_json(cfg.state_window);
  report["outcome_window"] = window_json(cfg.outcome_window);
  report["inclusion_window"] = window_json(incl);
  report["entities_t0"] = s0.n_entities();
  report["entities_t1"] = s1.n_entities();
  report["authors_without_affiliation"] = agg.excluded_authors;
  report["ingest"] = lc.report;
  write_atomic(cfg.output_dir / ("states_" + std::string(to_string(cfg.level)) + "_report.json"),
               report.dump(2) + "\n");
  log << "states: " << s0.n_entities() << " entities at t0, " << s1.n_entities() << " at t1\n";
}

void cmd_predict(const RunConfig& cfg, std::ostream& log) {
  const auto phi_path = cfg.output_dir / "phi.csv";
  const auto states_path = cfg.output_dir / states_file(cfg.level, 0);
  require_file(phi_path);
  require_file(states_path);
  const auto phi = read_phi_csv(phi_path);
  const auto map = select_map(cfg, phi, log);
  const auto states0 = read_states_csv(states_path, phi.fields(), cfg.level, cfg.state_window);
  const auto spec = TransitionSpec::of(cfg.transition);
  const auto omega = density(u_matrix(states0, spec), map, {cfg.transpose_density});
  const auto ranked = rank_candidates(omega, states0, spec, cfg.map);
  std::ostringstream out;
  write_predictions_csv(out, ranked);
  write_atomic(cfg.output_dir / predictions_file(cfg.level, cfg.map, cfg.transition), out.str());
  log << "predict: " << ranked.entities.size() << " entities ranked\n";
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  const auto phi_path = cfg.output_dir / "phi.csv";
  require_file(phi_path);
  const auto fields = read_phi_csv(phi_path).fields();

  struct Result {
    Level level;
    Transition transition;
    std::string map;
    std::optional<TransitionEvaluation> eval;
    std::string error;
  };
  std::vector<Result> results;
  for (Level level : kLevels) {
    const auto s0_path = cfg.output_dir / states_file(level, 0);
    const auto s1_path = cfg.output_dir / states_file(level, 1);
    const auto totals_path = cfg.output_dir / totals_file(level);
    bool any_predictions = false;
    for (Transition t : kTransitions)
      for (const char* m : kMaps)
        any_predictions |= fs::exists(cfg.output_dir / predictions_file(level, m, t));
    if (!any_predictions) continue;
    require_file(s0_path);
    require_file(s1_path);
    require_file(totals_path);
    const auto s0 = read_states_csv(s0_path, fields, level, cfg.state_window);
    const auto s1 = read_states_csv(s1_path, fields, level, cfg.outcome_window);
    const auto included = inclusion_filter(read_totals(totals_path), cfg.b_for(level), cfg.delta_t);
    for (Transition t : kTransitions) {
      const auto labels = observe_transitions(s0, s1, TransitionSpec::of(t));
      for (const char* m : kMaps) {
        const auto path = cfg.output_dir / predictions_file(level, m, t);
        if (!fs::exists(path)) continue;
        Result r{level, t, m, std::nullopt, {}};
        try {
          r.eval = evaluate_rankings(read_predictions_csv(path, fields), labels, included, level);
        } catch (const std::runtime_error& e) {
          r.error = e.what();
        }
        results.push_back(std::move(r));
      }
    }
  }
  if (results.empty())
    throw MissingArtifact(cfg.output_dir / predictions_file(cfg.level, cfg.map, cfg.transition));
  if (std::none_of(results.begin(), results.end(), [](const Result& r) { return r.eval; }))
    throw DataError("empty evaluation set");

  ordered_json report;
  report["b"] = cfg.b ? ordered_json(*cfg.b) : ordered_json("3 for author, 30 otherwise");
  report["delta_t"] = cfg.delta_t;
  report["state_window"] = window_json(cfg.state_window);
  report["outcome_window"] = window_json(cfg.outcome_window);
  report["results"] = ordered_json::array();

  // (level, transition) -> map -> comparison against the research space
  std::map<std::pair<Level, Transition>, std::map<std::string, GroupComparison>> comparisons;
  auto find = [&](Level l, Transition t, const std::string& m) -> const Result* {
    for (const auto& r : results)
      if (r.level == l && r.transition == t && r.map == m) return &r;
    return nullptr;
  };
  for (const auto& r : results) {
    ordered_json entry;
    entry["level"] = std::string(to_string(r.level));
    entry["transition"] = std::string(to_string(r.transition));
    entry["map"] = r.map;
    if (!r.eval) {
      entry["error"] = r.error;
      report["results"].push_back(entry);
      continue;
    }
    const auto& s = r.eval->summary;
    entry["n"] = s.n;
    entry["mean"] = s.mean;
    entry["median"] = s.median;
    entry["q1"] = s.q1;
    entry["q3"] = s.q3;
    entry["w_lo"] = s.w_lo;
    entry["w_hi"] = s.w_hi;
    entry["excluded_undefined"] = r.eval->excluded_undefined;
    entry["excluded_inclusion"] = r.eval->excluded_inclusion;
    // Research-space rows compare against the first other map present;
    // every other map compares against the research space.
    const Result* other = nullptr;
    if (r.map == "research-space") {
      for (const char* m : kMaps)
        if (std::string(m) != r.map)
          if (auto* o = find(r.level, r.transition, m); o && o->eval) {
            other = o;
            break;
          }
    } else if (auto* o = find(r.level, r.transition, "research-space"); o && o->eval) {
      other = o;
    }
    if (other) {
      const auto a = r.eval->defined_aucs();
      const auto b = other->eval->defined_aucs();
      if (a.size() + b.size() >= 3) {
        const auto cmp = compare_groups(a, b);
        entry["compared_with"] = other->map;
        entry["F"] = std::isfinite(cmp.f) ? ordered_json(cmp.f) : ordered_json("inf");
        entry["p_value"] = cmp.p_value;
        comparisons[{r.level, r.transition}][r.map] = cmp;
      }
    }
    if (!entry.contains("F")) {
      entry["compared_with"] = nullptr;
      entry["F"] = nullptr;
      entry["p_value"] = nullptr;
    }
    report["results"].push_back(entry);

    std::ostringstream aucs;
    aucs << "entity_id,auc,positives,negatives\n";
    for (const auto& e : r.eval->entities)
      aucs << csv::escape(e.entity) << ',' << (e.auc ? format_number(*e.auc, 17) : "") << ','
           << e.positives << ',' << e.negatives << '\n';
    write_atomic(cfg.output_dir / ("aucs_" + std::string(to_string(r.level)) + "_" + r.map + "_" +
                                   std::string(to_string(r.transition)) + ".csv"),
                 aucs.str());
  }
  report["reference_values"] = reference_values();
  write_atomic(cfg.output_dir / "evaluation.json", report.dump(2) + "\n");

  // Table layout: rows are levels, columns are transitions x maps present.
  std::vector<std::string> maps_present;
  for (const char* m : kMaps)
    if (std::any_of(results.begin(), results.end(), [&](const Result& r) { return r.map == m; }))
      maps_present.push_back(m);
  std::ostringstream table;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-14s", "Aggregation");
  table << buf;
  for (Transition t : kTransitions)
    for (const auto& m : maps_present) {
      std::snprintf(buf, sizeof buf, " | %-44s",
                    (std::string(to_string(t)) + " / " + m).c_str());
      table << buf;
    }
  table << '\n';
  for (Level l : kLevels) {
    if (std::none_of(results.begin(), results.end(), [&](const Result& r) { return r.level == l; }))
      continue;
    std::snprintf(buf, sizeof buf, "%-14s", std::string(to_string(l)).c_str());
    table << buf;
    for (Transition t : kTransitions)
      for (const auto& m : maps_present) {
        std::string cell = "N/A";
        if (auto* r = find(l, t, m); r && r->eval) {
          char num[32];
          std::snprintf(num, sizeof num, "AUC=%.3f", r->eval->summary.mean);
          cell = num;
          auto it = comparisons.find({l, t});
          if (it != comparisons.end())
            if (auto c = it->second.find(m); c != it->second.end()) {
              const auto& cmp = c->second;
              if (m == "research-space" && cmp.mean_a > cmp.mean_b) cell += stars(cmp.p_value);
              std::snprintf(num, sizeof num, " (p=%.3g)", cmp.p_value);
              cell += num;
            }
        }
        std::snprintf(buf, sizeof buf, " | %-44s", cell.c_str());
        table << buf;
      }
    table << '\n';
  }
  table << "*** p<0.01  ** p<0.05 (one-way ANOVA against the compared map)\n";
  write_atomic(cfg.output_dir / "table.txt", table.str());
  log << table.str();
}

void cmd_export_backbone(const RunConfig& cfg, std::ostream& log) {
  const auto phi_path = cfg.output_dir / "phi.csv";
  const auto fields_path = cfg.output_dir / "fields.csv";
  require_file(phi_path);
  const auto table = read_field_table(fields_path);
  const auto phi = read_phi_csv(phi_path);
  const FieldClassification meta({}, table.meta);
  auto graph = build_backbone(phi, cfg.backbone_tau, table.sizes, &meta);
  if (!cfg.overlay_entity.empty()) {
    const auto states_path = cfg.output_dir / states_file(cfg.level, 0);
    require_file(states_path);
    graph = overlay_states(std::move(graph),
                           read_states_csv(states_path, phi.fields(), cfg.level, cfg.state_window),
                           cfg.overlay_entity);
  }
  const auto format = parse_graph_format(cfg.graph_format);
  const std::string ext = format == GraphFormat::GraphML ? "graphml"
                          : format == GraphFormat::Dot   ? "dot"
                                                         : "json";
  write_atomic(cfg.output_dir / ("backbone." + ext), export_graph(graph, format));
  log << "export-backbone: " << graph.nodes.size() << " nodes, " << graph.edges.size()
      << " edges\n";
}

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
  const auto corpus = generate_corpus(cfg.synth);
  // Outcomes use a seed derived from the corpus seed so both streams are independent.
  const auto outcomes = generate_outcomes(corpus, corpus.planted, cfg.synth.transition_rate,
                                          cfg.synth.seed ^ 0x9E3779B97F4A7C15ULL);
  const auto& dir = cfg.output_dir;

  std::ostringstream records;
  auto all = corpus.records;
  all.insert(all.end(), outcomes.begin(), outcomes.end());
  write_corpus_csv(records, all);
  write_atomic(dir / "corpus.csv", records.str());

  std::ostringstream jf, fm, ao, oc, blocks, planted;
  jf << "journal_id,field_id\n";
  for (const auto& [journal, fields] : corpus.classification.journals())
    for (const auto& f : fields) jf << csv::join({journal, f}) << '\n';
  fm << "field_id,field_name,area_id,area_name\n";
  for (const auto& [id, m] : corpus.classification.fields())
    fm << csv::join({id, m.name, m.area_id, m.area_name}) << '\n';
  ao << "author_id,org_id\n";
  for (const auto& [a, o] : corpus.affiliations.author_to_org) ao << csv::join({a, o}) << '\n';
  oc << "org_id,country_id\n";
  for (const auto& [o, c] : corpus.affiliations.org_to_country) oc << csv::join({o, c}) << '\n';
  blocks << "field_id,block\n";
  for (std::size_t f = 0; f < corpus.field_ids.size(); ++f)
    blocks << corpus.field_ids[f] << ',' << corpus.block_of_field[f] << '\n';
  planted << "field_i,field_j,weight\n";
  for (std::size_t f = 0; f < corpus.planted.size(); ++f)
    for (std::size_t g = f + 1; g < corpus.planted.size(); ++g)
      if (corpus.planted.at(f, g) > 0.0)
        planted << corpus.field_ids[f] << ',' << corpus.field_ids[g] << ','
                << format_number(corpus.planted.at(f, g), 12) << '\n';
  write_atomic(dir / "journal_fields.csv", jf.str());
  write_atomic(dir / "field_meta.csv", fm.str());
  write_atomic(dir / "author_org.csv", ao.str());
  write_atomic(dir / "org_country.csv", oc.str());
  write_atomic(dir / "planted_blocks.csv", blocks.str());
  write_atomic(dir / "planted_map.csv", planted.str());

  const auto& s = cfg.synth;
  ordered_json run;
  run["corpus"] = "corpus.csv";
  run["journal_fields"] = "journal_fields.csv";
  run["field_meta"] = "field_meta.csv";
  run["author_org"] = "author_org.csv";
  run["org_country"] = "org_country.csv";
  run["external_map"] = "planted_map.csv";
  run["output_dir"] = ".";
  run["year_range"] = window_json({s.years.start, s.outcome_years.end});
  run["train_end_year"] = s.years.end;
  run["state_window"] = window_json({std::max(s.years.start, s.years.end - 3), s.years.end});
  run["outcome_window"] = window_json(s.outcome_years);
  ordered_json synth;
  synth["seed"] = s.seed;
  synth["n_scholars"] = s.n_scholars;
  synth["n_fields"] = s.n_fields;
  synth["n_blocks"] = s.n_blocks;
  synth["p_in"] = s.p_in;
  synth["p_out"] = s.p_out;
  synth["years"] = window_json(s.years);
  synth["outcome_years"] = window_json(s.outcome_years);
  synth["papers_per_scholar_year"] = s.papers_per_scholar_year;
  synth["transition_rate"] = s.transition_rate;
  synth["multi_field_journal_fraction"] = s.multi_field_journal_fraction;
  synth["multi_field_share"] = s.multi_field_share;
  run["synth"] = synth;
  write_atomic(dir / "config.json", run.dump(2) + "\n");
  log << "synth: " << all.size() << " records for " << corpus.scholar_ids.size() << " scholars\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Research space toolkit: career-path proximity between research fields"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, corpus, journal_fields, field_meta, author_org,
      org_country, external_map, out_dir, year_range, state_window, outcome_window, level,
      transition, map, format, overlay;
  std::optional<int> train_end, max_per_year, delta_t;
  std::optional<double> threshold, tau, b;
  std::optional<std::uint64_t> shuffle_seed;
  std::optional<unsigned> threads;
  bool transpose = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> scholars, n_fields, blocks;
  std::optional<double> p_in, p_out, papers_per_year, transition_rate;

  app.add_option("--config", config_path, "JSON run configuration (default: $RSPACE_CONFIG)");
  app.add_option("--corpus", corpus, "publication records (.csv or .jsonl)");
  app.add_option("--journal-fields", journal_fields, "journal_id,field_id CSV");
  app.add_option("--field-meta", field_meta, "field_id,field_name,area_id,area_name CSV");
  app.add_option("--author-org", author_org, "author_id,org_id CSV");
  app.add_option("--org-country", org_country, "org_id,country_id CSV");
  app.add_option("--external-map", external_map, "field_i,field_j,weight CSV");
  app.add_option("--out", out_dir, "artifact directory");
  app.add_option("--year-range", year_range, "plausible record years, e.g. 1971-2014");
  app.add_option("--train-end-year", train_end, "phi uses years strictly before this (2011)");
  app.add_option("--state-window", state_window, "initial state years (2008-2010)");
  app.add_option("--outcome-window", outcome_window, "outcome years (2011-2013)");
  app.add_option("--threshold", threshold, "presence threshold for P (0.1)");
  app.add_option("--tau", tau, "backbone link threshold (0.212)");
  app.add_option("--max-per-year", max_per_year, "prolific author bound (50)");
  app.add_option("--level", level, "author | organization | country");
  app.add_option("--transition", transition,
                 "inactive_to_active | nascent_to_developed | intermediate_to_developed");
  app.add_option("--map", map, "research-space | external | shuffled");
  app.add_option("--b", b, "inclusion productivity B (3 authors, 30 otherwise)");
  app.add_option("--delta-t", delta_t, "inclusion window length in years (3)");
  app.add_option("--shuffle-seed", shuffle_seed, "seed of the shuffled-phi baseline");
  app.add_flag("--transpose-density", transpose, "weight neighbours by phi[f'][f]");
  app.add_option("--format", format, "graphml | dot | json");
  app.add_option("--overlay-entity", overlay, "annotate the backbone with this entity's states");
  app.add_option("--threads", threads, "worker threads, 0 = all cores");
  app.add_option("--seed", seed, "synth: RNG seed");
  app.add_option("--scholars", scholars, "synth: number of scholars");
  app.add_option("--fields", n_fields, "synth: number of fields");
  app.add_option("--blocks", blocks, "synth: number of planted blocks");
  app.add_option("--p-in", p_in, "synth: within-block membership probability");
  app.add_option("--p-out", p_out, "synth: between-block membership probability");
  app.add_option("--papers-per-year", papers_per_year, "synth: mean papers per scholar-year");
  app.add_option("--transition-rate", transition_rate, "synth: probability of entering a field");

  using Command = void (*)(const RunConfig&, std::ostream&);
  std::vector<std::pair<CLI::App*, Command>> commands = {
      {app.add_subcommand("build-space", "build phi from author careers"), cmd_build_space},
      {app.add_subcommand("states", "RCA and activity states for both windows"), cmd_states},
      {app.add_subcommand("predict", "density scores and ranked candidates"), cmd_predict},
      {app.add_subcommand("evaluate", "per-entity ROC/AUC and map comparison"), cmd_evaluate},
      {app.add_subcommand("export-backbone", "spanning tree plus strong links"),
       cmd_export_backbone},
      {app.add_subcommand("synth", "seeded synthetic corpus"), cmd_synth},
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  RunConfig cfg;
  try {
    if (!config_path) {
      if (const char* env = std::getenv("RSPACE_CONFIG"); env && *env) config_path = env;
    }
    if (config_path) cfg = load_config_file(*config_path);
    if (corpus) cfg.corpus = *corpus;
    if (journal_fields) cfg.journal_fields = *journal_fields;
    if (field_meta) cfg.field_meta = *field_meta;
    if (author_org) cfg.author_org = *author_org;
    if (org_country) cfg.org_country = *org_country;
    if (external_map) cfg.external_map = *external_map;
    if (out_dir) cfg.output_dir = *out_dir;
    if (year_range) cfg.year_range = parse_inclusive_window(*year_range);
    if (state_window) cfg.state_window = parse_inclusive_window(*state_window);
    if (outcome_window) cfg.outcome_window = parse_inclusive_window(*outcome_window);
    if (train_end) cfg.train_end_year = *train_end;
    if (threshold) cfg.presence_threshold = *threshold;
    if (tau) cfg.backbone_tau = *tau;
    if (max_per_year) cfg.max_papers_per_year = *max_per_year;
    if (level) cfg.level = parse_level(*level);
    if (transition) cfg.transition = parse_transition(*transition);
    if (map) cfg.map = *map;
    if (b) cfg.b = *b;
    if (delta_t) cfg.delta_t = *delta_t;
    if (shuffle_seed) cfg.shuffle_seed = *shuffle_seed;
    if (transpose) cfg.transpose_density = true;
    if (format) cfg.graph_format = *format;
    if (overlay) cfg.overlay_entity = *overlay;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.synth.seed = *seed;
    if (scholars) cfg.synth.n_scholars = *scholars;
    if (n_fields) cfg.synth.n_fields = *n_fields;
    if (blocks) cfg.synth.n_blocks = *blocks;
    if (p_in) cfg.synth.p_in = *p_in;
    if (p_out) cfg.synth.p_out = *p_out;
    if (papers_per_year) cfg.synth.papers_per_scholar_year = *papers_per_year;
    if (transition_rate) cfg.synth.transition_rate = *transition_rate;
    cfg.validate();
  } catch (const MissingArtifact& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissingArtifact;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  set_thread_count(cfg.threads);
  for (const auto& [sub, command] : commands) {
    if (!sub->parsed()) continue;
    try {
      command(cfg, err);
      return kExitOk;
    } catch (const MissingArtifact& e) {
      err << "error: " << e.what() << '\n';
      return kExitMissingArtifact;
    } catch (const DataError& e) {
      err << "error: " << e.what() << '\n';
      return kExitDataError;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kExitDataError;
    } catch (const std::exception& e) {
      err << "internal error: " << e.what() << '\n';
      return kExitInternal;
    }
  }
  return kExitUsage;
}

}  // namespace rspace
