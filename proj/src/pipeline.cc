// Copyright 2026 The Auto-GDA Authors.
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

#include "autogda/pipeline.h"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cstdio>
#include <map>
#include <mutex>
#include <thread>

#include "autogda/augmenters.h"
#include "autogda/certainty.h"
#include "autogda/errors.h"
#include "autogda/hashing.h"
#include "autogda/prompts.h"
#include "autogda/rng.h"

namespace autogda {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<Origin, 4> kOrigins = {
    Origin::kFewshot, Origin::kPartialRephrase, Origin::kParaphrase,
    Origin::kDropSentence};

// Config fields that change results; paths and worker counts do not.
std::string config_digest(const RunConfig& config) {
  json j = run_config_to_json(config);
  j.erase("cache_dir");
  j.erase("checkpoint_dir");
  j.erase("workers");
  j["endpoints"].erase("timeout_seconds");
  j["endpoints"].erase("max_in_flight");
  j["endpoints"].erase("retries");
  return sha256_hex(j.dump()).substr(0, 16);
}

}  // namespace

json breakdown_to_json(const ObjectiveBreakdown& b) {
  ojson j;
  j["sample_id"] = b.sample_id;
  j["distance_sq"] = b.distance_sq;
  j["ldiv_term"] = b.ldiv_term;
  j["utility"] = b.utility;
  j["contribution"] = b.contribution;
  return json::parse(j.dump());
}

namespace {

ObjectiveBreakdown breakdown_from_json(const json& j) {
  ObjectiveBreakdown b;
  b.sample_id = j.at("sample_id").get<std::string>();
  b.distance_sq = j.at("distance_sq").get<double>();
  b.ldiv_term = j.at("ldiv_term").get<double>();
  b.utility = j.at("utility").get<double>();
  b.contribution = j.at("contribution").get<double>();
  return b;
}

ojson breakdown_ojson(const ObjectiveBreakdown& b) {
  ojson j;
  j["sample_id"] = b.sample_id;
  j["distance_sq"] = b.distance_sq;
  j["ldiv_term"] = b.ldiv_term;
  j["utility"] = b.utility;
  j["contribution"] = b.contribution;
  return j;
}

}  // namespace

json state_to_json(const EvidenceState& s) {
  json j;
  j["evidence_id"] = s.evidence_id;
  j["iteration"] = s.iteration;
  j["population"] = json::array();
  for (const auto& x : s.population) j["population"].push_back(sample_to_json(x));
  j["breakdowns"] = json::array();
  for (const auto& b : s.breakdowns) j["breakdowns"].push_back(breakdown_to_json(b));
  j["history"] = s.history;
  j["records"] = json::array();
  for (const auto& r : s.records) {
    j["records"].push_back({{"iteration", r.iteration},
                            {"objective", r.objective},
                            {"selected", r.selected}});
  }
  j["warnings"] = s.warnings;
  j["done"] = s.done;
  return j;
}

EvidenceState state_from_json(const json& j) {
  EvidenceState s;
  try {
    s.evidence_id = j.at("evidence_id").get<std::string>();
    s.iteration = j.at("iteration").get<int>();
    for (const json& x : j.at("population")) {
      s.population.push_back(sample_from_json(x));
    }
    for (const json& b : j.at("breakdowns")) {
      s.breakdowns.push_back(breakdown_from_json(b));
    }
    s.history = j.at("history").get<std::vector<double>>();
    for (const json& r : j.at("records")) {
      s.records.push_back({r.at("iteration").get<int>(),
                           r.at("objective").get<double>(),
                           r.at("selected").get<std::vector<std::string>>()});
    }
    s.warnings = j.at("warnings").get<std::vector<std::string>>();
    s.done = j.at("done").get<bool>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
  return s;
}

PopulationScorer::PopulationScorer(Gateway& gateway,
                                   const EvidenceTargets& targets,
                                   const ObjectiveWeights& weights)
    : gateway_(gateway), targets_(targets), weights_(weights) {
  if (targets.claims.empty()) {
    throw std::invalid_argument("evidence " + targets.evidence.evidence_id +
                                " has no target claims");
  }
  index_.add(targets.evidence.evidence_id, targets.claims,
             gateway_.embed(targets.claims));
}

std::vector<ObjectiveBreakdown> PopulationScorer::score(
    std::span<SyntheticSample> samples) {
  std::vector<ObjectiveBreakdown> out;
  if (samples.empty()) return out;
  std::vector<std::string> texts;
  texts.reserve(samples.size());
  for (const auto& s : samples) texts.push_back(s.claim);
  const std::vector<EmbeddingVector> vectors = gateway_.embed(texts);
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SyntheticSample& s = samples[i];
    if (!s.utility) {
      s.utility = gateway_.utility(targets_.evidence.text, s.claim, s.hard_label);
    }
    if (!s.embedding_key) {
      s.embedding_key = cache_key(Endpoint::kEmbed, {{"texts", {s.claim}}});
    }
    const NearestTarget nearest =
        index_.nearest_target(vectors[i], targets_.evidence.evidence_id);
    out.push_back(make_breakdown(s.sample_id, nearest.distance * nearest.distance,
                                 ldiv(s.certainty, s.hard_label), *s.utility,
                                 weights_));
  }
  return out;
}

std::vector<int> draw_initial_labels(std::uint64_t seed,
                                     const std::string& evidence_id, int k,
                                     double label_prior) {
  Rng rng = Rng::substream(seed, {"labels", evidence_id});
  std::vector<int> labels;
  labels.reserve(k);
  for (int i = 0; i < k; ++i) labels.push_back(rng.bernoulli(label_prior) ? 1 : 0);
  return labels;
}

namespace {

// Parsed claims from one or more completions of a generation prompt.
std::vector<std::string> request_claims(Gateway& gateway, const std::string& doc,
                                        std::span<const std::string> examples,
                                        int count, int label, int n_completions,
                                        double temperature,
                                        std::vector<std::string>& warnings,
                                        const std::string& evidence_id) {
  const std::string prompt = render_initial_prompt(doc, examples, count, label);
  std::vector<std::string> out;
  for (const std::string& completion :
       gateway.complete(prompt, n_completions, temperature)) {
    try {
      TaggedItems parsed = parse_tagged(completion, "summary", count);
      for (auto& c : parsed.items) out.push_back(std::move(c));
    } catch (const ParseError&) {
      warnings.push_back(evidence_id + ": generation returned no parseable summaries");
    }
  }
  return out;
}

}  // namespace

std::vector<SyntheticSample> initial_population(
    const EvidenceTargets& targets, const RunConfig& config, Gateway& gateway,
    std::vector<std::string>& warnings) {
  const std::string& id = targets.evidence.evidence_id;
  if (targets.claims.empty()) {
    throw std::invalid_argument("evidence " + id + " has no target claims");
  }
  const std::vector<int> labels = draw_initial_labels(
      config.seed, id, config.samples_per_evidence, config.label_prior);
  const std::size_t n_examples =
      std::min(targets.claims.size(), static_cast<std::size_t>(config.fewshot_cap));
  const std::span<const std::string> examples(targets.claims.data(), n_examples);

  std::vector<SyntheticSample> samples;
  for (int label : {1, 0}) {
    const int want = static_cast<int>(std::count(labels.begin(), labels.end(), label));
    if (want == 0) continue;
    std::vector<std::string> claims =
        request_claims(gateway, targets.evidence.text, examples, want, label, 1,
                       config.temperature, warnings, id);
    if (static_cast<int>(claims.size()) < want) {
      const int missing = want - static_cast<int>(claims.size());
      // Two completions so the top-up never collides with a cached request.
      for (auto& c : request_claims(gateway, targets.evidence.text, examples,
                                    missing, label, 2, config.temperature,
                                    warnings, id)) {
        claims.push_back(std::move(c));
      }
    }
    if (static_cast<int>(claims.size()) > want) claims.resize(want);
    for (auto& claim : claims) {
      const double r0 = gateway.entail(targets.evidence.text, claim);
      samples.push_back(make_fewshot_sample(id, std::move(claim), label, r0));
    }
  }
  samples = dedupe_candidates(std::move(samples));
  if (samples.empty()) {
    throw UpstreamError("evidence " + id + ": generator produced no claims");
  }
  if (static_cast<int>(samples.size()) < config.samples_per_evidence) {
    warnings.push_back(id + ": initial population short (" +
                       std::to_string(samples.size()) + " of " +
                       std::to_string(config.samples_per_evidence) + ")");
  }
  return samples;
}

namespace {

void adopt_selection(EvidenceState& state, std::vector<SyntheticSample> pool,
                     const std::vector<ObjectiveBreakdown>& breakdowns,
                     const std::vector<std::string>& selected) {
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < pool.size(); ++i) where[pool[i].sample_id] = i;
  state.population.clear();
  state.breakdowns.clear();
  for (const std::string& id : selected) {
    const std::size_t i = where.at(id);
    state.population.push_back(std::move(pool[i]));
    state.breakdowns.push_back(breakdowns[i]);
  }
}

bool converged(const std::vector<double>& trajectory, const RunConfig& config) {
  if (trajectory.size() < 2) return config.max_iterations == 0;
  const std::span<const double> post(trajectory.data() + 1, trajectory.size() - 1);
  return has_converged(post, config.convergence_epsilon, config.max_iterations) ||
         has_converged(trajectory, config.convergence_epsilon, INT_MAX);
}

}  // namespace

EvidenceState start_evidence(const EvidenceTargets& targets,
                             const RunConfig& config, Gateway& gateway,
                             PopulationScorer& scorer) {
  EvidenceState state;
  state.evidence_id = targets.evidence.evidence_id;
  std::vector<SyntheticSample> pool =
      initial_population(targets, config, gateway, state.warnings);
  const std::vector<ObjectiveBreakdown> scored = scorer.score(pool);
  const SelectionResult sel =
      select_top_k(scored, static_cast<std::size_t>(config.samples_per_evidence), 0);
  adopt_selection(state, std::move(pool), scored, sel.selected);
  state.history.push_back(sel.population_objective);
  state.records.push_back({0, sel.population_objective, sel.selected});
  state.done = converged(state.history, config);
  return state;
}

void iterate(EvidenceState& state, const EvidenceTargets& targets,
             const RunConfig& config, Gateway& gateway,
             PopulationScorer& scorer) {
  if (state.population.empty()) {
    throw std::invalid_argument("iterate: empty population");
  }
  const int it = state.iteration + 1;
  Offspring offspring = augment_population(state.population, config.seed, it,
                                           gateway, config.augment_options());
  for (auto& w : offspring.warnings) state.warnings.push_back(std::move(w));

  std::vector<SyntheticSample> pool = state.population;
  for (auto& c : offspring.children) pool.push_back(std::move(c));
  pool = dedupe_candidates(std::move(pool));
  const std::vector<ObjectiveBreakdown> scored = scorer.score(pool);
  const auto k = static_cast<std::size_t>(config.samples_per_evidence);

  SelectionResult sel;
  if (config.selection == SelectionStrategy::kObjective) {
    sel = select_top_k(scored, k, it);
  } else {
    Rng rng = Rng::substream(
        config.seed, {targets.evidence.evidence_id, std::to_string(it), "random-select"});
    std::vector<std::size_t> order(scored.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t take = std::min(k, order.size());
    sel.iteration = it;
    sel.shortfall = order.size() < k;
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(order[i], order[i + rng.uniform_index(order.size() - i)]);
      sel.selected.push_back(scored[order[i]].sample_id);
      sel.population_objective += scored[order[i]].contribution;
    }
  }
  adopt_selection(state, std::move(pool), scored, sel.selected);
  state.iteration = it;
  state.history.push_back(sel.population_objective);
  state.records.push_back({it, sel.population_objective, sel.selected});
  state.done = converged(state.history, config);
  (void)targets;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir,
                                      const std::string& evidence_id,
                                      int iteration) {
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "-%04d.json", iteration);
  return dir / (sha256_hex(evidence_id).substr(0, 16) + suffix);
}

namespace {

void write_checkpoint(const std::filesystem::path& dir, const RunConfig& config,
                      const EvidenceState& state) {
  json j = state_to_json(state);
  j["config_digest"] = config_digest(config);
  // Every random draw comes from a substream keyed by (seed, evidence,
  // iteration, ...), so the seed is the whole generator state.
  j["rng"] = {{"seed", config.seed}, {"scheme", "sha256-substreams/mt19937_64"}};
  write_file_atomic(checkpoint_path(dir, state.evidence_id, state.iteration),
                    j.dump());
}

std::optional<json> latest_checkpoint_json(const std::filesystem::path& dir,
                                           const std::string& evidence_id) {
  std::optional<json> best;
  for (int it = 0;; ++it) {
    const auto path = checkpoint_path(dir, evidence_id, it);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) break;
    json j;
    try {
      j = json::parse(read_file(path));
    } catch (const json::parse_error&) {
      throw ParseError("corrupt checkpoint " + path.string());
    }
    best = std::move(j);
  }
  return best;
}

}  // namespace

std::optional<EvidenceState> load_latest_checkpoint(
    const std::filesystem::path& dir, const std::string& evidence_id) {
  auto j = latest_checkpoint_json(dir, evidence_id);
  if (!j) return std::nullopt;
  return state_from_json(*j);
}

std::vector<EvidenceState> load_all_checkpoints(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a checkpoint directory: " + dir.string());
  }
  std::map<std::string, json> latest;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    json j;
    try {
      j = json::parse(read_file(entry.path()));
    } catch (const json::parse_error&) {
      throw ParseError("corrupt checkpoint " + entry.path().string());
    }
    if (!j.contains("evidence_id")) continue;
    const std::string id = j["evidence_id"].get<std::string>();
    auto it = latest.find(id);
    if (it == latest.end() ||
        it->second["iteration"].get<int>() < j["iteration"].get<int>()) {
      latest[id] = std::move(j);
    }
  }
  std::vector<EvidenceState> out;
  for (auto& [id, j] : latest) out.push_back(state_from_json(j));
  return out;
}

namespace {

EvidenceResult process_evidence(const EvidenceTargets& targets,
                                const RunConfig& config, Gateway& gateway,
                                bool resume) {
  EvidenceResult result;
  result.evidence_id = targets.evidence.evidence_id;
  result.evidence_text = targets.evidence.text;
  try {
    const std::filesystem::path dir = config.checkpoint_dir;
    PopulationScorer scorer(gateway, targets, config.weights);
    std::optional<EvidenceState> state;
    if (resume && !dir.empty()) {
      if (auto j = latest_checkpoint_json(dir, result.evidence_id)) {
        if (j->value("config_digest", "") != config_digest(config)) {
          throw ConfigError("checkpoint for " + result.evidence_id +
                            " was written with a different config");
        }
        state = state_from_json(*j);
      }
    }
    if (!state) {
      state = start_evidence(targets, config, gateway, scorer);
      if (!dir.empty()) write_checkpoint(dir, config, *state);
    }
    while (!state->done && state->iteration < config.max_iterations) {
      iterate(*state, targets, config, gateway, scorer);
      if (!dir.empty()) write_checkpoint(dir, config, *state);
    }
    result.state = std::move(*state);
    result.ok = true;
  } catch (const ConfigError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
  }
  return result;
}

}  // namespace

RunResult run_pipeline(const RunConfig& config,
                       const std::vector<EvidenceTargets>& targets,
                       Gateway& gateway, const RunOptions& options) {
  config.validate();
  if (!config.checkpoint_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.checkpoint_dir, ec);
    if (ec) throw IoError("cannot create checkpoint dir " + config.checkpoint_dir);
  }
  std::vector<EvidenceResult> results(targets.size());
  std::size_t workers = config.workers > 0
                            ? static_cast<std::size_t>(config.workers)
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(targets.size(), 1));

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr fatal;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= targets.size()) return;
      try {
        results[i] = process_evidence(targets[i], config, gateway, options.resume);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!fatal) fatal = std::current_exception();
        next.store(targets.size());
        return;
      }
      if (options.on_evidence) {
        std::lock_guard<std::mutex> lock(mu);
        options.on_evidence(results[i]);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (fatal) std::rethrow_exception(fatal);

  RunResult out;
  std::size_t failed = 0;
  for (const EvidenceResult& r : results) {
    if (!r.ok) {
      ++failed;
      continue;
    }
    for (const SyntheticSample& s : r.state.population) {
      out.dataset.push_back(to_labeled_example(s, r.evidence_text));
    }
  }
  if (!targets.empty() && failed == targets.size()) {
    throw UpstreamError("all " + std::to_string(failed) +
                        " evidences failed; first error: " + results[0].error);
  }
  std::sort(out.dataset.begin(), out.dataset.end(),
            [](const LabeledExample& a, const LabeledExample& b) {
              return std::tie(a.evidence_id, a.sample_id) <
                     std::tie(b.evidence_id, b.sample_id);
            });
  out.report = build_report(config, results, out.dataset);
  out.evidences = std::move(results);
  return out;
}

ojson build_report(const RunConfig& config,
                   const std::vector<EvidenceResult>& results,
                   const std::vector<LabeledExample>& dataset) {
  ojson report;
  report["seed"] = config.seed;
  report["selection"] = std::string(selection_name(config.selection));
  report["n_evidences"] = results.size();
  report["n_failed"] = std::count_if(results.begin(), results.end(),
                                     [](const EvidenceResult& r) { return !r.ok; });
  report["n_samples"] = dataset.size();
  ojson composition;
  for (Origin o : kOrigins) composition[std::string(origin_name(o))] = 0;
  for (const LabeledExample& ex : dataset) {
    composition[std::string(origin_name(ex.origin))] =
        composition[std::string(origin_name(ex.origin))].get<int>() + 1;
  }
  report["origin_composition"] = composition;
  report["evidences"] = ojson::array();
  for (const EvidenceResult& r : results) {
    ojson e;
    e["evidence_id"] = r.evidence_id;
    e["status"] = r.ok ? "ok" : "failed";
    if (!r.ok) e["error"] = r.error;
    e["objective_history"] = r.state.history;
    e["iterations"] = ojson::array();
    for (const IterationRecord& rec : r.state.records) {
      ojson x;
      x["evidence_id"] = r.evidence_id;
      x["iteration"] = rec.iteration;
      x["objective"] = rec.objective;
      x["selected"] = rec.selected;
      e["iterations"].push_back(std::move(x));
    }
    e["selected_breakdowns"] = ojson::array();
    for (const ObjectiveBreakdown& b : r.state.breakdowns) {
      e["selected_breakdowns"].push_back(breakdown_ojson(b));
    }
    ojson counts;
    for (Origin o : kOrigins) counts[std::string(origin_name(o))] = 0;
    for (const SyntheticSample& s : r.state.population) {
      const std::string name(origin_name(s.origin));
      counts[name] = counts[name].get<int>() + 1;
    }
    e["origin_counts"] = counts;
    e["warnings"] = r.state.warnings;
    report["evidences"].push_back(std::move(e));
  }
  return report;
}

std::vector<ObjectiveBreakdown> rescore_dataset(
    const std::vector<LabeledExample>& dataset,
    const std::vector<EvidenceTargets>& targets, Gateway& gateway,
    const ObjectiveWeights& weights) {
  std::map<std::string, const EvidenceTargets*> by_id;
  for (const EvidenceTargets& t : targets) by_id[t.evidence.evidence_id] = &t;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!by_id.count(dataset[i].evidence_id)) {
      throw ParseError("dataset line " + std::to_string(i + 1) +
                       ": unknown evidence_id " + dataset[i].evidence_id);
    }
    groups[dataset[i].evidence_id].push_back(i);
  }
  std::vector<ObjectiveBreakdown> out(dataset.size());
  for (const auto& [id, rows] : groups) {
    const EvidenceTargets& t = *by_id.at(id);
    PopulationScorer scorer(gateway, t, weights);
    std::vector<SyntheticSample> samples;
    for (std::size_t i : rows) {
      const LabeledExample& ex = dataset[i];
      SyntheticSample s = make_fewshot_sample(ex.evidence_id, ex.claim, ex.label,
                                              ex.certainty);
      s.origin = ex.origin;
      s.generation = ex.generation;
      samples.push_back(std::move(s));
    }
    const auto scored = scorer.score(samples);
    for (std::size_t k = 0; k < rows.size(); ++k) out[rows[k]] = scored[k];
  }
  return out;
}

}  // namespace autogda
