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

// autogda: generate, simulate, rescore and inspect synthetic NLI data.
//
// Exit codes: 0 ok, 1 config/usage error, 2 I/O error, 3 upstream service
// error, 4 parse error in inputs.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "autogda/corpus.h"
#include "autogda/errors.h"
#include "autogda/experiment.h"
#include "autogda/gateway.h"
#include "autogda/http_transport.h"
#include "autogda/pipeline.h"
#include "autogda/run_config.h"
#include "autogda/simlab.h"

namespace {

using namespace autogda;
using json = nlohmann::json;

enum Exit { kOk = 0, kConfig = 1, kIo = 2, kUpstream = 3, kParse = 4 };

struct Backend {
  std::unique_ptr<World> world;  // sim backend only
  std::unique_ptr<Gateway> gateway;
};

Backend make_backend(RunConfig& config) {
  Backend b;
  std::shared_ptr<ResponseCache> cache;
  if (!config.cache_dir.empty()) {
    cache = std::make_shared<ResponseCache>(config.cache_dir);
  }
  std::shared_ptr<Transport> transport;
  if (config.backend == "sim") {
    b.world = std::make_unique<World>(make_world(config.sim.seed,
                                                 config.sim.n_evidences,
                                                 config.sim.facts_per_evidence,
                                                 config.sim.params));
    transport = std::make_shared<SimTransport>(*b.world);
  } else {
    transport = std::make_shared<HttpTransport>(config.endpoints);
    if (config.workers == 0) {
      config.workers = static_cast<int>(
          std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                             static_cast<unsigned>(config.endpoints.max_in_flight)));
    }
  }
  b.gateway = std::make_unique<Gateway>(transport, cache);
  return b;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

struct RunArgs {
  std::string config, targets, out, report, cache_dir, checkpoint_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool resume = false;
};

int cmd_run(const RunArgs& a) {
  RunConfig config = load_run_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.workers) config.workers = *a.workers;
  if (!a.cache_dir.empty()) config.cache_dir = a.cache_dir;
  if (!a.checkpoint_dir.empty()) config.checkpoint_dir = a.checkpoint_dir;
  apply_env_fallbacks(config);
  config.validate();
  if (a.resume && config.checkpoint_dir.empty()) {
    throw ConfigError("--resume needs a checkpoint directory");
  }
  const std::vector<EvidenceTargets> targets = ingest_targets(a.targets);
  Backend backend = make_backend(config);

  RunOptions options;
  options.resume = a.resume;
  const RunResult result = run_pipeline(config, targets, *backend.gateway, options);
  for (const EvidenceResult& r : result.evidences) {
    for (const std::string& w : r.state.warnings) std::cerr << "warning: " << w << "\n";
    if (!r.ok) std::cerr << "error: " << r.evidence_id << ": " << r.error << "\n";
  }
  emit_dataset(result.dataset, a.out);
  if (!a.report.empty()) write_file_atomic(a.report, result.report.dump(2) + "\n");

  std::size_t ok = 0;
  for (const EvidenceResult& r : result.evidences) ok += r.ok ? 1 : 0;
  std::cout << "evidences: " << ok << " ok, " << result.evidences.size() - ok
            << " failed\n"
            << "samples: " << result.dataset.size() << "\n"
            << "upstream requests: " << backend.gateway->upstream_requests() << "\n";
  return kOk;
}

struct SimArgs {
  std::uint64_t seed = 0;
  int runs = 20;
  int n_evidence = 30;
  int facts = 5;
  double teacher_noise = 0.3;
  std::optional<double> link_noise;
  double fidelity = 0.8;
  bool compare_random = false;
  int samples = 8;
  int iterations = 2;
  std::optional<double> lambda_d, lambda_u;
  std::optional<int> workers;
  std::string report, write_targets;
};

int cmd_simulate(const SimArgs& a) {
  ExperimentConfig ec;
  ec.seed = a.seed;
  ec.runs = a.runs;
  ec.n_evidences = a.n_evidence;
  ec.facts_per_evidence = a.facts;
  ec.params.teacher_noise = a.teacher_noise;
  ec.params.link_teacher_noise = a.link_noise.value_or(a.teacher_noise);
  ec.params.generator_fidelity = a.fidelity;
  ec.compare_random = a.compare_random;
  ec.pipeline = default_sim_run_config();
  ec.pipeline.samples_per_evidence = a.samples;
  ec.pipeline.max_iterations = a.iterations;
  if (a.lambda_d) ec.pipeline.weights.lambda_d = *a.lambda_d;
  if (a.lambda_u) ec.pipeline.weights.lambda_u = *a.lambda_u;
  if (a.workers) ec.pipeline.workers = *a.workers;
  if (a.runs < 1) throw ConfigError("--runs must be >= 1");
  if (a.n_evidence < 1 || a.facts < 1) {
    throw ConfigError("--n-evidence and --facts-per-evidence must be >= 1");
  }
  ec.params.validate();
  ec.pipeline.validate();

  if (!a.write_targets.empty()) {
    const World world = make_world(a.seed, a.n_evidence, a.facts, ec.params);
    std::string text;
    for (const EvidenceTargets& t : world.targets()) {
      for (const std::string& c : t.claims) {
        nlohmann::ordered_json j;
        j["evidence_id"] = t.evidence.evidence_id;
        j["evidence"] = t.evidence.text;
        j["claim"] = c;
        text += j.dump() + "\n";
      }
    }
    write_file_atomic(a.write_targets, text);
  }

  const ExperimentSummary s = run_experiment(ec);
  char line[160];
  for (const SeedOutcome& o : s.seeds) {
    if (o.random) {
      std::snprintf(line, sizeof line, "seed %llu: objective %.4f random %.4f\n",
                    static_cast<unsigned long long>(o.seed),
                    o.objective.label_accuracy, o.random->label_accuracy);
    } else {
      std::snprintf(line, sizeof line, "seed %llu: objective %.4f\n",
                    static_cast<unsigned long long>(o.seed),
                    o.objective.label_accuracy);
    }
    std::cout << line;
  }
  std::snprintf(line, sizeof line, "mean accuracy objective: %.4f\n",
                s.mean_objective);
  std::cout << line;
  if (a.compare_random) {
    std::snprintf(line, sizeof line,
                  "mean accuracy random: %.4f\nmean difference (objective - "
                  "random): %+.4f\nsign test: %d wins, %d losses, %d ties, "
                  "p = %.3g\n",
                  s.mean_random, s.mean_difference, s.wins, s.losses, s.ties,
                  s.sign_test_p);
    std::cout << line;
  }
  std::cout << "objective non-increasing on every evidence: "
            << (s.all_monotone ? "yes" : "no") << "\n";
  if (!a.report.empty()) {
    write_file_atomic(a.report, summary_to_json(ec, s).dump(2) + "\n");
  }
  return kOk;
}

struct ScoreArgs {
  std::string config, dataset, targets, out, cache_dir;
  std::optional<double> lambda_d, lambda_u;
};

int cmd_score(const ScoreArgs& a) {
  RunConfig config = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (a.lambda_d) config.weights.lambda_d = *a.lambda_d;
  if (a.lambda_u) config.weights.lambda_u = *a.lambda_u;
  if (!a.cache_dir.empty()) config.cache_dir = a.cache_dir;
  apply_env_fallbacks(config);
  config.validate();
  const std::vector<EvidenceTargets> targets = ingest_targets(a.targets);
  const std::vector<LabeledExample> dataset = read_dataset(a.dataset);
  Backend backend = make_backend(config);
  const std::vector<ObjectiveBreakdown> scored =
      rescore_dataset(dataset, targets, *backend.gateway, config.weights);
  std::string text;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    nlohmann::ordered_json j;
    j["evidence_id"] = dataset[i].evidence_id;
    j["sample_id"] = scored[i].sample_id;
    j["distance_sq"] = scored[i].distance_sq;
    j["ldiv_term"] = scored[i].ldiv_term;
    j["utility"] = scored[i].utility;
    j["contribution"] = scored[i].contribution;
    text += j.dump() + "\n";
  }
  write_text(a.out, text);
  return kOk;
}

struct InspectArgs {
  std::string checkpoint_dir, dataset, evidence_id;
};

std::string clip(const std::string& s, std::size_t n) {
  return s.size() <= n ? s : s.substr(0, n - 3) + "...";
}

int cmd_inspect(const InspectArgs& a) {
  bool found = a.evidence_id.empty();
  char line[256];
  if (!a.checkpoint_dir.empty()) {
    for (const EvidenceState& s : load_all_checkpoints(a.checkpoint_dir)) {
      if (!a.evidence_id.empty() && s.evidence_id != a.evidence_id) continue;
      found = true;
      std::cout << s.evidence_id << ": iteration " << s.iteration
                << (s.done ? " (done)" : "") << ", population "
                << s.population.size() << ", objective";
      for (double h : s.history) {
        std::snprintf(line, sizeof line, " %.4f", h);
        std::cout << line;
      }
      std::cout << "\n";
      for (std::size_t i = 0; i < s.population.size(); ++i) {
        const SyntheticSample& x = s.population[i];
        const double contrib =
            i < s.breakdowns.size() ? s.breakdowns[i].contribution : 0.0;
        std::snprintf(line, sizeof line, "  %s y=%d r=%.4f L=%+.4f %-16s g%d ",
                      x.sample_id.c_str(), x.hard_label, x.certainty, contrib,
                      std::string(origin_name(x.origin)).c_str(), x.generation);
        std::cout << line << clip(x.claim, 80) << "\n";
      }
    }
  } else {
    std::map<std::string, std::vector<LabeledExample>> groups;
    for (LabeledExample& ex : read_dataset(a.dataset)) {
      groups[ex.evidence_id].push_back(std::move(ex));
    }
    for (const auto& [id, rows] : groups) {
      if (!a.evidence_id.empty() && id != a.evidence_id) continue;
      found = true;
      int positives = 0;
      double certainty = 0.0;
      std::map<std::string, int> origins;
      for (const LabeledExample& ex : rows) {
        positives += ex.label;
        certainty += ex.certainty;
        ++origins[std::string(origin_name(ex.origin))];
      }
      std::snprintf(line, sizeof line,
                    "%s: %zu samples, %d positive, mean certainty %.4f,", id.c_str(),
                    rows.size(), positives, certainty / rows.size());
      std::cout << line;
      for (const auto& [o, n] : origins) std::cout << " " << o << "=" << n;
      std::cout << "\n";
      if (!a.evidence_id.empty()) {
        for (const LabeledExample& ex : rows) {
          std::snprintf(line, sizeof line, "  %s y=%d r=%.4f %-16s g%d ",
                        ex.sample_id.c_str(), ex.label, ex.certainty,
                        std::string(origin_name(ex.origin)).c_str(), ex.generation);
          std::cout << line << clip(ex.claim, 80) << "\n";
        }
      }
    }
  }
  if (!found) throw ParseError("no evidence with id " + a.evidence_id);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic NLI data generation with certainty-aware selection"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Generate a dataset for target claims");
  run_cmd->add_option("--config", run.config, "Config JSON")->required();
  run_cmd->add_option("--targets", run.targets, "Target claims JSONL")->required();
  run_cmd->add_option("--out", run.out, "Output dataset JSONL")->required();
  run_cmd->add_option("--report", run.report, "Output report JSON");
  run_cmd->add_option("--seed", run.seed, "Master seed (overrides config)");
  run_cmd->add_option("--workers", run.workers, "Parallel evidences");
  run_cmd->add_option("--cache-dir", run.cache_dir, "Response cache directory");
  run_cmd->add_option("--checkpoint-dir", run.checkpoint_dir, "Checkpoint directory");
  run_cmd->add_flag("--resume", run.resume, "Continue from checkpoints");

  SimArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run simulator experiments");
  sim_cmd->add_option("--seed", sim.seed, "First seed");
  sim_cmd->add_option("--runs", sim.runs, "Number of seeds");
  sim_cmd->add_option("--n-evidence", sim.n_evidence, "Evidences per world");
  sim_cmd->add_option("--facts-per-evidence", sim.facts, "Facts per evidence");
  sim_cmd->add_option("--teacher-noise", sim.teacher_noise, "Initial teacher noise");
  sim_cmd->add_option("--link-noise", sim.link_noise,
                      "Augmentation teacher noise (default: teacher noise)");
  sim_cmd->add_option("--generator-fidelity", sim.fidelity, "Generator fidelity");
  sim_cmd->add_flag("--compare-random", sim.compare_random,
                    "Also run random selection and compare");
  sim_cmd->add_option("--samples-per-evidence", sim.samples, "K");
  sim_cmd->add_option("--iterations", sim.iterations, "Augmentation rounds");
  sim_cmd->add_option("--lambda-d", sim.lambda_d, "Label-divergence weight");
  sim_cmd->add_option("--lambda-u", sim.lambda_u, "Utility weight");
  sim_cmd->add_option("--workers", sim.workers, "Parallel evidences");
  sim_cmd->add_option("--report", sim.report, "Output report JSON");
  sim_cmd->add_option("--write-targets", sim.write_targets,
                      "Also write the first world's target claims as JSONL");

  ScoreArgs score;
  CLI::App* score_cmd = app.add_subcommand("score", "Recompute per-sample objective terms");
  score_cmd->add_option("--config", score.config, "Config JSON (backend, weights)");
  score_cmd->add_option("--dataset", score.dataset, "Dataset JSONL")->required();
  score_cmd->add_option("--targets", score.targets, "Target claims JSONL")->required();
  score_cmd->add_option("--out", score.out, "Output breakdown JSONL (default stdout)");
  score_cmd->add_option("--lambda-d", score.lambda_d, "Label-divergence weight");
  score_cmd->add_option("--lambda-u", score.lambda_u, "Utility weight");
  score_cmd->add_option("--cache-dir", score.cache_dir, "Response cache directory");

  InspectArgs inspect;
  CLI::App* inspect_cmd = app.add_subcommand("inspect", "Summarize checkpoints or a dataset");
  auto* ck = inspect_cmd->add_option("--checkpoint-dir", inspect.checkpoint_dir,
                                     "Checkpoint directory");
  auto* ds = inspect_cmd->add_option("--dataset", inspect.dataset, "Dataset JSONL");
  ck->excludes(ds);
  inspect_cmd->add_option("--evidence-id", inspect.evidence_id, "Only this evidence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (score_cmd->parsed()) return cmd_score(score);
    if (inspect_cmd->parsed()) {
      if (inspect.checkpoint_dir.empty() && inspect.dataset.empty()) {
        throw ConfigError("inspect needs --checkpoint-dir or --dataset");
      }
      return cmd_inspect(inspect);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UpstreamError& e) {
    std::cerr << "upstream error: " << e.what() << "\n";
    return kUpstream;
  } catch (const TransportError& e) {
    std::cerr << "upstream error: " << e.what() << "\n";
    return kUpstream;
  } catch (const ProtocolError& e) {
    std::cerr << "upstream error: " << e.what() << "\n";
    return kUpstream;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
