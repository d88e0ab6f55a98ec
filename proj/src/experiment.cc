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

#include "autogda/experiment.h"

#include <cmath>
#include <memory>

#include "autogda/errors.h"
#include "autogda/gateway.h"

namespace autogda {

RunConfig default_sim_run_config() {
  RunConfig c;
  c.backend = "sim";
  c.samples_per_evidence = 8;
  c.max_iterations = 2;
  return c;
}

double sign_test_p_value(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  const int k = std::max(wins, losses);
  // Upper tail P(X >= k), doubled, computed in log space.
  double tail = 0.0;
  for (int x = k; x <= n; ++x) {
    tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                     std::lgamma(n - x + 1.0) - n * std::log(2.0));
  }
  return std::min(1.0, 2.0 * tail);
}

StrategyOutcome run_sim_once(const World& world, const RunConfig& config) {
  Gateway gateway(std::make_shared<SimTransport>(world));
  const RunResult result = run_pipeline(config, world.targets(), gateway);
  const SimEvaluation eval = evaluate_dataset(world, result.dataset);
  StrategyOutcome out;
  out.label_accuracy = eval.label_accuracy;
  out.mean_certainty = eval.mean_certainty;
  for (const EvidenceResult& r : result.evidences) {
    const auto& h = r.state.history;
    for (std::size_t i = 1; i < h.size(); ++i) {
      if (h[i] > h[i - 1]) out.monotone = false;
    }
  }
  out.dataset_jsonl = format_dataset(result.dataset);
  out.report = result.report;
  return out;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  if (config.runs < 1) throw ConfigError("runs must be >= 1");
  if (config.n_evidences < 1) throw ConfigError("n_evidences must be >= 1");
  if (config.facts_per_evidence < 1) {
    throw ConfigError("facts_per_evidence must be >= 1");
  }
  config.params.validate();

  ExperimentSummary summary;
  for (int r = 0; r < config.runs; ++r) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
    const World world = make_world(seed, config.n_evidences,
                                   config.facts_per_evidence, config.params);
    RunConfig rc = config.pipeline;
    rc.backend = "sim";
    rc.seed = seed;
    rc.cache_dir.clear();
    rc.checkpoint_dir.clear();

    SeedOutcome outcome;
    outcome.seed = seed;
    rc.selection = SelectionStrategy::kObjective;
    outcome.objective = run_sim_once(world, rc);
    summary.all_monotone = summary.all_monotone && outcome.objective.monotone;
    summary.mean_objective += outcome.objective.label_accuracy;
    if (config.compare_random) {
      rc.selection = SelectionStrategy::kRandom;
      outcome.random = run_sim_once(world, rc);
      const double diff =
          outcome.objective.label_accuracy - outcome.random->label_accuracy;
      summary.mean_random += outcome.random->label_accuracy;
      if (diff > 0) {
        ++summary.wins;
      } else if (diff < 0) {
        ++summary.losses;
      } else {
        ++summary.ties;
      }
    }
    summary.seeds.push_back(std::move(outcome));
  }
  summary.mean_objective /= config.runs;
  if (config.compare_random) {
    summary.mean_random /= config.runs;
    summary.mean_difference = summary.mean_objective - summary.mean_random;
    summary.sign_test_p = sign_test_p_value(summary.wins, summary.losses);
  }
  return summary;
}

nlohmann::ordered_json summary_to_json(const ExperimentConfig& config,
                                       const ExperimentSummary& s) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  j["runs"] = config.runs;
  j["n_evidences"] = config.n_evidences;
  j["facts_per_evidence"] = config.facts_per_evidence;
  j["generator_fidelity"] = config.params.generator_fidelity;
  j["teacher_noise"] = config.params.teacher_noise;
  j["link_teacher_noise"] = config.params.link_teacher_noise;
  j["samples_per_evidence"] = config.pipeline.samples_per_evidence;
  j["max_iterations"] = config.pipeline.max_iterations;
  j["lambda_d"] = config.pipeline.weights.lambda_d;
  j["lambda_u"] = config.pipeline.weights.lambda_u;
  j["mean_accuracy_objective"] = s.mean_objective;
  if (config.compare_random) {
    j["mean_accuracy_random"] = s.mean_random;
    j["mean_difference"] = s.mean_difference;
    j["wins"] = s.wins;
    j["losses"] = s.losses;
    j["ties"] = s.ties;
    j["sign_test_p"] = s.sign_test_p;
  }
  j["all_monotone"] = s.all_monotone;
  j["per_seed"] = nlohmann::ordered_json::array();
  for (const SeedOutcome& o : s.seeds) {
    nlohmann::ordered_json x;
    x["seed"] = o.seed;
    x["accuracy_objective"] = o.objective.label_accuracy;
    if (o.random) x["accuracy_random"] = o.random->label_accuracy;
    x["monotone"] = o.objective.monotone;
    j["per_seed"].push_back(std::move(x));
  }
  return j;
}

}  // namespace autogda
