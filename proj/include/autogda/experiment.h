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

#ifndef AUTOGDA_EXPERIMENT_H_
#define AUTOGDA_EXPERIMENT_H_

// Simulator experiments: run the pipeline on synthetic worlds and compare
// objective-based selection against random selection from the same pools.

#include <cstdint>
#include <string>
#include <vector>

#include "autogda/pipeline.h"
#include "autogda/simlab.h"
#include "json.hpp"

namespace autogda {

struct ExperimentConfig {
  std::uint64_t seed = 0;  // run r uses seed + r for world and pipeline
  int runs = 20;
  int n_evidences = 30;
  int facts_per_evidence = 5;
  SimParams params;
  RunConfig pipeline;  // backend/endpoints ignored
  bool compare_random = true;
};

// Pipeline settings used by simulator experiments unless overridden.
RunConfig default_sim_run_config();

struct StrategyOutcome {
  double label_accuracy = 0.0;
  double mean_certainty = 0.0;
  bool monotone = true;  // every evidence's trajectory non-increasing
  std::string dataset_jsonl;
  nlohmann::ordered_json report;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  StrategyOutcome objective;
  std::optional<StrategyOutcome> random;
};

struct ExperimentSummary {
  std::vector<SeedOutcome> seeds;
  double mean_objective = 0.0;
  double mean_random = 0.0;
  double mean_difference = 0.0;  // objective - random
  int wins = 0;
  int losses = 0;
  int ties = 0;
  double sign_test_p = 1.0;  // two-sided, ties dropped
  bool all_monotone = true;
};

// Exact two-sided binomial sign test: P(|X - n/2| >= |wins - n/2|),
// n = wins + losses, X ~ Bin(n, 1/2). Returns 1 for n = 0.
double sign_test_p_value(int wins, int losses);

StrategyOutcome run_sim_once(const World& world, const RunConfig& config);

// Throws ConfigError for invalid parameters (e.g. runs < 1).
ExperimentSummary run_experiment(const ExperimentConfig& config);

nlohmann::ordered_json summary_to_json(const ExperimentConfig& config,
                                       const ExperimentSummary& summary);

}  // namespace autogda

#endif  // AUTOGDA_EXPERIMENT_H_
