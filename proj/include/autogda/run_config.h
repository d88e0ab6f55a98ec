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

#ifndef AUTOGDA_RUN_CONFIG_H_
#define AUTOGDA_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "autogda/augmenters.h"
#include "autogda/gateway.h"
#include "autogda/selection.h"
#include "autogda/simlab.h"
#include "json.hpp"

namespace autogda {

enum class SelectionStrategy { kObjective, kRandom };

// Simulated backend: the world the mock services answer from.
struct SimBackend {
  std::uint64_t seed = 0;
  int n_evidences = 30;
  int facts_per_evidence = 5;
  SimParams params;
};

struct RunConfig {
  int samples_per_evidence = 12;  // K
  OffspringCounts offspring;      // l = sum
  int max_iterations = 2;
  double convergence_epsilon = 1e-3;
  ObjectiveWeights weights;
  double label_prior = 0.5;  // P(label = 1) for the initial population
  int fewshot_cap = 4;
  std::uint64_t seed = 0;
  SelectionStrategy selection = SelectionStrategy::kObjective;
  double mask_fraction = 0.2;
  double temperature = 1.0;
  int workers = 0;  // 0 = hardware concurrency
  ServiceEndpoints endpoints;
  std::string backend = "http";  // "http" or "sim"
  SimBackend sim;
  std::string cache_dir;
  std::string checkpoint_dir;

  // Throws ConfigError.
  void validate() const;
  AugmentOptions augment_options() const;
};

std::string_view selection_name(SelectionStrategy s);

// Unknown keys are rejected so typos do not silently fall back to defaults.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json run_config_to_json(const RunConfig& config);

// Fills empty cache_dir / endpoint URLs from AUTOGDA_CACHE_DIR and
// AUTOGDA_ENDPOINT_{COMPLETE,ENTAIL,ENTAIL_LINK,UTILITY,EMBED,PARAPHRASE}.
void apply_env_fallbacks(RunConfig& config);

}  // namespace autogda

#endif  // AUTOGDA_RUN_CONFIG_H_
