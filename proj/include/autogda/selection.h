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

#ifndef AUTOGDA_SELECTION_H_
#define AUTOGDA_SELECTION_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "autogda/corpus.h"

namespace autogda {

struct ObjectiveWeights {
  double lambda_d = 32.67;
  double lambda_u = 20.57;
  // Cross-entropy is unbounded; it is capped before weighting.
  double utility_cap = 10.0;
};

// One sample's additive share of the population objective.
struct ObjectiveBreakdown {
  std::string sample_id;
  double distance_sq = 0.0;
  double ldiv_term = 0.0;
  double utility = 0.0;  // after the cap
  double contribution = 0.0;
};

// distance_sq + lambda_d * ldiv_value - lambda_u * utility. All inputs must
// be non-negative (DomainError otherwise); the result may be negative.
double contribution(double distance_sq, double ldiv_value, double utility,
                    double lambda_d, double lambda_u);

double cap_utility(double utility, double cap);

ObjectiveBreakdown make_breakdown(std::string sample_id, double distance_sq,
                                  double ldiv_value, double raw_utility,
                                  const ObjectiveWeights& weights);

struct SelectionResult {
  std::vector<std::string> selected;  // ascending contribution
  double population_objective = 0.0;
  int iteration = 0;
  bool shortfall = false;  // fewer than k candidates were available
};

// Keeps the k smallest contributions, ties broken by ascending sample_id.
// The objective is a sum of per-sample terms, so this is the exact argmin
// over all k-subsets. Throws std::invalid_argument if k == 0 or sample ids
// repeat.
SelectionResult select_top_k(std::span<const ObjectiveBreakdown> candidates,
                             std::size_t k, int iteration = 0);

// History holds the population objective after each completed iteration.
// Converged once history.size() >= max_iterations, or when the last
// relative improvement (prev - curr) / max(|prev|, 1) drops below epsilon.
bool has_converged(std::span<const double> history, double epsilon,
                   int max_iterations);

// Collapses samples sharing (evidence_id, claim, hard_label), i.e. sharing
// a sample_id. Keeps the instance with the most certainty on its own label;
// ties keep the lower generation, then the earlier one. First-seen order.
std::vector<SyntheticSample> dedupe_candidates(
    std::vector<SyntheticSample> samples);

}  // namespace autogda

#endif  // AUTOGDA_SELECTION_H_
