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

#include "autogda/selection.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "autogda/errors.h"

namespace autogda {

double contribution(double distance_sq, double ldiv_value, double utility,
                    double lambda_d, double lambda_u) {
  if (!(distance_sq >= 0.0) || !(ldiv_value >= 0.0) || !(utility >= 0.0) ||
      !(lambda_d >= 0.0) || !(lambda_u >= 0.0)) {
    throw DomainError("contribution: inputs must be non-negative");
  }
  return distance_sq + lambda_d * ldiv_value - lambda_u * utility;
}

double cap_utility(double utility, double cap) {
  return std::min(utility, cap);
}

ObjectiveBreakdown make_breakdown(std::string sample_id, double distance_sq,
                                  double ldiv_value, double raw_utility,
                                  const ObjectiveWeights& weights) {
  ObjectiveBreakdown b;
  b.sample_id = std::move(sample_id);
  b.distance_sq = distance_sq;
  b.ldiv_term = ldiv_value;
  b.utility = cap_utility(raw_utility, weights.utility_cap);
  b.contribution = contribution(b.distance_sq, b.ldiv_term, b.utility,
                                weights.lambda_d, weights.lambda_u);
  return b;
}

SelectionResult select_top_k(std::span<const ObjectiveBreakdown> candidates,
                             std::size_t k, int iteration) {
  if (k == 0) throw std::invalid_argument("select_top_k: k must be >= 1");
  std::unordered_set<std::string> seen;
  for (const auto& c : candidates) {
    if (!seen.insert(c.sample_id).second) {
      throw std::invalid_argument("select_top_k: duplicate sample_id " +
                                  c.sample_id);
    }
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto less = [&](std::size_t a, std::size_t b) {
    const auto& x = candidates[a];
    const auto& y = candidates[b];
    if (x.contribution != y.contribution) return x.contribution < y.contribution;
    return x.sample_id < y.sample_id;
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(order.begin(), order.begin() + take, order.end(), less);

  SelectionResult result;
  result.iteration = iteration;
  result.shortfall = candidates.size() < k;
  result.selected.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.selected.push_back(candidates[order[i]].sample_id);
    result.population_objective += candidates[order[i]].contribution;
  }
  return result;
}

bool has_converged(std::span<const double> history, double epsilon,
                   int max_iterations) {
  if (history.empty()) {
    throw std::invalid_argument("has_converged: empty history");
  }
  if (static_cast<long>(history.size()) >= max_iterations) return true;
  if (history.size() < 2) return false;
  const double prev = history[history.size() - 2];
  const double curr = history.back();
  return (prev - curr) / std::max(std::abs(prev), 1.0) < epsilon;
}

std::vector<SyntheticSample> dedupe_candidates(
    std::vector<SyntheticSample> samples) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<SyntheticSample> out;
  out.reserve(samples.size());
  for (auto& s : samples) {
    auto [it, inserted] = slot.try_emplace(s.sample_id, out.size());
    if (inserted) {
      out.push_back(std::move(s));
      continue;
    }
    SyntheticSample& kept = out[it->second];
    const double a = label_certainty(s);
    const double b = label_certainty(kept);
    if (a > b || (a == b && s.generation < kept.generation)) {
      kept = std::move(s);
    }
  }
  return out;
}

}  // namespace autogda
