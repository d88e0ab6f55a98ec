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

#ifndef AUTOGDA_PIPELINE_H_
#define AUTOGDA_PIPELINE_H_

// Per-evidence population search: generate K labeled claims, then
// repeatedly augment, rescore and keep the K best until convergence.

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autogda/corpus.h"
#include "autogda/embed_space.h"
#include "autogda/gateway.h"
#include "autogda/run_config.h"
#include "autogda/selection.h"
#include "json.hpp"

namespace autogda {

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  std::vector<std::string> selected;
};

struct EvidenceState {
  std::string evidence_id;
  int iteration = 0;  // completed augmentation rounds
  std::vector<SyntheticSample> population;
  std::vector<ObjectiveBreakdown> breakdowns;  // aligned with population
  std::vector<double> history;                 // L0, L1, ...
  std::vector<IterationRecord> records;
  std::vector<std::string> warnings;
  bool done = false;
};

nlohmann::json state_to_json(const EvidenceState& state);
EvidenceState state_from_json(const nlohmann::json& j);

// Scores samples of one evidence: squared distance to the nearest target
// claim, LDiv of the sample's certainty, capped utility. Utilities are
// memoized on the samples.
class PopulationScorer {
 public:
  PopulationScorer(Gateway& gateway, const EvidenceTargets& targets,
                   const ObjectiveWeights& weights);

  std::vector<ObjectiveBreakdown> score(std::span<SyntheticSample> samples);
  const TargetIndex& index() const { return index_; }

 private:
  Gateway& gateway_;
  const EvidenceTargets& targets_;
  ObjectiveWeights weights_;
  TargetIndex index_;
};

// K labels from Bernoulli(label_prior) on the (seed, "labels", evidence_id)
// substream, in draw order.
std::vector<int> draw_initial_labels(std::uint64_t seed,
                                     const std::string& evidence_id, int k,
                                     double label_prior);

// One generation request per label value, one top-up retry on shortfall.
// Certainty r0 = entail(evidence, claim). Throws UpstreamError when no
// claim at all could be generated.
std::vector<SyntheticSample> initial_population(
    const EvidenceTargets& targets, const RunConfig& config, Gateway& gateway,
    std::vector<std::string>& warnings);

// Builds the state after generation: population scored, history = [L0].
EvidenceState start_evidence(const EvidenceTargets& targets,
                             const RunConfig& config, Gateway& gateway,
                             PopulationScorer& scorer);

// One round: augment the current population, merge parents and children,
// rescore, keep K. Sets state.done at convergence.
void iterate(EvidenceState& state, const EvidenceTargets& targets,
             const RunConfig& config, Gateway& gateway,
             PopulationScorer& scorer);

struct EvidenceResult {
  std::string evidence_id;
  std::string evidence_text;
  bool ok = false;
  std::string error;
  EvidenceState state;
};

struct RunResult {
  std::vector<LabeledExample> dataset;  // sorted by (evidence_id, sample_id)
  nlohmann::ordered_json report;
  std::vector<EvidenceResult> evidences;
};

struct RunOptions {
  bool resume = false;
  // Called after each evidence finishes (from worker threads, serialized).
  std::function<void(const EvidenceResult&)> on_evidence;
};

// Runs every evidence independently (in parallel), writing a checkpoint
// per completed round when config.checkpoint_dir is set. Throws
// UpstreamError when every evidence failed.
RunResult run_pipeline(const RunConfig& config,
                       const std::vector<EvidenceTargets>& targets,
                       Gateway& gateway, const RunOptions& options = {});

nlohmann::ordered_json build_report(const RunConfig& config,
                                    const std::vector<EvidenceResult>& results,
                                    const std::vector<LabeledExample>& dataset);

// Breakdowns for an emitted dataset against its targets, in dataset order.
// Throws ParseError for samples whose evidence has no targets.
std::vector<ObjectiveBreakdown> rescore_dataset(
    const std::vector<LabeledExample>& dataset,
    const std::vector<EvidenceTargets>& targets, Gateway& gateway,
    const ObjectiveWeights& weights);

nlohmann::json breakdown_to_json(const ObjectiveBreakdown& b);

std::filesystem::path checkpoint_path(const std::filesystem::path& dir,
                                      const std::string& evidence_id,
                                      int iteration);
// Latest checkpoint of an evidence, if any.
std::optional<EvidenceState> load_latest_checkpoint(
    const std::filesystem::path& dir, const std::string& evidence_id);
std::vector<EvidenceState> load_all_checkpoints(const std::filesystem::path& dir);

}  // namespace autogda

#endif  // AUTOGDA_PIPELINE_H_
