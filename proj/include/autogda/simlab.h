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

#ifndef AUTOGDA_SIMLAB_H_
#define AUTOGDA_SIMLAB_H_

// A synthetic entailment world with known ground truth, and noisy mock
// services over it.
//
// Each evidence owns atomic facts "f_e007_03". A claim is a list of
// four-word sentences, each about one fact:
//   factual      "Record f_e007_03 is confirmed."
//   non-factual  "Record f_e007_03 cites d_0042."
// where d_0042 is an off-world distractor. A claim is entailed iff every
// fact token it mentions belongs to the evidence. Non-entailed claims are
// non-factual in every sentence, so deleting a sentence keeps the label.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "autogda/corpus.h"
#include "autogda/gateway.h"
#include "autogda/rng.h"

namespace autogda {

struct SimParams {
  double generator_fidelity = 0.8;  // g: chance a generation keeps its label
  double teacher_noise = 0.3;       // eps for the initial teacher
  double link_teacher_noise = 0.3;  // eps for the augmentation teacher
  double utility_skill = 0.2;       // how much the adapted model knows
  double utility_jitter = 0.1;

  // Throws ConfigError.
  void validate() const;
};

struct SimSentence {
  std::string fact;
  std::string distractor;  // empty when factual
  int lead = 0;            // wording variants, 0..2
  int verb = 0;

  bool factual() const { return distractor.empty(); }
};

struct SimClaim {
  std::vector<SimSentence> sentences;
  int true_label = 0;

  std::string text() const;
  // Every fact and distractor token, in sentence order.
  std::vector<std::string> tokens() const;
};

std::string render_sentence(const SimSentence& s);

// Inverse of SimClaim::text. Throws ParseError on anything else.
std::vector<SimSentence> parse_sim_claim(std::string_view text);

// f_e.../d_... tokens mentioned in arbitrary text.
std::set<std::string> fact_tokens(std::string_view text);

struct SimEvidence {
  std::string evidence_id;
  std::vector<std::string> facts;  // sorted
  std::string text;
  std::vector<SimClaim> targets;
};

struct World {
  std::uint64_t seed = 0;
  SimParams params;
  std::vector<SimEvidence> evidences;
  std::vector<std::string> distractors;

  const SimEvidence& evidence(std::string_view evidence_id) const;
  std::vector<EvidenceTargets> targets() const;
  // Embedding coordinates: evidence facts, then distractors.
  std::size_t universe_size() const { return token_index.size(); }
  long universe_index(const std::string& token) const;

  std::unordered_map<std::string, std::size_t> token_index;
  std::unordered_map<std::string, std::size_t> evidence_index;
};

inline constexpr int kSimTargetsPerEvidence = 3;

World make_world(std::uint64_t seed, int n_evidences, int facts_per_evidence,
                 const SimParams& params = {});

// A claim about 2..min(4, F) sorted facts of `evidence`. With probability g
// it truly carries target_label, otherwise the opposite one.
SimClaim sim_generate(const World& world, const SimEvidence& evidence,
                      int target_label, double g, Rng& rng);

// (1 - eps) * [hypothesis subset of premise] + eps * u, u ~ U(0, 1).
double sim_entail(const std::set<std::string>& premise,
                  const std::set<std::string>& hypothesis, double eps,
                  Rng& rng);

int sim_truth(const World& world, const std::string& evidence_id,
              std::string_view claim);

struct SimEvaluation {
  std::size_t n_samples = 0;
  double label_accuracy = 0.0;
  double mean_certainty = 0.0;
  std::map<std::string, std::size_t> origin_counts;
};

// Throws ParseError for claims the simulator could not have produced.
SimEvaluation evaluate_dataset(const World& world,
                               const std::vector<LabeledExample>& dataset);

// In-process implementation of the whole service protocol over a world.
// Every response is a pure function of the request, so caching and
// concurrency do not change values.
class SimTransport : public Transport {
 public:
  explicit SimTransport(const World& world) : world_(world) {}

  nlohmann::json post(Endpoint endpoint, const nlohmann::json& body) override;

 private:
  nlohmann::json complete(const nlohmann::json& body, Rng& rng);
  std::string generate_batch(std::string_view prompt, Rng& rng);
  std::string rephrase_batch(std::string_view prompt, Rng& rng);
  nlohmann::json paraphrase(const nlohmann::json& body, Rng& rng);
  nlohmann::json embed(const nlohmann::json& body);

  const World& world_;
};

}  // namespace autogda

#endif  // AUTOGDA_SIMLAB_H_
