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

#ifndef AUTOGDA_AUGMENTERS_H_
#define AUTOGDA_AUGMENTERS_H_

// Label-preserving claim mutations: gap-filling rephrase, paraphrase and
// sentence deletion. Children keep the parent's label; their certainty is
// propagated through the augmentation teacher.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autogda/corpus.h"
#include "autogda/gateway.h"
#include "autogda/rng.h"

namespace autogda {

struct OffspringCounts {
  int partial_rephrase = 6;
  int paraphrase = 3;
  int drop_sentence = 3;

  int total() const { return partial_rephrase + paraphrase + drop_sentence; }
};

struct AugmentOptions {
  OffspringCounts counts;
  double mask_fraction = 0.2;
  double temperature = 1.0;
  int answers_per_mask = 3;
};

// Replaces one contiguous run of max(1, round(fraction * words)) words with
// as many "_" tokens. Words are whitespace-separated and re-joined with a
// single space. Throws std::invalid_argument on empty text or a fraction
// outside (0, 1).
std::string mask_span(std::string_view text, double fraction, Rng& rng);

// Rule-based splitter. A sentence ends at '.', '!' or '?' (plus any closing
// quotes or brackets right after it) when followed by whitespace and then an
// uppercase letter or an opening quote, or by the end of the text.
std::vector<std::string> split_sentences(std::string_view text);

// Up to `max_children` claims, each omitting one distinct, uniformly chosen
// sentence. A single-sentence claim yields nothing.
std::vector<std::string> drop_sentence(std::string_view claim, Rng& rng,
                                       int max_children = 3);

struct OperatorOutput {
  std::vector<std::string> claims;
  std::vector<std::string> warnings;
};

// ceil(count / answers_per_mask) distinct masks, one completion request
// each, answers parsed from <answer k> tags. Gateway errors propagate.
OperatorOutput partial_rephrase(const SyntheticSample& parent, Rng& rng,
                                Gateway& gateway, const AugmentOptions& opts);

std::vector<std::string> paraphrase(const SyntheticSample& parent,
                                    Gateway& gateway, int n = 3);

struct Offspring {
  std::vector<SyntheticSample> children;
  std::vector<std::string> warnings;
};

// Mutates every parent and scores each (parent, child) edge with the
// augmentation teacher. Parent p draws from the substream
// (seed, evidence_id, iteration, p.sample_id), so the result does not
// depend on parent order or scheduling. Failed operators and children are
// skipped with a warning.
Offspring augment_population(std::span<const SyntheticSample> parents,
                             std::uint64_t seed, int iteration,
                             Gateway& gateway, const AugmentOptions& opts);

}  // namespace autogda

#endif  // AUTOGDA_AUGMENTERS_H_
