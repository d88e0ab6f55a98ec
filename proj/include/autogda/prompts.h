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

#ifndef AUTOGDA_PROMPTS_H_
#define AUTOGDA_PROMPTS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace autogda {

// At most this many target claims are shown as few-shot examples.
inline constexpr std::size_t kMaxFewshotExamples = 4;

// Few-shot generation prompt asking for `n` claims about `document`.
// target_label 1 asks for fully supported claims, 0 for claims carrying at
// least one piece of non-factual information. Examples beyond the first
// kMaxFewshotExamples are ignored. Throws std::invalid_argument if n < 1
// or there are no examples.
std::string render_initial_prompt(std::string_view document,
                                  std::span<const std::string> examples, int n,
                                  int target_label);

// Gap-filling prompt: `original` is the unmasked claim, `masked` the same
// claim with a span replaced by "_" tokens.
std::string render_rephrase_prompt(std::string_view original,
                                   std::string_view masked, int n);

// Binary consistency prompt for LLM teachers ("1" consistent, "0" not).
// Used by scoring services; the engine only consumes their probability.
std::string render_entailment_prompt(std::string_view document,
                                     std::string_view claim);

struct TaggedItems {
  std::vector<std::string> items;  // trimmed contents, index order
  std::vector<int> missing;        // indices absent, unterminated or empty
};

// Extracts <tag k>...</tag k> for k = 0..n-1, ignoring surrounding prose.
// Throws ParseError when nothing could be extracted.
TaggedItems parse_tagged(std::string_view text, std::string_view tag, int n);

}  // namespace autogda

#endif  // AUTOGDA_PROMPTS_H_
