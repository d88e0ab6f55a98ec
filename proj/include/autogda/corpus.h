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

#ifndef AUTOGDA_CORPUS_H_
#define AUTOGDA_CORPUS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace autogda {

enum class Origin { kFewshot, kPartialRephrase, kParaphrase, kDropSentence };

std::string_view origin_name(Origin origin);
// Throws std::invalid_argument for unknown names.
Origin parse_origin(std::string_view name);

struct Evidence {
  std::string evidence_id;
  // Prompt/question plus retrieved documents, already integrated.
  std::string text;
};

// All unlabeled target claims of one evidence, duplicates collapsed, in
// first-seen order.
struct EvidenceTargets {
  Evidence evidence;
  std::vector<std::string> claims;
};

struct SyntheticSample {
  std::string sample_id;
  std::string evidence_id;
  std::string claim;
  int hard_label = 0;
  double certainty = 0.5;
  int generation = 0;
  std::optional<std::string> parent_id;
  Origin origin = Origin::kFewshot;
  std::optional<double> utility;  // raw cross-entropy, cached
  std::optional<std::string> embedding_key;
};

// Pure function of the content: 16 hex chars of
// SHA-256(evidence_id "\x1f" claim "\x1f" label).
std::string make_sample_id(std::string_view evidence_id, std::string_view claim,
                           int hard_label);

SyntheticSample make_fewshot_sample(const std::string& evidence_id,
                                    std::string claim, int hard_label,
                                    double certainty);

SyntheticSample make_child_sample(const SyntheticSample& parent,
                                  std::string claim, Origin origin,
                                  double certainty);

// Throws std::invalid_argument on any broken invariant.
void validate_sample(const SyntheticSample& sample);

// Certainty mass on the sample's own label.
inline double label_certainty(const SyntheticSample& s) {
  return s.hard_label == 1 ? s.certainty : 1.0 - s.certainty;
}

struct LabeledExample {
  std::string evidence_id;
  std::string evidence;
  std::string claim;
  int label = 0;
  double certainty = 0.0;
  Origin origin = Origin::kFewshot;
  int generation = 0;
  std::string sample_id;

  bool operator==(const LabeledExample&) const = default;
};

LabeledExample to_labeled_example(const SyntheticSample& sample,
                                  const std::string& evidence_text);

// Reads {"evidence_id","evidence","claim"} lines. Groups per evidence and
// orders evidences by id. Throws IoError or ParseError (with line number).
std::vector<EvidenceTargets> ingest_targets(const std::filesystem::path& path);
std::vector<EvidenceTargets> parse_targets(std::istream& in,
                                           const std::string& source);

// One object per line in fixed key order, sorted by (evidence_id,
// sample_id). Identical input yields identical bytes.
std::string format_dataset(std::vector<LabeledExample> samples);
void emit_dataset(const std::vector<LabeledExample>& samples,
                  const std::filesystem::path& path);

std::vector<LabeledExample> read_dataset(const std::filesystem::path& path);

nlohmann::json sample_to_json(const SyntheticSample& sample);
SyntheticSample sample_from_json(const nlohmann::json& j);

// Writes `contents` to `path` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace autogda

#endif  // AUTOGDA_CORPUS_H_
