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

#include "autogda/corpus.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "autogda/errors.h"
#include "autogda/hashing.h"

namespace autogda {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string required_string(const json& obj, const char* key,
                            const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  if (!it->is_string()) {
    throw ParseError(where + ": field \"" + key + "\" must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view origin_name(Origin origin) {
  switch (origin) {
    case Origin::kFewshot:
      return "fewshot";
    case Origin::kPartialRephrase:
      return "partial_rephrase";
    case Origin::kParaphrase:
      return "paraphrase";
    case Origin::kDropSentence:
      return "drop_sentence";
  }
  return "fewshot";
}

Origin parse_origin(std::string_view name) {
  if (name == "fewshot") return Origin::kFewshot;
  if (name == "partial_rephrase") return Origin::kPartialRephrase;
  if (name == "paraphrase") return Origin::kParaphrase;
  if (name == "drop_sentence") return Origin::kDropSentence;
  throw std::invalid_argument("unknown origin: " + std::string(name));
}

std::string make_sample_id(std::string_view evidence_id, std::string_view claim,
                           int hard_label) {
  std::string msg;
  msg.reserve(evidence_id.size() + claim.size() + 4);
  msg.append(evidence_id);
  msg.push_back('\x1f');
  msg.append(claim);
  msg.push_back('\x1f');
  msg.append(std::to_string(hard_label));
  return sha256_hex(msg).substr(0, 16);
}

SyntheticSample make_fewshot_sample(const std::string& evidence_id,
                                    std::string claim, int hard_label,
                                    double certainty) {
  SyntheticSample s;
  s.sample_id = make_sample_id(evidence_id, claim, hard_label);
  s.evidence_id = evidence_id;
  s.claim = std::move(claim);
  s.hard_label = hard_label;
  s.certainty = certainty;
  s.generation = 0;
  s.origin = Origin::kFewshot;
  return s;
}

SyntheticSample make_child_sample(const SyntheticSample& parent,
                                  std::string claim, Origin origin,
                                  double certainty) {
  SyntheticSample s;
  s.sample_id = make_sample_id(parent.evidence_id, claim, parent.hard_label);
  s.evidence_id = parent.evidence_id;
  s.claim = std::move(claim);
  s.hard_label = parent.hard_label;
  s.certainty = certainty;
  s.generation = parent.generation + 1;
  s.parent_id = parent.sample_id;
  s.origin = origin;
  return s;
}

void validate_sample(const SyntheticSample& s) {
  const auto fail = [&](const std::string& why) {
    throw std::invalid_argument("sample " + s.sample_id + ": " + why);
  };
  if (s.evidence_id.empty()) fail("empty evidence_id");
  if (trim(s.claim).empty()) fail("empty claim");
  if (s.hard_label != 0 && s.hard_label != 1) fail("hard_label not 0/1");
  if (!(s.certainty >= 0.0 && s.certainty <= 1.0)) fail("certainty not in [0,1]");
  if (s.generation < 0) fail("negative generation");
  const bool root = s.generation == 0;
  if (root != (s.origin == Origin::kFewshot) ||
      root != !s.parent_id.has_value()) {
    fail("generation/origin/parent_id disagree");
  }
  if (s.utility && !(*s.utility >= 0.0)) fail("negative utility");
  if (s.sample_id != make_sample_id(s.evidence_id, s.claim, s.hard_label)) {
    fail("sample_id does not match content");
  }
}

LabeledExample to_labeled_example(const SyntheticSample& sample,
                                  const std::string& evidence_text) {
  return LabeledExample{sample.evidence_id, evidence_text,    sample.claim,
                        sample.hard_label,  sample.certainty, sample.origin,
                        sample.generation,  sample.sample_id};
}

std::vector<EvidenceTargets> parse_targets(std::istream& in,
                                           const std::string& source) {
  std::map<std::string, EvidenceTargets> groups;
  std::string line;
  std::size_t line_no = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw ParseError(where + ": expected a JSON object");
    std::string evidence_id = required_string(obj, "evidence_id", where);
    std::string evidence = required_string(obj, "evidence", where);
    std::string claim = required_string(obj, "claim", where);
    if (trim(evidence_id).empty()) throw ParseError(where + ": empty evidence_id");
    if (trim(evidence).empty()) throw ParseError(where + ": empty evidence text");
    if (trim(claim).empty()) throw ParseError(where + ": empty claim");

    auto [it, inserted] = groups.try_emplace(evidence_id);
    EvidenceTargets& group = it->second;
    if (inserted) {
      group.evidence = Evidence{evidence_id, std::move(evidence)};
    } else if (group.evidence.text != evidence) {
      throw ParseError(where + ": conflicting evidence text for evidence_id " +
                       evidence_id);
    }
    if (std::find(group.claims.begin(), group.claims.end(), claim) ==
        group.claims.end()) {
      group.claims.push_back(std::move(claim));
    }
    ++records;
  }
  if (in.bad()) throw IoError(source + ": read failed");
  if (records == 0) throw ParseError(source + ": no target examples");

  std::vector<EvidenceTargets> out;
  out.reserve(groups.size());
  for (auto& [id, group] : groups) {
    if (group.claims.empty()) {
      throw ParseError(source + ": evidence " + id + " has no claims");
    }
    out.push_back(std::move(group));
  }
  return out;
}

std::vector<EvidenceTargets> ingest_targets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open targets file " + path.string());
  return parse_targets(in, path.string());
}

std::string format_dataset(std::vector<LabeledExample> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const LabeledExample& a, const LabeledExample& b) {
              if (a.evidence_id != b.evidence_id) {
                return a.evidence_id < b.evidence_id;
              }
              return a.sample_id < b.sample_id;
            });
  std::string out;
  for (const LabeledExample& s : samples) {
    ordered_json j;
    j["evidence_id"] = s.evidence_id;
    j["evidence"] = s.evidence;
    j["claim"] = s.claim;
    j["label"] = s.label;
    j["certainty"] = s.certainty;
    j["origin"] = std::string(origin_name(s.origin));
    j["generation"] = s.generation;
    j["sample_id"] = s.sample_id;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void emit_dataset(const std::vector<LabeledExample>& samples,
                  const std::filesystem::path& path) {
  write_file_atomic(path, format_dataset(samples));
}

std::vector<LabeledExample> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  std::vector<LabeledExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      const json j = json::parse(line);
      LabeledExample s;
      s.evidence_id = j.at("evidence_id").get<std::string>();
      s.evidence = j.at("evidence").get<std::string>();
      s.claim = j.at("claim").get<std::string>();
      s.label = j.at("label").get<int>();
      s.certainty = j.at("certainty").get<double>();
      s.origin = parse_origin(j.at("origin").get<std::string>());
      s.generation = j.at("generation").get<int>();
      s.sample_id = j.at("sample_id").get<std::string>();
      if (s.label != 0 && s.label != 1) throw ParseError("label not 0/1");
      out.push_back(std::move(s));
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const std::exception& e) {
      throw ParseError(where + ": invalid dataset record (" + e.what() + ")");
    }
  }
  return out;
}

nlohmann::json sample_to_json(const SyntheticSample& s) {
  ordered_json j;
  j["sample_id"] = s.sample_id;
  j["evidence_id"] = s.evidence_id;
  j["claim"] = s.claim;
  j["hard_label"] = s.hard_label;
  j["certainty"] = s.certainty;
  j["generation"] = s.generation;
  j["parent_id"] = s.parent_id ? json(*s.parent_id) : json(nullptr);
  j["origin"] = std::string(origin_name(s.origin));
  j["utility"] = s.utility ? json(*s.utility) : json(nullptr);
  j["embedding_key"] =
      s.embedding_key ? json(*s.embedding_key) : json(nullptr);
  return json::parse(j.dump());
}

SyntheticSample sample_from_json(const nlohmann::json& j) {
  SyntheticSample s;
  s.sample_id = j.at("sample_id").get<std::string>();
  s.evidence_id = j.at("evidence_id").get<std::string>();
  s.claim = j.at("claim").get<std::string>();
  s.hard_label = j.at("hard_label").get<int>();
  s.certainty = j.at("certainty").get<double>();
  s.generation = j.at("generation").get<int>();
  if (!j.at("parent_id").is_null()) s.parent_id = j["parent_id"].get<std::string>();
  s.origin = parse_origin(j.at("origin").get<std::string>());
  if (!j.at("utility").is_null()) s.utility = j["utility"].get<double>();
  if (j.contains("embedding_key") && !j["embedding_key"].is_null()) {
    s.embedding_key = j["embedding_key"].get<std::string>();
  }
  return s;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  static std::atomic<std::uint64_t> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename into " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace autogda
