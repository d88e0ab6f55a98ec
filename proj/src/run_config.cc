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

#include "autogda/run_config.h"

#include <cstdlib>
#include <set>

#include "autogda/corpus.h"
#include "autogda/errors.h"

namespace autogda {

using json = nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad type for \"") + key + "\"");
  }
}

}  // namespace

std::string_view selection_name(SelectionStrategy s) {
  return s == SelectionStrategy::kRandom ? "random" : "objective";
}

void RunConfig::validate() const {
  if (samples_per_evidence < 1) throw ConfigError("samples_per_evidence must be >= 1");
  if (offspring.partial_rephrase < 0 || offspring.paraphrase < 0 ||
      offspring.drop_sentence < 0 || offspring.total() < 1) {
    throw ConfigError("offspring counts must be >= 0 with a positive sum");
  }
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (!(convergence_epsilon >= 0.0)) throw ConfigError("convergence_epsilon must be >= 0");
  if (!(weights.lambda_d >= 0.0) || !(weights.lambda_u >= 0.0)) {
    throw ConfigError("lambda_d and lambda_u must be >= 0");
  }
  if (!(weights.utility_cap > 0.0)) throw ConfigError("utility_cap must be > 0");
  if (!(label_prior >= 0.0 && label_prior <= 1.0)) {
    throw ConfigError("label_prior must be in [0, 1]");
  }
  if (fewshot_cap < 1) throw ConfigError("fewshot_cap must be >= 1");
  if (!(mask_fraction > 0.0 && mask_fraction < 1.0)) {
    throw ConfigError("mask_fraction must be in (0, 1)");
  }
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (backend == "http") {
    endpoints.validate();
  } else if (backend == "sim") {
    sim.params.validate();
    if (sim.n_evidences < 1 || sim.facts_per_evidence < 1) {
      throw ConfigError("sim sizes must be positive");
    }
  } else {
    throw ConfigError("backend must be \"http\" or \"sim\"");
  }
}

AugmentOptions RunConfig::augment_options() const {
  AugmentOptions o;
  o.counts = offspring;
  o.mask_fraction = mask_fraction;
  o.temperature = temperature;
  return o;
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"samples_per_evidence", "offspring", "max_iterations",
                  "convergence_epsilon", "lambda_d", "lambda_u", "utility_cap",
                  "label_prior", "fewshot_cap", "seed", "selection",
                  "mask_fraction", "temperature", "workers", "endpoints",
                  "backend", "sim", "cache_dir", "checkpoint_dir"},
                 "config");
  RunConfig c;
  read(j, "samples_per_evidence", c.samples_per_evidence);
  read(j, "max_iterations", c.max_iterations);
  read(j, "convergence_epsilon", c.convergence_epsilon);
  read(j, "lambda_d", c.weights.lambda_d);
  read(j, "lambda_u", c.weights.lambda_u);
  read(j, "utility_cap", c.weights.utility_cap);
  read(j, "label_prior", c.label_prior);
  read(j, "fewshot_cap", c.fewshot_cap);
  read(j, "seed", c.seed);
  read(j, "mask_fraction", c.mask_fraction);
  read(j, "temperature", c.temperature);
  read(j, "workers", c.workers);
  read(j, "backend", c.backend);
  read(j, "cache_dir", c.cache_dir);
  read(j, "checkpoint_dir", c.checkpoint_dir);
  if (j.contains("selection")) {
    std::string s;
    read(j, "selection", s);
    if (s == "objective") {
      c.selection = SelectionStrategy::kObjective;
    } else if (s == "random") {
      c.selection = SelectionStrategy::kRandom;
    } else {
      throw ConfigError("selection must be \"objective\" or \"random\"");
    }
  }
  if (auto it = j.find("offspring"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("offspring must be an object");
    reject_unknown(*it, {"partial_rephrase", "paraphrase", "drop_sentence"},
                   "offspring");
    read(*it, "partial_rephrase", c.offspring.partial_rephrase);
    read(*it, "paraphrase", c.offspring.paraphrase);
    read(*it, "drop_sentence", c.offspring.drop_sentence);
  }
  if (auto it = j.find("endpoints"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("endpoints must be an object");
    reject_unknown(*it,
                   {"complete", "entail", "entail_link", "utility", "embed",
                    "paraphrase", "timeout_seconds", "max_in_flight", "retries"},
                   "endpoints");
    ServiceEndpoints& e = c.endpoints;
    read(*it, "complete", e.complete);
    read(*it, "entail", e.entail);
    read(*it, "entail_link", e.entail_link);
    read(*it, "utility", e.utility);
    read(*it, "embed", e.embed);
    read(*it, "paraphrase", e.paraphrase);
    read(*it, "timeout_seconds", e.timeout_seconds);
    read(*it, "max_in_flight", e.max_in_flight);
    read(*it, "retries", e.retries);
  }
  if (auto it = j.find("sim"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("sim must be an object");
    reject_unknown(*it,
                   {"seed", "n_evidences", "facts_per_evidence",
                    "generator_fidelity", "teacher_noise", "link_teacher_noise",
                    "utility_skill", "utility_jitter"},
                   "sim");
    SimBackend& s = c.sim;
    read(*it, "seed", s.seed);
    read(*it, "n_evidences", s.n_evidences);
    read(*it, "facts_per_evidence", s.facts_per_evidence);
    read(*it, "generator_fidelity", s.params.generator_fidelity);
    read(*it, "teacher_noise", s.params.teacher_noise);
    s.params.link_teacher_noise = s.params.teacher_noise;
    read(*it, "link_teacher_noise", s.params.link_teacher_noise);
    read(*it, "utility_skill", s.params.utility_skill);
    read(*it, "utility_jitter", s.params.utility_jitter);
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

json run_config_to_json(const RunConfig& c) {
  json j;
  j["samples_per_evidence"] = c.samples_per_evidence;
  j["offspring"] = {{"partial_rephrase", c.offspring.partial_rephrase},
                    {"paraphrase", c.offspring.paraphrase},
                    {"drop_sentence", c.offspring.drop_sentence}};
  j["max_iterations"] = c.max_iterations;
  j["convergence_epsilon"] = c.convergence_epsilon;
  j["lambda_d"] = c.weights.lambda_d;
  j["lambda_u"] = c.weights.lambda_u;
  j["utility_cap"] = c.weights.utility_cap;
  j["label_prior"] = c.label_prior;
  j["fewshot_cap"] = c.fewshot_cap;
  j["seed"] = c.seed;
  j["selection"] = std::string(selection_name(c.selection));
  j["mask_fraction"] = c.mask_fraction;
  j["temperature"] = c.temperature;
  j["workers"] = c.workers;
  j["backend"] = c.backend;
  const ServiceEndpoints& e = c.endpoints;
  j["endpoints"] = {{"complete", e.complete},       {"entail", e.entail},
                    {"entail_link", e.entail_link}, {"utility", e.utility},
                    {"embed", e.embed},             {"paraphrase", e.paraphrase},
                    {"timeout_seconds", e.timeout_seconds},
                    {"max_in_flight", e.max_in_flight},
                    {"retries", e.retries}};
  const SimBackend& s = c.sim;
  j["sim"] = {{"seed", s.seed},
              {"n_evidences", s.n_evidences},
              {"facts_per_evidence", s.facts_per_evidence},
              {"generator_fidelity", s.params.generator_fidelity},
              {"teacher_noise", s.params.teacher_noise},
              {"link_teacher_noise", s.params.link_teacher_noise},
              {"utility_skill", s.params.utility_skill},
              {"utility_jitter", s.params.utility_jitter}};
  j["cache_dir"] = c.cache_dir;
  j["checkpoint_dir"] = c.checkpoint_dir;
  return j;
}

void apply_env_fallbacks(RunConfig& c) {
  auto fill = [](std::string& field, const char* var) {
    if (!field.empty()) return;
    if (const char* v = std::getenv(var); v != nullptr && *v != '\0') field = v;
  };
  fill(c.cache_dir, "AUTOGDA_CACHE_DIR");
  fill(c.endpoints.complete, "AUTOGDA_ENDPOINT_COMPLETE");
  fill(c.endpoints.entail, "AUTOGDA_ENDPOINT_ENTAIL");
  fill(c.endpoints.entail_link, "AUTOGDA_ENDPOINT_ENTAIL_LINK");
  fill(c.endpoints.utility, "AUTOGDA_ENDPOINT_UTILITY");
  fill(c.endpoints.embed, "AUTOGDA_ENDPOINT_EMBED");
  fill(c.endpoints.paraphrase, "AUTOGDA_ENDPOINT_PARAPHRASE");
}

}  // namespace autogda
