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

#include "autogda/simlab.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "autogda/augmenters.h"
#include "autogda/errors.h"
#include "autogda/hashing.h"
#include "autogda/prompts.h"

namespace autogda {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, 3> kLeads = {"Record", "Entry", "Item"};
constexpr std::array<std::string_view, 3> kFactualVerbs = {
    "is confirmed", "is verified", "is documented"};
constexpr std::array<std::string_view, 3> kCiteVerbs = {"cites", "references",
                                                        "mentions"};

bool is_fact_token(std::string_view w) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return c >= '0' && c <= '9';
    });
  };
  if (w.rfind("d_", 0) == 0) return digits(w.substr(2));
  if (w.rfind("f_e", 0) != 0) return false;
  const std::size_t us = w.find('_', 3);
  return us != std::string_view::npos && digits(w.substr(3, us - 3)) &&
         digits(w.substr(us + 1));
}

std::string two_digit(int v, int width) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%0*d", width, v);
  return buf;
}

int label_of(const std::vector<SimSentence>& sentences,
             const std::vector<std::string>& evidence_facts) {
  for (const SimSentence& s : sentences) {
    if (!s.factual()) return 0;
    if (!std::binary_search(evidence_facts.begin(), evidence_facts.end(),
                            s.fact)) {
      return 0;
    }
  }
  return sentences.empty() ? 0 : 1;
}

std::string_view between(std::string_view text, std::string_view open,
                         std::string_view close, std::size_t* from) {
  const std::size_t a = text.find(open, *from);
  if (a == std::string_view::npos) return {};
  const std::size_t b = text.find(close, a + open.size());
  if (b == std::string_view::npos) return {};
  *from = b + close.size();
  return text.substr(a + open.size(), b - a - open.size());
}

// First integer that directly follows an occurrence of `marker`.
int number_after(std::string_view text, std::string_view marker, int fallback) {
  for (std::size_t at = text.find(marker); at != std::string_view::npos;
       at = text.find(marker, at + 1)) {
    int v = 0;
    bool any = false;
    for (std::size_t i = at + marker.size();
         i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      v = v * 10 + (text[i] - '0');
      any = true;
    }
    if (any) return v;
  }
  return fallback;
}

std::string join_sentences(const std::vector<SimSentence>& sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) out.push_back(' ');
    out += render_sentence(sentences[i]);
  }
  return out;
}

}  // namespace

void SimParams::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(name) + " must be in [0, 1]");
    }
  };
  unit(generator_fidelity, "generator_fidelity");
  unit(teacher_noise, "teacher_noise");
  unit(link_teacher_noise, "link_teacher_noise");
  if (!(utility_skill >= 0.0 && utility_jitter >= 0.0 &&
        utility_skill / 2 + utility_jitter < 0.5)) {
    throw ConfigError("utility_skill/2 + utility_jitter must stay below 0.5");
  }
}

std::string render_sentence(const SimSentence& s) {
  std::string out(kLeads.at(s.lead));
  out += ' ';
  out += s.fact;
  out += ' ';
  if (s.factual()) {
    out += kFactualVerbs.at(s.verb);
  } else {
    out += kCiteVerbs.at(s.verb);
    out += ' ';
    out += s.distractor;
  }
  out += '.';
  return out;
}

std::string SimClaim::text() const { return join_sentences(sentences); }

std::vector<std::string> SimClaim::tokens() const {
  std::vector<std::string> out;
  for (const SimSentence& s : sentences) {
    out.push_back(s.fact);
    if (!s.factual()) out.push_back(s.distractor);
  }
  return out;
}

std::vector<SimSentence> parse_sim_claim(std::string_view text) {
  std::vector<SimSentence> out;
  for (const std::string& sentence : split_sentences(text)) {
    std::istringstream in(sentence);
    std::vector<std::string> w;
    for (std::string t; in >> t;) w.push_back(t);
    auto fail = [&] {
      throw ParseError("not a simulator sentence: \"" + sentence + "\"");
    };
    if (w.size() != 4 || w[3].empty() || w[3].back() != '.') fail();
    w[3].pop_back();
    SimSentence s;
    const auto lead = std::find(kLeads.begin(), kLeads.end(), w[0]);
    if (lead == kLeads.end() || !is_fact_token(w[1]) || w[1][0] != 'f') fail();
    s.lead = static_cast<int>(lead - kLeads.begin());
    s.fact = w[1];
    const std::string two = w[2] + " " + w[3];
    const auto fv = std::find(kFactualVerbs.begin(), kFactualVerbs.end(), two);
    const auto cv = std::find(kCiteVerbs.begin(), kCiteVerbs.end(), w[2]);
    if (fv != kFactualVerbs.end()) {
      s.verb = static_cast<int>(fv - kFactualVerbs.begin());
    } else if (cv != kCiteVerbs.end() && is_fact_token(w[3]) && w[3][0] == 'd') {
      s.verb = static_cast<int>(cv - kCiteVerbs.begin());
      s.distractor = w[3];
    } else {
      fail();
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) throw ParseError("empty simulator claim");
  return out;
}

std::set<std::string> fact_tokens(std::string_view text) {
  std::set<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !(std::isalnum(static_cast<unsigned char>(text[i])) ||
                                text[i] == '_')) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                               text[j] == '_')) {
      ++j;
    }
    std::string_view w = text.substr(i, j - i);
    if (is_fact_token(w)) out.emplace(w);
    i = j;
  }
  return out;
}

const SimEvidence& World::evidence(std::string_view evidence_id) const {
  auto it = evidence_index.find(std::string(evidence_id));
  if (it == evidence_index.end()) {
    throw std::out_of_range("unknown simulator evidence " +
                            std::string(evidence_id));
  }
  return evidences[it->second];
}

std::vector<EvidenceTargets> World::targets() const {
  std::vector<EvidenceTargets> out;
  for (const SimEvidence& e : evidences) {
    EvidenceTargets t;
    t.evidence = {e.evidence_id, e.text};
    for (const SimClaim& c : e.targets) {
      std::string text = c.text();
      if (std::find(t.claims.begin(), t.claims.end(), text) == t.claims.end()) {
        t.claims.push_back(std::move(text));
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

long World::universe_index(const std::string& token) const {
  auto it = token_index.find(token);
  return it == token_index.end() ? -1 : static_cast<long>(it->second);
}

namespace {

// Sorted random subset of 2..min(4, F) facts (all of them when F < 2).
std::vector<std::string> pick_facts(const std::vector<std::string>& facts,
                                    Rng& rng) {
  const std::size_t f = facts.size();
  const std::size_t lo = std::min<std::size_t>(2, f);
  const std::size_t hi = std::min<std::size_t>(4, f);
  const std::size_t m = lo + rng.uniform_index(hi - lo + 1);
  std::vector<std::size_t> idx(f);
  for (std::size_t i = 0; i < f; ++i) idx[i] = i;
  for (std::size_t k = 0; k < m; ++k) {
    std::swap(idx[k], idx[k + rng.uniform_index(f - k)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(facts[i]);
  return out;
}

SimSentence make_sentence(const std::string& fact, bool factual,
                          const std::vector<std::string>& distractors,
                          Rng& rng) {
  SimSentence s;
  s.fact = fact;
  if (!factual) s.distractor = distractors[rng.uniform_index(distractors.size())];
  s.lead = static_cast<int>(rng.uniform_index(3));
  s.verb = static_cast<int>(rng.uniform_index(3));
  return s;
}

SimClaim claim_with_label(const std::vector<std::string>& evidence_facts,
                          int label, const std::vector<std::string>& distractors,
                          Rng& rng) {
  SimClaim c;
  for (const std::string& f : pick_facts(evidence_facts, rng)) {
    c.sentences.push_back(make_sentence(f, label == 1, distractors, rng));
  }
  c.true_label = label_of(c.sentences, evidence_facts);
  return c;
}

}  // namespace

World make_world(std::uint64_t seed, int n_evidences, int facts_per_evidence,
                 const SimParams& params) {
  if (n_evidences < 1 || facts_per_evidence < 1) {
    throw std::invalid_argument("make_world: sizes must be positive");
  }
  if (n_evidences > 999 || facts_per_evidence > 99) {
    throw std::invalid_argument("make_world: at most 999 evidences x 99 facts");
  }
  params.validate();
  World w;
  w.seed = seed;
  w.params = params;
  const int n_distractors = std::max(20, 10 * n_evidences);
  for (int d = 0; d < n_distractors; ++d) {
    w.distractors.push_back("d_" + two_digit(d, 4));
  }
  for (int e = 0; e < n_evidences; ++e) {
    SimEvidence ev;
    ev.evidence_id = "e" + two_digit(e, 3);
    for (int f = 0; f < facts_per_evidence; ++f) {
      ev.facts.push_back("f_" + ev.evidence_id + "_" + two_digit(f, 2));
    }
    std::vector<SimSentence> body;
    for (const std::string& f : ev.facts) body.push_back({f, "", 0, 0});
    ev.text = join_sentences(body);
    Rng rng = Rng::substream(seed, {"world-targets", ev.evidence_id});
    for (int k = 0; k < kSimTargetsPerEvidence; ++k) {
      const int label = rng.bernoulli(0.5) ? 0 : 1;
      ev.targets.push_back(claim_with_label(ev.facts, label, w.distractors, rng));
    }
    for (const std::string& f : ev.facts) {
      w.token_index.emplace(f, w.token_index.size());
    }
    w.evidence_index.emplace(ev.evidence_id, w.evidences.size());
    w.evidences.push_back(std::move(ev));
  }
  for (const std::string& d : w.distractors) {
    w.token_index.emplace(d, w.token_index.size());
  }
  return w;
}

SimClaim sim_generate(const World& world, const SimEvidence& evidence,
                      int target_label, double g, Rng& rng) {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw std::invalid_argument("sim_generate: g must be in [0, 1]");
  }
  if (target_label != 0 && target_label != 1) {
    throw std::invalid_argument("sim_generate: label must be 0 or 1");
  }
  const int label = rng.bernoulli(g) ? target_label : 1 - target_label;
  return claim_with_label(evidence.facts, label, world.distractors, rng);
}

double sim_entail(const std::set<std::string>& premise,
                  const std::set<std::string>& hypothesis, double eps,
                  Rng& rng) {
  const bool truth = std::includes(premise.begin(), premise.end(),
                                   hypothesis.begin(), hypothesis.end());
  const double u = rng.uniform01();
  return std::clamp((1.0 - eps) * (truth ? 1.0 : 0.0) + eps * u, 0.0, 1.0);
}

int sim_truth(const World& world, const std::string& evidence_id,
              std::string_view claim) {
  return label_of(parse_sim_claim(claim), world.evidence(evidence_id).facts);
}

SimEvaluation evaluate_dataset(const World& world,
                               const std::vector<LabeledExample>& dataset) {
  SimEvaluation out;
  out.n_samples = dataset.size();
  if (dataset.empty()) return out;
  std::size_t correct = 0;
  double certainty = 0.0;
  for (const LabeledExample& ex : dataset) {
    if (sim_truth(world, ex.evidence_id, ex.claim) == ex.label) ++correct;
    certainty += ex.certainty;
    ++out.origin_counts[std::string(origin_name(ex.origin))];
  }
  out.label_accuracy =
      static_cast<double>(correct) / static_cast<double>(dataset.size());
  out.mean_certainty = certainty / static_cast<double>(dataset.size());
  return out;
}

json SimTransport::post(Endpoint endpoint, const json& body) {
  Rng rng(sha256_u64(std::string("sim:") + std::string(endpoint_name(endpoint)) +
                     ":" + canonical_json(body)));
  const SimParams& p = world_.params;
  switch (endpoint) {
    case Endpoint::kComplete:
      return complete(body, rng);
    case Endpoint::kEntail:
    case Endpoint::kEntailLink: {
      const double eps = endpoint == Endpoint::kEntail ? p.teacher_noise
                                                       : p.link_teacher_noise;
      const double prob =
          sim_entail(fact_tokens(body.at("premise").get<std::string>()),
                     fact_tokens(body.at("hypothesis").get<std::string>()), eps,
                     rng);
      return {{"probability", prob}};
    }
    case Endpoint::kUtility: {
      const auto premise = fact_tokens(body.at("evidence").get<std::string>());
      const auto claim = body.at("claim").get<std::string>();
      const auto hyp = fact_tokens(claim);
      // Entailed iff every token is an evidence fact; distractors never are.
      const bool truth =
          !hyp.empty() && std::includes(premise.begin(), premise.end(),
                                        hyp.begin(), hyp.end());
      const double p1 = 0.5 + p.utility_skill * ((truth ? 1.0 : 0.0) - 0.5) +
                        p.utility_jitter * (2.0 * rng.uniform01() - 1.0);
      const int label = body.at("label").get<int>();
      const double pl = std::max(label == 1 ? p1 : 1.0 - p1, 1e-12);
      return {{"cross_entropy", -std::log(pl)}};
    }
    case Endpoint::kEmbed:
      return embed(body);
    case Endpoint::kParaphrase:
      return paraphrase(body, rng);
  }
  throw ProtocolError("unknown endpoint");
}

json SimTransport::complete(const json& body, Rng& rng) {
  const std::string prompt = body.at("prompt").get<std::string>();
  const int n = std::max(1, body.value("n", 1));
  json completions = json::array();
  for (int i = 0; i < n; ++i) {
    if (prompt.find("fill in the gaps") != std::string::npos) {
      completions.push_back(rephrase_batch(prompt, rng));
    } else {
      completions.push_back(generate_batch(prompt, rng));
    }
  }
  return {{"completions", completions}};
}

std::string SimTransport::generate_batch(std::string_view prompt, Rng& rng) {
  // The instructions mention the tags before the actual document.
  std::set<std::string> tokens;
  for (std::size_t from = 0; tokens.empty();) {
    const std::string_view doc =
        between(prompt, "<document>", "</document>", &from);
    if (doc.empty()) break;
    tokens = fact_tokens(doc);
  }
  std::vector<std::string> facts(tokens.begin(), tokens.end());
  if (facts.empty()) return "I cannot summarize this document.";
  const int label =
      prompt.find("non-factual information") != std::string_view::npos ? 0 : 1;
  const int n = std::clamp(number_after(prompt, "generate ", 1), 1, 64);
  const double g = world_.params.generator_fidelity;

  std::string out;
  std::set<std::string> seen;
  for (int k = 0; k < n; ++k) {
    SimClaim c;
    for (int attempt = 0; attempt < 16; ++attempt) {
      const int actual = rng.bernoulli(g) ? label : 1 - label;
      c = claim_with_label(facts, actual, world_.distractors, rng);
      if (!seen.count(c.text())) break;
    }
    seen.insert(c.text());
    out += "<summary " + std::to_string(k) + ">" + c.text() + "</summary " +
           std::to_string(k) + ">\n";
  }
  return out;
}

std::string SimTransport::rephrase_batch(std::string_view prompt, Rng& rng) {
  std::size_t from = 0;
  const std::string original(between(prompt, "<document>", "</document>", &from));
  const std::string masked(between(prompt, "<document>", "</document>", &from));
  const int n = std::clamp(number_after(prompt, "You will generate ", 1), 1, 64);
  const double g = world_.params.generator_fidelity;

  std::vector<SimSentence> sentences;
  try {
    sentences = parse_sim_claim(original);
  } catch (const ParseError&) {
    sentences.clear();
  }
  std::istringstream mw(masked);
  std::vector<std::string> masked_words;
  for (std::string t; mw >> t;) masked_words.push_back(t);

  // Which sentences the gap touches; every sentence is four words long.
  std::vector<bool> touched(sentences.size(), false);
  const bool aligned = !sentences.empty() && masked_words.size() == 4 * sentences.size();
  if (aligned) {
    for (std::size_t i = 0; i < masked_words.size(); ++i) {
      if (masked_words[i] == "_") touched[i / 4] = true;
    }
  }

  std::string out;
  for (int k = 0; k < n; ++k) {
    std::string text = original;
    if (aligned) {
      std::vector<SimSentence> child = sentences;
      for (std::size_t s = 0; s < child.size(); ++s) {
        if (!touched[s]) continue;
        SimSentence& sent = child[s];
        if (rng.bernoulli(g)) {
          sent.lead = static_cast<int>(rng.uniform_index(3));
          sent.verb = static_cast<int>(rng.uniform_index(3));
        } else if (sent.factual()) {
          sent.distractor =
              world_.distractors[rng.uniform_index(world_.distractors.size())];
        } else {
          sent.distractor.clear();
        }
      }
      text = join_sentences(child);
    }
    out += "<answer " + std::to_string(k) + ">" + text + "</answer " +
           std::to_string(k) + ">\n";
  }
  return out;
}

json SimTransport::paraphrase(const json& body, Rng& rng) {
  const std::string text = body.at("text").get<std::string>();
  const int n = std::clamp(body.value("n", 1), 1, 64);
  const double g = world_.params.generator_fidelity;
  json texts = json::array();
  std::vector<SimSentence> sentences;
  try {
    sentences = parse_sim_claim(text);
  } catch (const ParseError&) {
    for (int k = 0; k < n; ++k) texts.push_back(text);
    return {{"texts", texts}};
  }
  const std::size_t s = sentences.size();
  for (int k = 0; k < n; ++k) {
    std::vector<SimSentence> child;
    for (std::size_t i = 0; i < s; ++i) {
      SimSentence sent = sentences[(i + k + 1) % s];
      sent.lead = (sent.lead + k + 1) % 3;
      sent.verb = (sent.verb + k + 1) % 3;
      child.push_back(std::move(sent));
    }
    if (!rng.bernoulli(g)) {
      SimSentence& victim = child[rng.uniform_index(s)];
      if (victim.factual()) {
        victim.distractor =
            world_.distractors[rng.uniform_index(world_.distractors.size())];
      } else {
        victim.distractor.clear();
      }
    }
    texts.push_back(join_sentences(child));
  }
  return {{"texts", texts}};
}

json SimTransport::embed(const json& body) {
  json vectors = json::array();
  const std::size_t dim = world_.universe_size();
  for (const json& t : body.at("texts")) {
    const std::string text = t.get<std::string>();
    std::vector<double> v(dim, 0.0);
    // Tiny per-text jitter keeps distinct texts apart without changing the
    // ranking induced by fact overlap.
    Rng jitter(sha256_u64("sim-embed:" + text));
    for (double& x : v) x = 1e-6 * (2.0 * jitter.uniform01() - 1.0);
    for (const std::string& tok : fact_tokens(text)) {
      const long i = world_.universe_index(tok);
      if (i >= 0) v[static_cast<std::size_t>(i)] += 1.0;
    }
    vectors.push_back(std::move(v));
  }
  return {{"vectors", vectors}};
}

}  // namespace autogda
