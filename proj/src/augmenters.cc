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

#include "autogda/augmenters.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "autogda/certainty.h"
#include "autogda/errors.h"
#include "autogda/prompts.h"

namespace autogda {

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// Length of a closing quote/bracket at text[i], 0 if none.
std::size_t closer_len(std::string_view text, std::size_t i) {
  const char c = text[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  // U+201D and U+2019 in UTF-8.
  if (text.substr(i, 3) == "\xE2\x80\x9D" || text.substr(i, 3) == "\xE2\x80\x99") {
    return 3;
  }
  return 0;
}

bool opens_sentence(std::string_view text, std::size_t i) {
  const char c = text[i];
  if (std::isupper(static_cast<unsigned char>(c)) || c == '"' || c == '\'' ||
      c == '(') {
    return true;
  }
  // U+201C and U+2018.
  return text.substr(i, 3) == "\xE2\x80\x9C" || text.substr(i, 3) == "\xE2\x80\x98";
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string mask_span(std::string_view text, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("mask_span: fraction must be in (0, 1)");
  }
  std::vector<std::string> words = split_words(text);
  if (words.empty()) throw std::invalid_argument("mask_span: empty text");
  const std::size_t n = words.size();
  const auto span = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))),
      1, n);
  const std::size_t start = rng.uniform_index(n - span + 1);
  for (std::size_t i = start; i < start + span; ++i) words[i] = "_";
  return join(words, " ");
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < text.size() && (text[end] == '.' || text[end] == '!' ||
                                 text[end] == '?')) {
      ++end;
    }
    while (end < text.size()) {
      const std::size_t q = closer_len(text, end);
      if (q == 0) break;
      end += q;
    }
    std::size_t next = end;
    while (next < text.size() && is_space(text[next])) ++next;
    const bool at_end = next == text.size();
    if (at_end || (next > end && opens_sentence(text, next))) {
      std::string s = trim(text.substr(begin, end - begin));
      if (!s.empty()) out.push_back(std::move(s));
      begin = next;
      i = next;
      if (at_end) break;
      continue;
    }
    i = end;
  }
  if (begin < text.size()) {
    std::string s = trim(text.substr(begin));
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> drop_sentence(std::string_view claim, Rng& rng,
                                       int max_children) {
  const std::vector<std::string> sentences = split_sentences(claim);
  if (sentences.size() < 2 || max_children <= 0) return {};
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take =
      std::min(order.size(), static_cast<std::size_t>(max_children));
  std::vector<std::string> out;
  for (std::size_t k = 0; k < take; ++k) {
    const std::size_t j = k + rng.uniform_index(order.size() - k);
    std::swap(order[k], order[j]);
    std::vector<std::string> kept;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      if (s != order[k]) kept.push_back(sentences[s]);
    }
    out.push_back(join(kept, " "));
  }
  return out;
}

OperatorOutput partial_rephrase(const SyntheticSample& parent, Rng& rng,
                                Gateway& gateway, const AugmentOptions& opts) {
  OperatorOutput out;
  const int want = opts.counts.partial_rephrase;
  if (want <= 0) return out;
  const int per_mask = std::max(1, opts.answers_per_mask);
  const int n_masks = (want + per_mask - 1) / per_mask;

  std::set<std::string> masks;
  std::vector<std::string> ordered;
  // A short claim may not admit n_masks distinct spans; stop trying after a
  // bounded number of draws.
  for (int attempt = 0; attempt < 8 * n_masks &&
                        static_cast<int>(ordered.size()) < n_masks;
       ++attempt) {
    std::string m = mask_span(parent.claim, opts.mask_fraction, rng);
    if (masks.insert(m).second) ordered.push_back(std::move(m));
  }

  for (const std::string& masked : ordered) {
    const std::string prompt =
        render_rephrase_prompt(parent.claim, masked, per_mask);
    const std::vector<std::string> completions =
        gateway.complete(prompt, 1, opts.temperature);
    try {
      TaggedItems parsed = parse_tagged(completions.front(), "answer", per_mask);
      if (!parsed.missing.empty()) {
        out.warnings.push_back("partial_rephrase: " +
                               std::to_string(parsed.missing.size()) +
                               " malformed answer(s) dropped for " +
                               parent.sample_id);
      }
      for (std::string& c : parsed.items) out.claims.push_back(std::move(c));
    } catch (const ParseError&) {
      out.warnings.push_back("partial_rephrase: no parseable answers for " +
                             parent.sample_id);
    }
  }
  if (static_cast<int>(out.claims.size()) > want) out.claims.resize(want);
  return out;
}

std::vector<std::string> paraphrase(const SyntheticSample& parent,
                                    Gateway& gateway, int n) {
  if (n <= 0) return {};
  std::vector<std::string> texts = gateway.paraphrase(parent.claim, n);
  std::vector<std::string> out;
  for (std::string& t : texts) {
    std::string s = trim(t);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

Offspring augment_population(std::span<const SyntheticSample> parents,
                             std::uint64_t seed, int iteration,
                             Gateway& gateway, const AugmentOptions& opts) {
  Offspring out;
  const std::string iter = std::to_string(iteration);
  for (const SyntheticSample& parent : parents) {
    Rng rng = Rng::substream(seed, {parent.evidence_id, iter, parent.sample_id});
    std::vector<std::pair<std::string, Origin>> proposals;

    try {
      OperatorOutput pr = partial_rephrase(parent, rng, gateway, opts);
      for (auto& w : pr.warnings) out.warnings.push_back(std::move(w));
      for (auto& c : pr.claims) {
        proposals.emplace_back(std::move(c), Origin::kPartialRephrase);
      }
    } catch (const std::exception& e) {
      out.warnings.push_back("partial_rephrase failed for " + parent.sample_id +
                             ": " + e.what());
    }
    try {
      for (auto& c : paraphrase(parent, gateway, opts.counts.paraphrase)) {
        proposals.emplace_back(std::move(c), Origin::kParaphrase);
      }
    } catch (const std::exception& e) {
      out.warnings.push_back("paraphrase failed for " + parent.sample_id +
                             ": " + e.what());
    }
    for (auto& c : drop_sentence(parent.claim, rng, opts.counts.drop_sentence)) {
      proposals.emplace_back(std::move(c), Origin::kDropSentence);
    }

    for (auto& [claim, origin] : proposals) {
      if (claim.empty()) continue;
      try {
        const double t = gateway.entail_link(parent.claim, claim);
        out.children.push_back(make_child_sample(
            parent, std::move(claim), origin,
            update_certainty(parent.certainty, t)));
      } catch (const std::exception& e) {
        out.warnings.push_back("link scoring failed for child of " +
                               parent.sample_id + ": " + e.what());
      }
    }
  }
  return out;
}

}  // namespace autogda
