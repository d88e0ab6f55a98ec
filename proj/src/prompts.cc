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

#include "autogda/prompts.h"

#include <algorithm>
#include <stdexcept>

#include "autogda/errors.h"

namespace autogda {
namespace {

constexpr std::string_view kDocumentIntro =
    "Human: You are given the following document wrapped in <document> "
    "</document> tags:\n";

constexpr std::string_view kExamplesIntro =
    "Your task is to generate summaries from a document. Here are some "
    "examples of how the summaries could look like:\n"
    "Note however that some of the samples contain incorrect information "
    "that is not part of the document!\n"
    "Here are the examples:\n";

constexpr std::string_view kSummaryTags =
    "The summaries must be wrapped in <summary #></summary #> tags, where # "
    "is replaced with the summary id.\n\nAssistant:";

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string render_initial_prompt(std::string_view document,
                                  std::span<const std::string> examples, int n,
                                  int target_label) {
  if (n < 1) throw std::invalid_argument("render_initial_prompt: n must be >= 1");
  if (examples.empty()) {
    throw std::invalid_argument("render_initial_prompt: no example claims");
  }
  if (target_label != 0 && target_label != 1) {
    throw std::invalid_argument("render_initial_prompt: label must be 0 or 1");
  }
  const std::string count = std::to_string(n);
  const std::string last = std::to_string(n - 1);

  std::string p;
  p += kDocumentIntro;
  p += "<document>";
  p += document;
  p += "</document>\n";
  p += kExamplesIntro;
  const std::size_t shown = std::min(examples.size(), kMaxFewshotExamples);
  for (std::size_t i = 0; i < shown; ++i) {
    const std::string idx = std::to_string(i);
    p += "<example " + idx + ">" + examples[i] + "</example " + idx + ">\n";
  }
  if (target_label == 1) {
    p += "Now your task is to generate " + count +
         " summaries from the document. However, unlike some of the examples "
         "given above, the summaries must be entirely supported by the "
         "document. Only include information that is directly inferrable "
         "from the document. It is also important that the summaries reflect "
         "the style, length and wording of examples.\n"
         "If there are common patterns or sentence structures in the examples "
         "summaries, the created summaries should reflect those. Each summary "
         "is identified with an integer from 0 to " +
         last + ".\n";
  } else {
    p += "Your task is to generate " + count +
         " summaries from the document. However, now all of the summaries "
         "must contain at least one piece of non-factual information. This "
         "can be some information that is not present in the document or "
         "some information that is contradictory to the information in the "
         "document, but intuitively appears to make sense.\n"
         "Otherwise they reflect the style, length and wording of examples. "
         "If there are common patterns or sentence structures in the examples "
         "summaries, the created summaries should reflect those.\n"
         "Modify different pieces of information at different places in the "
         "document.\n"
         "Each summary is identified with an integer from 0 to " +
         last + ".\n";
  }
  p += kSummaryTags;
  return p;
}

std::string render_rephrase_prompt(std::string_view original,
                                   std::string_view masked, int n) {
  if (n < 1) throw std::invalid_argument("render_rephrase_prompt: n must be >= 1");
  std::string p =
      "Your task is to fill in the gaps in a document indicated with \"_\" "
      "with additional details.\n"
      "If there is no gaps, please output the input text. The number of \"_\" "
      "indicates the approximate number of words that should be filled into "
      "each gap. While slight deviations (e.g., one word more or less) are "
      "permissible, the filled in text should respect the length indicated "
      "through the number of \"_\". **Do not change the text outside the gaps "
      "and do not include gaps in the final output.**\n";
  p += "You will generate " + std::to_string(n) +
       " different completions of the document. Each completed document is "
       "identified with an integer from 0 to " +
       std::to_string(n - 1) + ".\n";
  p += "The document with the blanks filled must be wrapped in <answer #>"
       "</answer #> tags, where # is replaced with the id of the filled-in "
       "document. You will now see the original document, but you will have "
       "to generate different versions that preserve the meaning by filling "
       "the gaps.\n"
       "Here is the original:\n<document>";
  p += original;
  p += "</document>\nThe document including the gaps is:\n<document>";
  p += masked;
  p += "</document>\n\nAssistant:";
  return p;
}

std::string render_entailment_prompt(std::string_view document,
                                     std::string_view claim) {
  std::string p =
      "Determine whether the provided claim is consistent with the "
      "corresponding document. Consistency in this context implies that all "
      "information presented in the claim is substantiated by the document. "
      "If not, it should be considered inconsistent.\nDocument: ";
  p += document;
  p += "\nClaim: ";
  p += claim;
  p += "\nPlease assess the claim’s consistency with the document by "
       "responding with either \"1\" (consistent) or \"0\" (inconsistent). Do "
       "not output anything else.\nAnswer: ";
  return p;
}

TaggedItems parse_tagged(std::string_view text, std::string_view tag, int n) {
  TaggedItems out;
  for (int k = 0; k < n; ++k) {
    const std::string idx = std::to_string(k);
    const std::string open = "<" + std::string(tag) + " " + idx + ">";
    const std::string close = "</" + std::string(tag) + " " + idx + ">";
    const std::size_t start = text.find(open);
    if (start == std::string_view::npos) {
      out.missing.push_back(k);
      continue;
    }
    const std::size_t body = start + open.size();
    const std::size_t end = text.find(close, body);
    if (end == std::string_view::npos) {
      out.missing.push_back(k);
      continue;
    }
    const std::string_view content = trim(text.substr(body, end - body));
    if (content.empty()) {
      out.missing.push_back(k);
      continue;
    }
    out.items.emplace_back(content);
  }
  if (out.items.empty()) {
    throw ParseError("no <" + std::string(tag) + " #> items in model output");
  }
  return out;
}

}  // namespace autogda
