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

#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include <gtest/gtest.h>

#include "autogda/errors.h"

namespace autogda {
namespace {

using json = nlohmann::json;

int count_words(const std::string& s, const std::string& word) {
  std::istringstream in(s);
  int n = 0;
  for (std::string w; in >> w;) n += w == word;
  return n;
}

TEST(MaskSpan, ExamplesFromTheContract) {
  Rng rng(1);
  const std::string ten = "one two three four five six seven eight nine ten";
  const std::string masked = mask_span(ten, 0.2, rng);
  EXPECT_EQ(count_words(masked, "_"), 2);
  EXPECT_NE(masked.find("_ _"), std::string::npos);
  EXPECT_EQ(mask_span("single", 0.2, rng), "_");
  Rng a(9), b(9);
  EXPECT_EQ(mask_span(ten, 0.2, a), mask_span(ten, 0.2, b));
  EXPECT_THROW(mask_span("   ", 0.2, rng), std::invalid_argument);
  EXPECT_THROW(mask_span(ten, 1.0, rng), std::invalid_argument);
}

TEST(MaskSpan, StartIsUniformOverValidPositions) {
  const std::string ten = "w0 w1 w2 w3 w4 w5 w6 w7 w8 w9";
  Rng rng(4);
  std::vector<int> hits(10, 0);
  for (int i = 0; i < 9000; ++i) {
    std::istringstream in(mask_span(ten, 0.2, rng));
    std::string w;
    for (int pos = 0; in >> w; ++pos) {
      if (w == "_") {
        ++hits[pos];
        break;
      }
    }
  }
  EXPECT_EQ(hits[9], 0);
  for (int p = 0; p < 9; ++p) EXPECT_NEAR(hits[p], 1000, 150) << p;
}

TEST(SplitSentences, Rules) {
  EXPECT_EQ(split_sentences("A. B. C."), (std::vector<std::string>{"A.", "B.", "C."}));
  EXPECT_EQ(split_sentences("He said \"Stop.\" Then left."),
            (std::vector<std::string>{"He said \"Stop.\"", "Then left."}));
  EXPECT_EQ(split_sentences("Pi is 3.14 today. ok? Yes!"),
            (std::vector<std::string>{"Pi is 3.14 today. ok?", "Yes!"}));
  EXPECT_EQ(split_sentences("Wait... Really?! \"Quoted\" start."),
            (std::vector<std::string>{"Wait...", "Really?!", "\"Quoted\" start."}));
  EXPECT_EQ(split_sentences("No terminal punctuation"),
            (std::vector<std::string>{"No terminal punctuation"}));
  EXPECT_TRUE(split_sentences("  ").empty());
}

TEST(DropSentence, Enumeration) {
  Rng rng(2);
  EXPECT_TRUE(drop_sentence("Only one sentence.", rng).empty());
  const auto kids = drop_sentence("A. B. C.", rng);
  EXPECT_EQ(std::set<std::string>(kids.begin(), kids.end()),
            (std::set<std::string>{"B. C.", "A. C.", "A. B."}));
  const auto two = drop_sentence("A. B.", rng);
  EXPECT_EQ(std::set<std::string>(two.begin(), two.end()),
            (std::set<std::string>{"A.", "B."}));
  const auto five = drop_sentence("A. B. C. D. E.", rng);
  EXPECT_EQ(five.size(), 3u);
  EXPECT_EQ(std::set<std::string>(five.begin(), five.end()).size(), 3u);
}

// Echoes the masked claim with every gap filled by "X", three times.
json echo_filler(Endpoint e, const json& body) {
  if (e == Endpoint::kComplete) {
    const std::string prompt = body["prompt"];
    const std::string open = "<document>";
    std::size_t a = prompt.find(open);
    a = prompt.find(open, a + 1) + open.size();
    std::string masked = prompt.substr(a, prompt.find("</document>", a) - a);
    masked = std::regex_replace(masked, std::regex("_"), "X");
    std::string out;
    for (int k = 0; k < 3; ++k) {
      out += "<answer " + std::to_string(k) + ">" + masked + "</answer " +
             std::to_string(k) + ">";
    }
    return {{"completions", {out}}};
  }
  if (e == Endpoint::kParaphrase) {
    // Word-order rotation.
    std::istringstream in(body["text"].get<std::string>());
    std::vector<std::string> w;
    for (std::string t; in >> t;) w.push_back(t);
    json texts = json::array();
    for (int k = 1; k <= body["n"].get<int>(); ++k) {
      std::string s;
      for (std::size_t i = 0; i < w.size(); ++i) {
        s += (i ? " " : "") + w[(i + k) % w.size()];
      }
      texts.push_back(s);
    }
    return {{"texts", texts}};
  }
  return {{"probability", 0.9}};
}

TEST(PartialRephrase, SixChildrenFromTwoMasks) {
  Gateway g(std::make_shared<FunctionTransport>(echo_filler));
  const SyntheticSample parent = make_fewshot_sample(
      "e", "The council approved the budget on Monday after a long debate.", 1, 1.0);
  Rng rng(5);
  const OperatorOutput out = partial_rephrase(parent, rng, g, AugmentOptions{});
  ASSERT_EQ(out.claims.size(), 6u);
  for (const auto& c : out.claims) {
    EXPECT_EQ(c.find('_'), std::string::npos);
    EXPECT_NE(c.find('X'), std::string::npos);
  }
  EXPECT_TRUE(out.warnings.empty());
}

TEST(PartialRephrase, MalformedAnswerDropped) {
  Gateway g(std::make_shared<FunctionTransport>([](Endpoint, const json&) {
    return json{{"completions",
                 {"<answer 0>a</answer 0><answer 1>b</answer 1><answer 2>c"}}};
  }));
  const SyntheticSample parent =
      make_fewshot_sample("e", "one two three four five six", 0, 0.0);
  Rng rng(5);
  const OperatorOutput out = partial_rephrase(parent, rng, g, AugmentOptions{});
  // Two masks, answers 0 and 1 from each (identical mock output).
  EXPECT_EQ(out.claims, (std::vector<std::string>{"a", "b", "a", "b"}));
  EXPECT_FALSE(out.warnings.empty());
}

TEST(PartialRephrase, NoParseableAnswersGivesWarning) {
  Gateway g(std::make_shared<FunctionTransport>([](Endpoint, const json&) {
    return json{{"completions", {"I refuse."}}};
  }));
  Rng rng(5);
  const OperatorOutput out = partial_rephrase(
      make_fewshot_sample("e", "one two three four five six", 1, 1.0), rng, g,
      AugmentOptions{});
  EXPECT_TRUE(out.claims.empty());
  EXPECT_EQ(out.warnings.size(), 2u);
}

TEST(Paraphrase, RotationMockGivesThreeDistinct) {
  Gateway g(std::make_shared<FunctionTransport>(echo_filler));
  const auto kids = paraphrase(make_fewshot_sample("e", "a b c d", 1, 1.0), g);
  EXPECT_EQ(kids.size(), 3u);
  EXPECT_EQ(std::set<std::string>(kids.begin(), kids.end()).size(), 3u);
}

TEST(AugmentPopulation, CertaintyPropagation) {
  for (const auto& [r, link, expected] :
       {std::tuple{1.0, 0.9, 0.9}, std::tuple{0.8, 0.8, 0.68},
        std::tuple{0.3, 0.5, 0.5}}) {
    const double t = link;
    Gateway g(std::make_shared<FunctionTransport>([&](Endpoint e, const json& body) {
      if (e == Endpoint::kEntailLink) return json{{"probability", t}};
      return echo_filler(e, body);
    }));
    const SyntheticSample parent = make_fewshot_sample("e", "First one. Second one.", 1, r);
    const Offspring kids = augment_population({&parent, 1}, 7, 1, g, AugmentOptions{});
    ASSERT_EQ(kids.children.size(), 11u);  // 6 rephrased, 3 paraphrased, 2 drops
    for (const SyntheticSample& c : kids.children) {
      EXPECT_NEAR(c.certainty, expected, 1e-15);
      EXPECT_EQ(c.hard_label, 1);
      EXPECT_EQ(c.generation, 1);
      EXPECT_EQ(c.parent_id, parent.sample_id);
      EXPECT_EQ(c.evidence_id, "e");
      EXPECT_NO_THROW(validate_sample(c));
    }
  }
}

TEST(AugmentPopulation, LinkFailuresSkipChildren) {
  int link_calls = 0;
  std::size_t failures = 0;
  Gateway g(std::make_shared<FunctionTransport>([&](Endpoint e, const json& body) {
    if (e == Endpoint::kEntailLink && ++link_calls % 2 == 0) {
      ++failures;
      throw TransportError("flaky");
    }
    return echo_filler(e, body);
  }));
  const SyntheticSample parent = make_fewshot_sample("e", "A b. C d. E f.", 0, 0.2);
  const Offspring kids = augment_population({&parent, 1}, 7, 1, g, AugmentOptions{});
  EXPECT_EQ(kids.children.size() + kids.warnings.size(), 12u);
  EXPECT_GT(failures, 0u);
  EXPECT_EQ(kids.warnings.size(), failures);
}

TEST(AugmentPopulation, DeterministicAndOrderIndependent) {
  Gateway g(std::make_shared<FunctionTransport>(echo_filler));
  const std::vector<SyntheticSample> parents = {
      make_fewshot_sample("e", "One a b. Two c d. Three e f.", 1, 0.9),
      make_fewshot_sample("e", "Four g h. Five i j.", 0, 0.1)};
  const std::vector<SyntheticSample> reversed = {parents[1], parents[0]};
  auto ids = [](const Offspring& o) {
    std::multiset<std::string> s;
    for (const auto& c : o.children) s.insert(c.sample_id + c.claim);
    return s;
  };
  const Offspring a = augment_population(parents, 11, 2, g, AugmentOptions{});
  const Offspring b = augment_population(reversed, 11, 2, g, AugmentOptions{});
  EXPECT_EQ(ids(a), ids(b));
}

}  // namespace
}  // namespace autogda
