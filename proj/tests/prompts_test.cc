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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "autogda/errors.h"
#include "json.hpp"

namespace autogda {
namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(AUTOGDA_TEST_DATA) + "/golden/" + name,
                   std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kExamples = {"The council passed the budget.",
                                            "The budget passed 9 to 0 on Friday."};
constexpr const char* kDoc =
    "The council approved the budget on Monday. The vote was 7 to 2.";

TEST(Prompts, InitialEntailedMatchesGolden) {
  EXPECT_EQ(render_initial_prompt(kDoc, kExamples, 3, 1),
            golden("initial_entailed.txt"));
}

TEST(Prompts, InitialNonEntailedMatchesGolden) {
  EXPECT_EQ(render_initial_prompt(kDoc, kExamples, 3, 0),
            golden("initial_non_entailed.txt"));
}

TEST(Prompts, PartialRephraseMatchesGolden) {
  EXPECT_EQ(render_rephrase_prompt(
                "The council approved the budget on Monday after a long debate.",
                "The council approved the _ _ Monday after a long debate.", 3),
            golden("partial_rephrase.txt"));
}

TEST(Prompts, EntailmentMatchesGolden) {
  EXPECT_EQ(render_entailment_prompt(kDoc, "The council passed the budget."),
            golden("entailment.txt"));
}

TEST(Prompts, LabelClauses) {
  const std::string pos = render_initial_prompt(kDoc, kExamples, 2, 1);
  const std::string neg = render_initial_prompt(kDoc, kExamples, 2, 0);
  EXPECT_NE(pos.find("entirely supported by the document"), std::string::npos);
  EXPECT_NE(neg.find("at least one piece of non-factual information"),
            std::string::npos);
  EXPECT_NE(pos.find("from 0 to 1"), std::string::npos);
}

TEST(Prompts, FewshotCap) {
  std::vector<std::string> many;
  for (int i = 0; i < 7; ++i) many.push_back("claim " + std::to_string(i));
  const std::string p = render_initial_prompt(kDoc, many, 1, 1);
  EXPECT_NE(p.find("<example 3>"), std::string::npos);
  EXPECT_EQ(p.find("<example 4>"), std::string::npos);
  const std::vector<std::string> one = {"only"};
  const std::string q = render_initial_prompt(kDoc, one, 1, 1);
  EXPECT_NE(q.find("<example 0>only</example 0>"), std::string::npos);
  EXPECT_EQ(q.find("<example 1>"), std::string::npos);
  EXPECT_THROW(render_initial_prompt(kDoc, {}, 1, 1), std::invalid_argument);
  EXPECT_THROW(render_initial_prompt(kDoc, one, 0, 1), std::invalid_argument);
}

TEST(ParseTagged, GoldenCases) {
  const auto cases = nlohmann::json::parse(golden("tagged_cases.json"));
  ASSERT_FALSE(cases.empty());
  for (const auto& c : cases) {
    SCOPED_TRACE(c["name"].get<std::string>());
    const std::string text = c["text"];
    const std::string tag = c["tag"];
    const int n = c["n"];
    if (c.value("error", false)) {
      EXPECT_THROW(parse_tagged(text, tag, n), ParseError);
      continue;
    }
    const TaggedItems got = parse_tagged(text, tag, n);
    EXPECT_EQ(got.items, c["items"].get<std::vector<std::string>>());
    EXPECT_EQ(got.missing, c["missing"].get<std::vector<int>>());
  }
}

TEST(ParseTagged, RoundTripsRenderedSummaries) {
  std::string text = "Here you go:\n";
  const std::vector<std::string> items = {"First claim.", "Second, with <b>.",
                                          "Third."};
  for (std::size_t k = 0; k < items.size(); ++k) {
    const std::string i = std::to_string(k);
    text += "<summary " + i + ">" + items[k] + "</summary " + i + ">\n";
  }
  EXPECT_EQ(parse_tagged(text, "summary", 3).items, items);
}

}  // namespace
}  // namespace autogda
