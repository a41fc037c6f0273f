//
// Copyright 2026 The bioaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "bioaug/prompts.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "bioaug/error.h"
#include "test_util.h"

namespace bioaug {
namespace {

std::string golden(const std::string& name) {
  std::string s = testing::slurp(std::filesystem::path(BIOAUG_GOLDEN_DIR) /
                                 (name + ".txt"));
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string fmt(const char* tag) {
  return std::string("Answer with a single line starting with ") + tag + ":";
}

const char* kTopic =
    "whether replacing \"dose\" with \"concentration\" keeps the clinical "
    "meaning";

TEST(Prompts, DebateInitialGolden) {
  EXPECT_EQ(render_prompt(PromptTemplate::kDebateInitial,
                          {{"topic", kTopic}, {"answer_format", fmt("STATEMENT")}}),
            golden("debate_initial"));
}

TEST(Prompts, DebateReviewGolden) {
  EXPECT_EQ(render_prompt(PromptTemplate::kDebateReview,
                          {{"topic", kTopic},
                           {"initial_statement",
                            "\"dose\" refers to the amount given to a patient, "
                            "\"concentration\" to a laboratory measure."},
                           {"answer_format", fmt("REVIEW")}}),
            golden("debate_review"));
}

TEST(Prompts, DebateRevisionGolden) {
  EXPECT_EQ(render_prompt(PromptTemplate::kDebateRevision,
                          {{"reviews",
                            "Agent 2: the swap changes the clinical setting. "
                            "Agent 3: \"concentration\" implies an in vitro "
                            "assay."},
                           {"answer_format", fmt("REVISED")}}),
            golden("debate_revision"));
}

TEST(Prompts, DistinguishGolden) {
  EXPECT_EQ(render_prompt(PromptTemplate::kDistinguish,
                          {{"original", "Give a 5 mg dose of aspirin ."},
                           {"augmented", "Give a 5 mg concentration of aspirin ."}}),
            golden("distinguish"));
}

TEST(Prompts, TaskAnswerGolden) {
  EXPECT_EQ(render_prompt(PromptTemplate::kTaskAnswer,
                          {{"task", "NER"},
                           {"sentence",
                            "Patients received a 500 mg dose of aspirin daily."}}),
            golden("task_answer_ner"));
  EXPECT_EQ(render_prompt(PromptTemplate::kTaskAnswer,
                          {{"task", "RE"},
                           {"sentence",
                            "Grepafloxacin may inhibit the metabolism of "
                            "theobromine."}}),
            golden("task_answer_re"));
  EXPECT_EQ(render_prompt(PromptTemplate::kTaskAnswer,
                          {{"task", "TC"},
                           {"sentence", "Loss of p53 lets tumour cells escape arrest."},
                           {"categories",
                            "sustaining proliferative signaling, evading growth "
                            "suppressors"}}),
            golden("task_answer_tc"));
  EXPECT_EQ(render_prompt(PromptTemplate::kTaskAnswer,
                          {{"task", "QA"},
                           {"passage", "Aspirin irreversibly inhibits cyclooxygenase."},
                           {"question", "Does aspirin inhibit cyclooxygenase?"}}),
            golden("task_answer_qa"));
}

TEST(Prompts, MissingVariableNamesPlaceholder) {
  try {
    render_prompt(PromptTemplate::kDebateInitial, {{"answer_format", "x"}});
    FAIL();
  } catch (const Error& e) {
    const std::string w = e.what();
    EXPECT_NE(w.find("topic"), std::string::npos) << w;
    EXPECT_NE(w.find("[Insert topic here]"), std::string::npos) << w;
  }
  EXPECT_THROW(render_prompt(PromptTemplate::kDebateInitial,
                             {{"topic", ""}, {"answer_format", "x"}}),
               Error);
  EXPECT_THROW(render_prompt(PromptTemplate::kTaskAnswer, {{"sentence", "s"}}),
               Error);
  EXPECT_THROW(render_prompt(PromptTemplate::kTaskAnswer,
                             {{"task", "POS"}, {"sentence", "s"}}),
               Error);
}

TEST(Prompts, SubstitutedValuesAreNotRescanned) {
  const auto r = render_prompt(
      PromptTemplate::kDebateInitial,
      {{"topic", "[Required Answer Format]"}, {"answer_format", "FMT"}});
  EXPECT_NE(r.find("‘[Required Answer Format]’"), std::string::npos);
}

TEST(Prompts, PlaceholdersInOrder) {
  EXPECT_EQ(prompt_placeholders(PromptTemplate::kDebateReview),
            (std::vector<std::string>{"[Insert topic here]",
                                      "[Initial Statement]",
                                      "[Required Answer Format]"}));
  EXPECT_EQ(prompt_placeholders(PromptTemplate::kTaskAnswer, "QA"),
            (std::vector<std::string>{"[Insert passage]", "[Insert question]"}));
}

TEST(Prompts, IdsRoundTrip) {
  for (auto id : {PromptTemplate::kDebateInitial, PromptTemplate::kDebateReview,
                  PromptTemplate::kDebateRevision, PromptTemplate::kTaskAnswer,
                  PromptTemplate::kDistinguish}) {
    EXPECT_EQ(parse_prompt_template(to_string(id)), id);
  }
  EXPECT_THROW(parse_prompt_template("nope"), Error);
}

TEST(Prompts, SplitHeaderFromBody) {
  const auto parts = split_prompt("Task: X\n\nbody\nmore");
  EXPECT_EQ(parts.system, "Task: X");
  EXPECT_EQ(parts.user, "body\nmore");
}

}  // namespace
}  // namespace bioaug
