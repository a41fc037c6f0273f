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

#ifndef BIOAUG_PROMPTS_H_
#define BIOAUG_PROMPTS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bioaug {

enum class PromptTemplate {
  kDebateInitial,
  kDebateReview,
  kDebateRevision,
  kTaskAnswer,
  kDistinguish,
};

std::string_view to_string(PromptTemplate id);
PromptTemplate parse_prompt_template(std::string_view id);

// Variable names accepted by render_prompt:
//   debate_initial   topic, answer_format
//   debate_review    topic, initial_statement, answer_format
//   debate_revision  reviews, answer_format
//   task_answer      task (NER|RE|TC|QA) plus sentence, or categories and
//                    sentence (TC), or passage and question (QA)
//   distinguish      original, augmented
using PromptVariables = std::map<std::string, std::string, std::less<>>;

// Substitutes every placeholder of the template in one pass; substituted
// values are never rescanned. Missing or empty variables throw an Error
// naming the placeholder.
std::string render_prompt(PromptTemplate id, const PromptVariables& vars);

// The unrendered template text, placeholders included.
std::string prompt_source(PromptTemplate id, std::string_view task = "NER");

// The placeholders a template expects, in order of first appearance.
std::vector<std::string> prompt_placeholders(PromptTemplate id,
                                             std::string_view task = "NER");

// First line of a rendered prompt (the "Task: ..." header) and the rest.
struct PromptParts {
  std::string system;
  std::string user;
};
PromptParts split_prompt(std::string_view rendered);

}  // namespace bioaug

#endif  // BIOAUG_PROMPTS_H_
