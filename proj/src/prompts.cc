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

#include <array>
#include <utility>

#include "bioaug/error.h"

namespace bioaug {

namespace {

struct Placeholder {
  std::string_view text;
  std::string_view variable;
};

constexpr std::array<Placeholder, 10> kPlaceholders = {{
    {"[Insert topic here]", "topic"},
    {"[Initial Statement]", "initial_statement"},
    {"[Reviews]", "reviews"},
    {"[Required Answer Format]", "answer_format"},
    {"[Insert sentence or passage]", "sentence"},
    {"[Insert categories, e.g., positive/negative, news/sports/entertainment]",
     "categories"},
    {"[Insert passage]", "passage"},
    {"[Insert question]", "question"},
    {"[Insert here]", "original"},
    {"[Inser here]", "augmented"},
}};

constexpr std::string_view kDebateHeader = "Task: Multi-agents System Debate\n\n";

constexpr std::string_view kDebateInitial =
    "Initial Statement:\n"
    "You are the Lead Agent tasked with presenting an argument on the topic: "
    "‘[Insert topic here]’. Please construct a clear and "
    "well-supported statement presenting your point of view. Include relevant "
    "examples, evidence, and reasoning to back up your perspective. Ensure "
    "that your argument is structured, formal, and focused. Please avoid "
    "addressing counterarguments at this stage.\n";

constexpr std::string_view kDebateReview =
    "Review and Discussion by Other Agents:\n"
    "You are tasked with reviewing the initial argument presented by Agent 1 "
    "on the topic ‘[Insert topic here]’. Please provide "
    "constructive feedback on the argument, discussing its strengths and "
    "weaknesses. You may agree, disagree, or partially support the view, but "
    "you must justify your stance with reasoned arguments, counterexamples, "
    "or further supporting evidence. Be respectful and formal in your review. "
    "The following is the ‘[Initial Statement]’.\n";

constexpr std::string_view kDebateRevision =
    "Revision:\n"
    "Now that you have received feedback from Agents 2–6 on your initial "
    "argument (The following is the ‘[Reviews]’.), you are tasked "
    "with revising your viewpoint. Please take into account the points raised "
    "by the reviewers, addressing critiques or incorporating any valuable "
    "insights. Your revised argument should be more refined, considering both "
    "the strengths and weaknesses highlighted in the reviews. Provide a final "
    "statement on your position.\n";

constexpr std::string_view kAnswerFormat =
    "\nRequired Answer Format:\n[Required Answer Format]";

constexpr std::string_view kTaskHeader =
    "Task: Generate Answer for Specific Tasks\n\n";

constexpr std::string_view kTaskNer =
    "NER:\n"
    "You are tasked with performing Named Entity Recognition (NER). Given the "
    "following sentence/passage, identify and classify all the named "
    "entities. Entities should be categorized as Person, Organization, "
    "Location, Date, or Miscellaneous. Sentence/Passage: [Insert sentence or "
    "passage]. Your Response: Provide a list of entities along with their "
    "respective categories.\n"
    "EXAMPLE:\n"
    "Example Input:\n"
    "Sentence: “Barack Obama was born on August 4, 1961, in Honolulu, "
    "Hawaii.”\n"
    "Expected Output:\n"
    "Barack Obama: Person\n"
    "August 4, 1961: Date\n"
    "Honolulu: Location\n"
    "Hawaii: Location";

constexpr std::string_view kTaskRe =
    "RE:\n"
    "You are tasked with performing Relation Extraction (RE). Given the "
    "sentence or passage, identify the entities and their relationship to one "
    "another. Specify the type of relationship (e.g., works for, located in, "
    "born in). Sentence/Passage: [Insert sentence or passage]. Your Response: "
    "Identify the entities and describe the relationship between them.\n"
    "EXAMPLE:\n"
    "Example Input:\n"
    "Sentence: “Steve Jobs founded Apple in 1976 in Cupertino, "
    "California.”\n"
    "Expected Output:\n"
    "Steve Jobs [Person] – Founded – Apple [Organization]\n"
    "Apple [Organization] – Located in – Cupertino, California "
    "[Location]";

constexpr std::string_view kTaskTc =
    "TC:\n"
    "You are tasked with performing Text Classification (TC). Given the "
    "sentence or passage, classify it into one of the following categories: "
    "[Insert categories, e.g., positive/negative, news/sports/entertainment]. "
    "Sentence/Passage: [Insert sentence or passage]. Your Response: Provide "
    "the category that best fits the content of the text.\n"
    "EXAMPLE:\n"
    "Example Input:\n"
    "Sentence: “The weather today is absolutely beautiful and "
    "sunny.”\n"
    "Categories: Positive, Negative\n"
    "Expected Output:\n"
    "Positive";

constexpr std::string_view kTaskQa =
    "QA:\n"
    "You are tasked with performing Question Answering (QA). Given the "
    "passage and the question, provide a concise and accurate answer. "
    "Passage: [Insert passage]. Question: [Insert question]. Your Response: "
    "Provide the answer based on the passage.\n"
    "EXAMPLE:\n"
    "Example Input:\n"
    "Passage: “Marie Curie was a physicist and chemist who conducted "
    "pioneering research on radioactivity. She was the first woman to win a "
    "Nobel Prize.”\n"
    "Question: “Who was the first woman to win a Nobel Prize?”\n"
    "Expected Output:\n"
    "Marie Curie";

constexpr std::string_view kDistinguish =
    "Task: Distinguish Augmented Data and Original Data\n\n"
    "You are tasked with distinguishing between augmented data and original "
    "data based on four key aspects: word definition, word-word similarity, "
    "syntax correctness, and word examples. For each aspect, follow the "
    "definitions provided and apply the evaluation rule to identify whether "
    "the data has been augmented or is original.\n"
    "Original Data: ‘[Insert here]’\n"
    "Augmented Data: ‘[Inser here]’\n"
    "Word Definition\n"
    "Definition: A word definition refers to the precise meaning or set of "
    "meanings attributed to a word. In original data, definitions typically "
    "align with conventional or dictionary meanings, while in augmented data, "
    "meanings may be modified slightly or appear less conventional due to "
    "transformations.\n"
    "Evaluation Rule: Compare the meaning of words in the data with their "
    "standard definitions. If words seem to deviate from their conventional "
    "meanings, or if less common or rephrased meanings are present, it could "
    "indicate augmented data.\n"
    "Word-Word Similarity\n"
    "Definition: Word-word similarity measures how closely related two words "
    "are in meaning, either semantically or contextually. In original data, "
    "words tend to reflect naturally occurring relationships. Augmented data "
    "may introduce words with forced or unusual similarities due to "
    "transformations such as synonym replacement.\n"
    "Evaluation Rule: Assess the semantic relationship between words in "
    "context. If word pairs exhibit unnatural or lower similarity compared to "
    "typical usage, or if unusual word choices are used to maintain "
    "similarity, this may indicate augmented data.\n"
    "Syntax Correctness\n"
    "Definition: Syntax correctness refers to the adherence to the "
    "grammatical structure of sentences. Original data follows standard "
    "syntactical rules, whereas augmented data may introduce slight errors or "
    "unusual patterns due to transformations that alter sentence structure.\n"
    "Evaluation Rule: Analyze sentence structure for grammatical accuracy. If "
    "there are noticeable shifts in word order, incorrect verb forms, or "
    "awkward phrasing that breaks typical syntactical patterns, this suggests "
    "augmented data.\n"
    "Word Examples\n"
    "Definition: Word examples are common instances of how a word is used in "
    "context. Original data will present examples that are conventional and "
    "contextually appropriate, while augmented data may use less common or "
    "slightly mismatched examples due to changes in phrasing or context.\n"
    "Evaluation Rule: Evaluate whether the words in the data are used in "
    "typical and contextually correct examples. If word usage appears "
    "slightly out of place, with less common or unconventional examples, this "
    "could indicate augmented data.";

std::string template_text(PromptTemplate id, std::string_view task) {
  std::string out;
  switch (id) {
    case PromptTemplate::kDebateInitial:
      out.append(kDebateHeader).append(kDebateInitial).append(kAnswerFormat);
      break;
    case PromptTemplate::kDebateReview:
      out.append(kDebateHeader).append(kDebateReview).append(kAnswerFormat);
      break;
    case PromptTemplate::kDebateRevision:
      out.append(kDebateHeader).append(kDebateRevision).append(kAnswerFormat);
      break;
    case PromptTemplate::kTaskAnswer:
      out.append(kTaskHeader);
      if (task == "NER") {
        out.append(kTaskNer);
      } else if (task == "RE") {
        out.append(kTaskRe);
      } else if (task == "TC") {
        out.append(kTaskTc);
      } else if (task == "QA") {
        out.append(kTaskQa);
      } else {
        throw Error("task_answer: unknown task '" + std::string(task) + "'");
      }
      break;
    case PromptTemplate::kDistinguish:
      out.append(kDistinguish);
      break;
  }
  return out;
}

const Placeholder* placeholder_at(std::string_view text, std::size_t pos) {
  if (text[pos] != '[') return nullptr;
  for (const auto& p : kPlaceholders) {
    if (text.substr(pos, p.text.size()) == p.text) return &p;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(PromptTemplate id) {
  switch (id) {
    case PromptTemplate::kDebateInitial: return "debate_initial";
    case PromptTemplate::kDebateReview: return "debate_review";
    case PromptTemplate::kDebateRevision: return "debate_revision";
    case PromptTemplate::kTaskAnswer: return "task_answer";
    case PromptTemplate::kDistinguish: return "distinguish";
  }
  return "?";
}

PromptTemplate parse_prompt_template(std::string_view id) {
  for (auto t : {PromptTemplate::kDebateInitial, PromptTemplate::kDebateReview,
                 PromptTemplate::kDebateRevision, PromptTemplate::kTaskAnswer,
                 PromptTemplate::kDistinguish}) {
    if (to_string(t) == id) return t;
  }
  throw ParseError("unknown prompt template '" + std::string(id) + "'");
}

std::string prompt_source(PromptTemplate id, std::string_view task) {
  return template_text(id, task);
}

std::vector<std::string> prompt_placeholders(PromptTemplate id,
                                             std::string_view task) {
  const std::string text = template_text(id, task);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (const auto* p = placeholder_at(text, i)) {
      bool seen = false;
      for (const auto& o : out) seen = seen || o == p->text;
      if (!seen) out.emplace_back(p->text);
      i += p->text.size() - 1;
    }
  }
  return out;
}

std::string render_prompt(PromptTemplate id, const PromptVariables& vars) {
  std::string task = "NER";
  if (id == PromptTemplate::kTaskAnswer) {
    auto it = vars.find("task");
    if (it == vars.end() || it->second.empty()) {
      throw Error("task_answer: missing variable 'task'");
    }
    task = it->second;
  }
  const std::string text = template_text(id, task);
  std::string out;
  out.reserve(text.size() * 2);
  for (std::size_t i = 0; i < text.size();) {
    const auto* p = placeholder_at(text, i);
    if (!p) {
      out += text[i++];
      continue;
    }
    auto it = vars.find(p->variable);
    if (it == vars.end() || it->second.empty()) {
      throw Error(std::string(to_string(id)) + ": missing variable '" +
                  std::string(p->variable) + "' for placeholder " +
                  std::string(p->text));
    }
    out += it->second;
    i += p->text.size();
  }
  return out;
}

PromptParts split_prompt(std::string_view rendered) {
  const auto nl = rendered.find('\n');
  if (nl == std::string_view::npos) return {std::string(rendered), {}};
  std::size_t body = nl + 1;
  while (body < rendered.size() && rendered[body] == '\n') ++body;
  return {std::string(rendered.substr(0, nl)),
          std::string(rendered.substr(body))};
}

}  // namespace bioaug
