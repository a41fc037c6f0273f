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

#include "bioaug/corpus.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "bioaug/error.h"

namespace bioaug {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

}  // namespace

std::string_view to_string(TaskType task) {
  switch (task) {
    case TaskType::kNer: return "NER";
    case TaskType::kRe: return "RE";
    case TaskType::kTc: return "TC";
    case TaskType::kQa: return "QA";
  }
  return "?";
}

TaskType parse_task(std::string_view tag) {
  std::string up(tag);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "NER") return TaskType::kNer;
  if (up == "RE") return TaskType::kRe;
  if (up == "TC") return TaskType::kTc;
  if (up == "QA") return TaskType::kQa;
  throw ParseError("unknown task tag '" + std::string(tag) + "'");
}

std::vector<std::string> TaskInstance::token_texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (!is_punct(text[i])) {
      while (j < text.size() && !is_space(text[j]) && !is_punct(text[j])) ++j;
    }
    out.push_back(Token{std::string(text.substr(i, j - i)), out.size(), i, j});
    i = j;
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

void set_tokens(TaskInstance& inst, const std::vector<std::string>& tokens) {
  inst.text = join_tokens(tokens);
  inst.tokens.clear();
  std::size_t offset = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    inst.tokens.push_back(
        Token{tokens[i], i, offset, offset + tokens[i].size()});
    offset += tokens[i].size() + 1;
  }
}

std::string span_surface(const std::vector<Token>& tokens, const Span& span) {
  std::string out;
  for (std::size_t i = span.start; i <= span.end && i < tokens.size(); ++i) {
    if (i != span.start) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

std::vector<std::string> validate_instance(const TaskInstance& inst,
                                           const Dataset* context) {
  std::vector<std::string> v;
  if (inst.id.empty()) v.push_back("empty id");
  if (inst.tokens.empty()) v.push_back("empty token sequence");
  for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
    if (inst.tokens[i].text.empty()) {
      v.push_back("empty token at " + std::to_string(i));
    }
    if (inst.tokens[i].index != i) {
      v.push_back("non-contiguous token index at " + std::to_string(i));
    }
  }
  const std::size_t n = inst.tokens.size();
  for (std::size_t k = 0; k < inst.entities.size(); ++k) {
    const auto& e = inst.entities[k];
    const std::string where = "entity " + std::to_string(k) + ": ";
    if (e.span.start > e.span.end) {
      v.push_back(where + "span start after end");
    } else if (e.span.end >= n) {
      v.push_back(where + "span out of bounds");
    } else if (span_surface(inst.tokens, e.span) != e.surface) {
      v.push_back(where + "surface does not match span tokens");
    }
    if (e.entity_type.empty()) v.push_back(where + "empty entity type");
  }
  switch (inst.task) {
    case TaskType::kRe:
      if (!inst.entity_pair) {
        v.push_back("RE instance without entity pair");
      } else {
        const auto [a, b] = *inst.entity_pair;
        if (a >= inst.entities.size() || b >= inst.entities.size()) {
          v.push_back("entity pair index out of range");
        } else if (a == b) {
          v.push_back("entity pair refers to the same mention twice");
        } else if (inst.entities[a].span.overlaps(inst.entities[b].span)) {
          v.push_back("entity pair spans overlap");
        }
      }
      if (inst.relation.empty()) v.push_back("RE instance without relation");
      break;
    case TaskType::kTc:
      if (inst.topics.empty()) v.push_back("TC instance without topic");
      for (const auto& t : inst.topics) {
        if (t.empty()) v.push_back("empty topic label");
      }
      break;
    case TaskType::kQa:
      if (inst.question.empty()) v.push_back("QA instance without question");
      if (inst.answer.empty()) v.push_back("QA instance without answer");
      break;
    case TaskType::kNer:
      break;
  }
  if (inst.task != TaskType::kRe && inst.entity_pair) {
    v.push_back("entity pair on non-RE instance");
  }
  if (inst.parent_id) {
    if (inst.parent_id->empty()) {
      v.push_back("empty parent id");
    } else if (context) {
      const bool found = std::any_of(
          context->begin(), context->end(),
          [&](const TaskInstance& o) { return o.id == *inst.parent_id; });
      if (!found) v.push_back("unresolved parent");
    }
  }
  return v;
}

NotionTable parse_notions(std::string_view content) {
  NotionTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (nl == content.size()) break;
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError("notions line " + std::to_string(line_no) +
                       ": expected 'label<TAB>definition'");
    }
    table.insert_or_assign(std::string(line.substr(0, tab)),
                           std::string(line.substr(tab + 1)));
    if (nl == content.size()) break;
  }
  return table;
}

namespace {

const std::string& lookup_notion(const NotionTable& notions,
                                 const std::string& label) {
  auto it = notions.find(label);
  if (it == notions.end() || it->second.empty()) {
    throw Error("missing definition for label '" + label + "'");
  }
  return it->second;
}

}  // namespace

AttributionTarget derive_attribution_target(const TaskInstance& inst,
                                            const NotionTable& notions) {
  AttributionTarget target;
  switch (inst.task) {
    case TaskType::kRe: {
      if (!inst.entity_pair) throw Error("RE instance without entity pair");
      const auto [a, b] = *inst.entity_pair;
      target.spans = {inst.entities.at(a).span, inst.entities.at(b).span};
      target.restriction_text = lookup_notion(notions, inst.relation);
      break;
    }
    case TaskType::kNer: {
      if (inst.entities.empty()) {
        throw DegenerateInstance("NER instance '" + inst.id +
                                 "' has no entities to anchor on");
      }
      std::vector<std::string> seen;
      for (const auto& e : inst.entities) {
        target.spans.push_back(e.span);
        if (std::find(seen.begin(), seen.end(), e.entity_type) == seen.end()) {
          seen.push_back(e.entity_type);
        }
      }
      std::sort(target.spans.begin(), target.spans.end());
      for (const auto& type : seen) {
        if (!target.restriction_text.empty()) target.restriction_text += ' ';
        target.restriction_text += lookup_notion(notions, type);
      }
      break;
    }
    case TaskType::kTc:
      for (const auto& topic : inst.topics) {
        if (!target.restriction_text.empty()) target.restriction_text += ' ';
        target.restriction_text += lookup_notion(notions, topic);
      }
      break;
    case TaskType::kQa:
      target.restriction_text = inst.question;
      break;
  }
  return target;
}

}  // namespace bioaug
