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

// Canonical data model shared by every stage: tokens, entity mentions,
// task instances for the four supported task families, and the notion
// table that maps labels to their natural-language definitions.

#ifndef BIOAUG_CORPUS_H_
#define BIOAUG_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bioaug {

enum class TaskType { kNer, kRe, kTc, kQa };

std::string_view to_string(TaskType task);
TaskType parse_task(std::string_view tag);

struct Token {
  std::string text;
  std::size_t index = 0;
  // Byte offsets into TaskInstance::text.
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

// Inclusive token range.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  bool contains(std::size_t i) const { return i >= start && i <= end; }
  bool overlaps(const Span& o) const { return start <= o.end && o.start <= end; }
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct EntityMention {
  Span span;
  std::string entity_type;
  std::string surface;

  bool operator==(const EntityMention&) const = default;
};

struct TaskInstance {
  std::string id;
  TaskType task = TaskType::kNer;
  // Sentence (NER/RE/TC) or passage (QA).
  std::string text;
  std::vector<Token> tokens;
  std::vector<EntityMention> entities;
  // Indices into `entities`; RE only.
  std::optional<std::array<std::size_t, 2>> entity_pair;
  std::string relation;
  std::vector<std::string> topics;
  std::string question;
  std::string answer;
  // Set for augmented instances.
  std::optional<std::string> parent_id;

  bool augmented() const { return parent_id.has_value(); }
  std::vector<std::string> token_texts() const;
  bool operator==(const TaskInstance&) const = default;
};

using Dataset = std::vector<TaskInstance>;

// label -> definition text. Used for relation labels, entity types and
// topics alike.
using NotionTable = std::map<std::string, std::string, std::less<>>;

struct AttributionTarget {
  // Token ranges treated as the target (removed as a unit). Empty for TC/QA.
  std::vector<Span> spans;
  std::string restriction_text;

  bool operator==(const AttributionTarget&) const = default;
};

// Whitespace-plus-punctuation tokenization. Every ASCII punctuation
// character becomes its own token; offsets point into `text`.
std::vector<Token> tokenize(std::string_view text);

// Joins token texts with single spaces. tokenize(join_tokens(t)) == t for
// any token list produced by tokenize().
std::string join_tokens(const std::vector<std::string>& tokens);

// Builds tokens for an externally tokenized sentence. The text is the
// space-joined tokens.
void set_tokens(TaskInstance& inst, const std::vector<std::string>& tokens);

std::string span_surface(const std::vector<Token>& tokens, const Span& span);

// Empty iff the instance passes every structural invariant. When `context`
// is given, parent ids of augmented instances must resolve within it.
std::vector<std::string> validate_instance(const TaskInstance& inst,
                                           const Dataset* context = nullptr);

enum class DatasetFormat { kCanonicalJsonl, kConllBio, kReTsv, kQaJson, kTcCsv };

DatasetFormat parse_format(std::string_view tag);

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
Dataset parse_dataset(std::string_view content, DatasetFormat format,
                      std::string_view source_name = "<memory>");

// Canonical line-delimited JSON, one instance per line.
void write_dataset(const Dataset& ds, const std::filesystem::path& path);
std::string serialize_dataset(const Dataset& ds);

// Tab-separated `label<TAB>definition` lines; '#' starts a comment line.
NotionTable load_notions(const std::filesystem::path& path);
NotionTable parse_notions(std::string_view content);

AttributionTarget derive_attribution_target(const TaskInstance& inst,
                                            const NotionTable& notions);

}  // namespace bioaug

#endif  // BIOAUG_CORPUS_H_
