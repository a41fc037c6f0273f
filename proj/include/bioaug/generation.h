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

// Pseudo-sentence generation: exemplar sampling, the key-structure
// refinement loop, infill through a GeneratorBackend and label projection.

#ifndef BIOAUG_GENERATION_H_
#define BIOAUG_GENERATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bioaug/corpus.h"
#include "bioaug/masked_template.h"

namespace bioaug {

struct InfillRequest {
  MaskedTemplate tmpl;
  std::string restriction_text;
  std::string key_structure;
  std::uint64_t seed = 0;
};

// Output contract: no mask sentinel; every marked entity surface present
// verbatim, optionally wrapped in its markers.
class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> infill(const InfillRequest& request) = 0;
};

struct FailingPair {
  std::size_t source_index = 0;
  double similarity = 0.0;
};

struct ExtractRequest {
  // Target sentence first, each joined with its restriction text.
  std::vector<std::string> sources;
  std::vector<FailingPair> failing_pairs;
};

class ExtractorBackend {
 public:
  virtual ~ExtractorBackend() = default;
  virtual std::string id() const = 0;
  virtual std::string extract(const ExtractRequest& request) = 0;
};

using SimilarityFn = std::function<double(std::string_view, std::string_view)>;

// Token-level longest common subsequence divided by the longer length.
double similarity(std::string_view a, std::string_view b);

// "x | r" (or x alone when r is empty).
std::string with_notion(std::string_view sentence, std::string_view notion);

// Grouping key for structural exemplars: relation for RE, topics for TC,
// the entity-type set for NER, a single bucket for QA.
std::string exemplar_label(const TaskInstance& inst);

// Up to k dataset indices sharing the target's exemplar label, the target
// itself excluded. Exact matches (same entity surfaces) come first; each
// tier is drawn by a seeded shuffle. Throws when no exemplar exists.
std::vector<std::size_t> sample_similar(const Dataset& dataset,
                                        const TaskInstance& target,
                                        std::size_t k, std::uint64_t seed);

struct KeyStructure {
  std::string text;
  std::size_t rounds = 0;
  // One score per source, target first.
  std::vector<double> similarities;
  bool best_effort = false;

  double min_similarity() const;
};

KeyStructure extract_key_structure(std::string_view target_sentence,
                                   const std::vector<std::string>& exemplars,
                                   std::string_view restriction_text,
                                   ExtractorBackend& extractor,
                                   double threshold = 0.80,
                                   std::size_t max_rounds = 5,
                                   const SimilarityFn& sim = similarity);

struct GenerationMeta {
  std::size_t n = 0;
  std::size_t k = 0;
  std::string backend_id;
  std::uint64_t seed = 0;
};

struct AugCandidate {
  std::vector<std::string> tokens;
  // Parallel to the template's marked entities; empty when the surface
  // occurs more than once without markers.
  std::vector<std::optional<Span>> entity_spans;
  std::string parent_id;
  GenerationMeta meta;
  bool trivial = false;
};

// Entities that a template marks for an instance: the pair for RE, every
// mention for NER, none for TC/QA.
std::vector<EntityMention> marked_entities(const TaskInstance& inst);

// Strips inline markers from backend output and re-locates every marked
// entity. Throws ContractViolation on a sentinel, an unbalanced marker or a
// dropped entity.
AugCandidate parse_candidate(const std::vector<std::string>& output,
                             const MaskedTemplate& tmpl);

AugCandidate generate_candidate(const TaskInstance& parent,
                                const MaskedTemplate& tmpl,
                                std::string_view restriction_text,
                                std::string_view key_structure,
                                GeneratorBackend& backend, std::uint64_t seed,
                                GenerationMeta meta = {});

// Parent labels on the candidate's tokens; provenance = augmented(parent).
TaskInstance project_labels(const TaskInstance& parent,
                            const AugCandidate& cand, std::string new_id);

}  // namespace bioaug

#endif  // BIOAUG_GENERATION_H_
