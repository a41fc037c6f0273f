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

// Leave-one-out attribution. Two maps are computed per instance over the
// candidate keywords (tokens outside the target spans):
//
//   lexicon map:  entry(w) = attr(E) - attr(E \ w)
//                 attr(E)     = attr(s) - attr(s \ E)
//                 attr(E \ w) = attr(s \ w) - attr(s \ {E, w})
//   bio map:      same algebra under a relativity scorer that compares the
//                 remaining sequence to the restriction text.
//
// where attr(x) is the backend score of sequence x and every target span is
// removed as one unit. With no target spans (TC, QA) both maps fall back to
// plain leave-one-out, entry(w) = attr(s) - attr(s \ w).

#ifndef BIOAUG_ATTRIBUTION_H_
#define BIOAUG_ATTRIBUTION_H_

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "bioaug/corpus.h"

namespace bioaug {

inline constexpr std::string_view kMaskSentinel = "[M]";

enum class ScorerKind { kTaskLogit, kInferenceRelativity };

std::string_view to_string(ScorerKind kind);
ScorerKind parse_scorer_kind(std::string_view tag);

struct ScoreRequest {
  std::vector<std::string> sequence;
  // Only meaningful for kInferenceRelativity.
  std::string restriction_text;
  ScorerKind kind = ScorerKind::kTaskLogit;

  std::string fingerprint() const;
};

// Model seam for attr(x). Implementations must be safe to call from several
// threads and deterministic for a fixed request within one run.
class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  virtual std::string id() const = 0;
  virtual ScorerKind kind() const = 0;
  virtual double score(const ScoreRequest& request) = 0;
};

// In-memory memo in front of a scorer: one backend call per distinct
// request. Safe for concurrent lookup and insert.
class MemoScorer final : public ScorerBackend {
 public:
  explicit MemoScorer(ScorerBackend& inner) : inner_(inner) {}

  std::string id() const override { return inner_.id(); }
  ScorerKind kind() const override { return inner_.kind(); }
  double score(const ScoreRequest& request) override;

  std::size_t backend_calls() const { return calls_.load(); }
  std::size_t hits() const { return hits_.load(); }

 private:
  ScorerBackend& inner_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, double> memo_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> hits_{0};
};

// Scores `sequence` through `scorer`. Backend exceptions other than
// RetriableError are rethrown as RetriableError carrying the request
// fingerprint.
double loo_score(const std::vector<std::string>& sequence,
                 ScorerBackend& scorer, std::string_view restriction_text = {});

struct AttributionMap {
  // token index -> contribution. Keys are exactly the candidate keywords.
  std::map<std::size_t, double> entries;
  AttributionTarget target;
  bool normalized = false;
  // Set when the lexicon reference was non-positive and rank-based
  // normalization was used instead.
  bool rank_fallback = false;
  // Raw: "reference" (lexicon), "full_sentence" / "without_targets" (bio).
  // Normalized: the pinned values of the same keys.
  std::map<std::string, double> anchors;
};

inline constexpr std::string_view kAnchorReference = "reference";
inline constexpr std::string_view kAnchorFull = "full_sentence";
inline constexpr std::string_view kAnchorNoTargets = "without_targets";

// Token indices outside every target span.
std::vector<std::size_t> candidate_keywords(std::size_t sentence_length,
                                            const std::vector<Span>& targets);

// Sentence with the tokens at `removed` dropped, order preserved.
std::vector<std::string> remove_tokens(const std::vector<std::string>& sentence,
                                       const std::vector<bool>& removed);

AttributionMap attr_lexicon(const std::vector<std::string>& sentence,
                            const AttributionTarget& target,
                            ScorerBackend& scorer);

// attr(e1 <- e2); symmetric under the span-unit removal algebra.
double pair_contribution(const std::vector<std::string>& sentence,
                         const Span& e1, const Span& e2,
                         ScorerBackend& scorer);

AttributionMap attr_bio(const std::vector<std::string>& sentence,
                        const AttributionTarget& target,
                        ScorerBackend& scorer);

// Divides every entry by `reference` and records the pinned reference.
// Throws DegenerateInstance when reference <= 0.
AttributionMap normalize_lexicon(const AttributionMap& raw, double reference);

// Fallback for a non-positive reference: descending rank mapped linearly
// onto [0, 1], ties by lower token index. Flags the map.
AttributionMap normalize_lexicon_by_rank(const AttributionMap& raw);

// v -> (v - a0) / (a1 - a0) with a1 = full-sentence anchor and
// a0 = without-targets anchor. Throws DegenerateInstance when a1 == a0.
AttributionMap normalize_bio(const AttributionMap& raw);

struct KeywordSet {
  // Ascending token indices.
  std::vector<std::size_t> indices;
  std::size_t n = 0;
  // Combined score for every token present in both maps.
  std::map<std::size_t, double> combined;
};

// max(3, ceil(0.25 * candidates)).
std::size_t default_keyword_count(std::size_t candidates);

KeywordSet select_keywords(const AttributionMap& lexicon,
                           const AttributionMap& bio, std::size_t n);

nlohmann::json attribution_report(const std::vector<std::string>& sentence,
                                  const AttributionMap& lexicon,
                                  const AttributionMap& bio,
                                  const KeywordSet& keywords);

}  // namespace bioaug

#endif  // BIOAUG_ATTRIBUTION_H_
