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

// Deterministic offline backends. They define the backend contracts for
// tests and let the whole pipeline run without a model server. All of them
// are safe to call from several threads.

#ifndef BIOAUG_MOCKS_H_
#define BIOAUG_MOCKS_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "bioaug/attribution.h"
#include "bioaug/corpus.h"
#include "bioaug/generation.h"

namespace bioaug {

// Bonus added when every listed token is present in the sequence.
struct Interaction {
  std::vector<std::string> tokens;
  double bonus = 0.0;
};

struct MockScorerSpec {
  std::string id = "mock-scorer";
  ScorerKind kind = ScorerKind::kTaskLogit;
  double constant = 0.0;
  double per_token = 1.0;
  // Overrides per_token for specific surfaces.
  std::map<std::string, double> token_weights;
  std::vector<Interaction> interactions;
  // When set, every unordered pair of positions (i < j) adds a pseudo-random
  // value in [-pair_scale, pair_scale] keyed on the two surfaces.
  bool hashed_pairs = false;
  std::uint64_t pair_seed = 0;
  double pair_scale = 1.0;
  // Added once per distinct restriction-text word present in the sequence.
  double restriction_overlap = 0.0;
};

class MockScorer final : public ScorerBackend {
 public:
  explicit MockScorer(MockScorerSpec spec) : spec_(std::move(spec)) {}
  std::string id() const override { return spec_.id; }
  ScorerKind kind() const override { return spec_.kind; }
  double score(const ScoreRequest& request) override;
  const MockScorerSpec& spec() const { return spec_; }

 private:
  MockScorerSpec spec_;
};

// 1 per token, no interactions.
std::unique_ptr<MockScorer> make_additive_scorer(
    ScorerKind kind = ScorerKind::kTaskLogit, double per_token = 1.0);
// Additive plus hashed pairwise terms.
std::unique_ptr<MockScorer> make_pair_bonus_scorer(
    std::uint64_t seed, ScorerKind kind = ScorerKind::kTaskLogit,
    double scale = 1.0);
std::unique_ptr<MockScorer> make_constant_scorer(
    double value, ScorerKind kind = ScorerKind::kTaskLogit);
// Inference-relativity scorer: restriction-word overlap plus hashed pairs.
std::unique_ptr<MockScorer> make_relativity_scorer(std::uint64_t seed,
                                                   double scale = 0.1);

// Counts calls and remembers every distinct request.
class CountingScorer final : public ScorerBackend {
 public:
  explicit CountingScorer(ScorerBackend& inner) : inner_(inner) {}
  std::string id() const override { return inner_.id(); }
  ScorerKind kind() const override { return inner_.kind(); }
  double score(const ScoreRequest& request) override;

  std::size_t calls() const { return calls_.load(); }
  std::size_t distinct_requests() const;
  std::set<std::vector<std::string>> distinct_sequences() const;

 private:
  ScorerBackend& inner_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mu_;
  std::set<std::string> fingerprints_;
  std::set<std::vector<std::string>> sequences_;
};

// Restores the original sentence: finds the dataset instance whose tokens
// agree with every unmasked template slot and emits it, with markers around
// the marked entities unless `with_markers` is false.
class IdentityInfill final : public GeneratorBackend {
 public:
  explicit IdentityInfill(const Dataset& dataset, bool with_markers = true)
      : dataset_(dataset), with_markers_(with_markers) {}
  std::string id() const override { return "identity-infill"; }
  std::vector<std::string> infill(const InfillRequest& request) override;

 private:
  const Dataset& dataset_;
  bool with_markers_;
};

// Like IdentityInfill, then swaps masked-slot tokens found in `table`.
class SynonymInfill final : public GeneratorBackend {
 public:
  SynonymInfill(const Dataset& dataset,
                std::map<std::string, std::string> table)
      : dataset_(dataset), table_(std::move(table)) {}
  std::string id() const override { return "synonym-infill"; }
  std::vector<std::string> infill(const InfillRequest& request) override;

 private:
  const Dataset& dataset_;
  std::map<std::string, std::string> table_;
};

// A small built-in biomedical synonym table for offline runs.
std::map<std::string, std::string> default_synonyms();

// Returns the first source (the target sentence with its notion).
class EchoExtractor final : public ExtractorBackend {
 public:
  std::string id() const override { return "echo-extractor"; }
  std::string extract(const ExtractRequest& request) override {
    return request.sources.front();
  }
};

// Replies with scripted structures in order, repeating the last one.
class ScriptedExtractor final : public ExtractorBackend {
 public:
  explicit ScriptedExtractor(std::vector<std::string> replies)
      : replies_(std::move(replies)) {}
  std::string id() const override { return "scripted-extractor"; }
  std::string extract(const ExtractRequest& request) override;

  std::size_t calls() const { return calls_; }
  const std::vector<ExtractRequest>& requests() const { return requests_; }

 private:
  std::vector<std::string> replies_;
  std::mutex mu_;
  std::size_t calls_ = 0;
  std::vector<ExtractRequest> requests_;
};

}  // namespace bioaug

#endif  // BIOAUG_MOCKS_H_
