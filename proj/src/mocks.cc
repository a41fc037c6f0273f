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

#include "bioaug/mocks.h"

#include <algorithm>

#include "bioaug/error.h"
#include "bioaug/hashing.h"
#include "bioaug/masked_template.h"
#include "text_util.h"

namespace bioaug {

namespace {

// Pseudo-random value in [-1, 1] for an unordered surface pair.
double pair_value(std::uint64_t seed, const std::string& a,
                  const std::string& b) {
  const std::string& lo = std::min(a, b);
  const std::string& hi = std::max(a, b);
  const std::uint64_t h = derive_seed(seed, lo + '\x1f' + hi);
  return static_cast<double>(h >> 11) / static_cast<double>(1ull << 52) - 1.0;
}

}  // namespace

double MockScorer::score(const ScoreRequest& request) {
  const auto& seq = request.sequence;
  double total = spec_.constant;
  for (const auto& t : seq) {
    auto it = spec_.token_weights.find(t);
    total += it == spec_.token_weights.end() ? spec_.per_token : it->second;
  }
  for (const auto& inter : spec_.interactions) {
    const bool all = std::all_of(
        inter.tokens.begin(), inter.tokens.end(), [&](const std::string& t) {
          return std::find(seq.begin(), seq.end(), t) != seq.end();
        });
    if (all) total += inter.bonus;
  }
  if (spec_.hashed_pairs) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      for (std::size_t j = i + 1; j < seq.size(); ++j) {
        total += spec_.pair_scale * pair_value(spec_.pair_seed, seq[i], seq[j]);
      }
    }
  }
  if (spec_.restriction_overlap != 0.0 && !request.restriction_text.empty()) {
    std::set<std::string> words;
    for (const auto& t : tokenize(request.restriction_text)) {
      words.insert(internal::to_lower(t.text));
    }
    std::set<std::string> seen;
    for (const auto& t : seq) {
      const auto low = internal::to_lower(t);
      if (words.count(low) && seen.insert(low).second) {
        total += spec_.restriction_overlap;
      }
    }
  }
  return total;
}

std::unique_ptr<MockScorer> make_additive_scorer(ScorerKind kind,
                                                 double per_token) {
  MockScorerSpec spec;
  spec.id = "additive";
  spec.kind = kind;
  spec.per_token = per_token;
  return std::make_unique<MockScorer>(std::move(spec));
}

std::unique_ptr<MockScorer> make_pair_bonus_scorer(std::uint64_t seed,
                                                   ScorerKind kind,
                                                   double scale) {
  MockScorerSpec spec;
  spec.id = "pair-bonus-" + std::to_string(seed);
  spec.kind = kind;
  spec.hashed_pairs = true;
  spec.pair_seed = seed;
  spec.pair_scale = scale;
  return std::make_unique<MockScorer>(std::move(spec));
}

std::unique_ptr<MockScorer> make_constant_scorer(double value,
                                                 ScorerKind kind) {
  MockScorerSpec spec;
  spec.id = "constant";
  spec.kind = kind;
  spec.constant = value;
  spec.per_token = 0.0;
  return std::make_unique<MockScorer>(std::move(spec));
}

std::unique_ptr<MockScorer> make_relativity_scorer(std::uint64_t seed,
                                                   double scale) {
  MockScorerSpec spec;
  spec.id = "relativity-" + std::to_string(seed);
  spec.kind = ScorerKind::kInferenceRelativity;
  spec.per_token = 0.25;
  spec.hashed_pairs = true;
  spec.pair_seed = seed;
  spec.pair_scale = scale;
  spec.restriction_overlap = 1.0;
  return std::make_unique<MockScorer>(std::move(spec));
}

double CountingScorer::score(const ScoreRequest& request) {
  ++calls_;
  {
    std::lock_guard lock(mu_);
    fingerprints_.insert(request.fingerprint());
    sequences_.insert(request.sequence);
  }
  return inner_.score(request);
}

std::size_t CountingScorer::distinct_requests() const {
  std::lock_guard lock(mu_);
  return fingerprints_.size();
}

std::set<std::vector<std::string>> CountingScorer::distinct_sequences() const {
  std::lock_guard lock(mu_);
  return sequences_;
}

namespace {

const TaskInstance& find_source(const Dataset& dataset,
                                const MaskedTemplate& tmpl) {
  for (const auto& inst : dataset) {
    if (inst.tokens.size() != tmpl.tokens.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < tmpl.tokens.size() && match; ++i) {
      match = tmpl.tokens[i] == tmpl.sentinel ||
              tmpl.tokens[i] == inst.tokens[i].text;
    }
    if (!match) continue;
    const auto ents = marked_entities(inst);
    if (ents.size() != tmpl.entities.size()) continue;
    for (std::size_t j = 0; j < ents.size() && match; ++j) {
      match = ents[j].entity_type == tmpl.entities[j].entity_type &&
              ents[j].surface == tmpl.entities[j].surface;
    }
    if (match) return inst;
  }
  throw ContractViolation("no source sentence fits the template");
}

std::vector<std::string> emit(const TaskInstance& inst,
                              const std::vector<std::string>& tokens,
                              bool with_markers) {
  if (!with_markers) return tokens;
  const auto ents = marked_entities(inst);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& e : ents) {
      if (e.span.start == i) out.push_back(open_marker(e.entity_type));
    }
    out.push_back(tokens[i]);
    for (const auto& e : ents) {
      if (e.span.end == i) out.push_back(close_marker(e.entity_type));
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> IdentityInfill::infill(const InfillRequest& request) {
  const auto& inst = find_source(dataset_, request.tmpl);
  return emit(inst, inst.token_texts(), with_markers_);
}

std::vector<std::string> SynonymInfill::infill(const InfillRequest& request) {
  const auto& inst = find_source(dataset_, request.tmpl);
  auto tokens = inst.token_texts();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (request.tmpl.tokens[i] != request.tmpl.sentinel) continue;
    if (auto it = table_.find(tokens[i]); it != table_.end()) {
      tokens[i] = it->second;
    }
  }
  return emit(inst, tokens, true);
}

std::map<std::string, std::string> default_synonyms() {
  return {
      {"administered", "given"},   {"given", "administered"},
      {"increase", "raise"},       {"increases", "raises"},
      {"decrease", "reduce"},      {"decreases", "reduces"},
      {"inhibit", "suppress"},     {"inhibits", "suppresses"},
      {"induced", "caused"},       {"induces", "causes"},
      {"patients", "subjects"},    {"treatment", "therapy"},
      {"may", "might"},            {"levels", "concentrations"},
      {"enhance", "augment"},      {"enhances", "augments"},
      {"significantly", "markedly"}, {"observed", "seen"},
      {"associated", "linked"},    {"effect", "influence"},
  };
}

std::string ScriptedExtractor::extract(const ExtractRequest& request) {
  std::lock_guard lock(mu_);
  if (replies_.empty()) throw Error("scripted extractor has no replies");
  requests_.push_back(request);
  const std::size_t i = std::min(calls_, replies_.size() - 1);
  ++calls_;
  return replies_[i];
}

}  // namespace bioaug
