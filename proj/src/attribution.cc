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

#include "bioaug/attribution.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "bioaug/error.h"
#include "bioaug/hashing.h"

namespace bioaug {

std::string_view to_string(ScorerKind kind) {
  return kind == ScorerKind::kTaskLogit ? "task-logit" : "inference-relativity";
}

ScorerKind parse_scorer_kind(std::string_view tag) {
  if (tag == "task-logit") return ScorerKind::kTaskLogit;
  if (tag == "inference-relativity") return ScorerKind::kInferenceRelativity;
  throw ParseError("unknown scorer kind '" + std::string(tag) + "'");
}

std::string ScoreRequest::fingerprint() const {
  std::string key(to_string(kind));
  key += '\x1e';
  key += restriction_text;
  for (const auto& t : sequence) {
    key += '\x1f';
    key += t;
  }
  return sha256_hex(key);
}

double MemoScorer::score(const ScoreRequest& request) {
  const std::string key = request.fingerprint();
  {
    std::shared_lock lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  // Two threads may race on the same key; both compute, the first insert
  // wins and only one call is counted.
  const double value = inner_.score(request);
  std::unique_lock lock(mu_);
  auto [it, inserted] = memo_.emplace(key, value);
  if (inserted) {
    ++calls_;
  } else {
    ++hits_;
  }
  return it->second;
}

double loo_score(const std::vector<std::string>& sequence,
                 ScorerBackend& scorer, std::string_view restriction_text) {
  ScoreRequest req{sequence, std::string(restriction_text), scorer.kind()};
  double value = 0.0;
  try {
    value = scorer.score(req);
  } catch (const RetriableError&) {
    throw;
  } catch (const std::exception& e) {
    throw RetriableError(std::string("scorer '") + scorer.id() +
                             "' failed: " + e.what(),
                         req.fingerprint());
  }
  if (!std::isfinite(value)) {
    throw RetriableError("scorer '" + scorer.id() + "' returned a non-finite score",
                         req.fingerprint());
  }
  return value;
}

std::vector<std::size_t> candidate_keywords(std::size_t sentence_length,
                                            const std::vector<Span>& targets) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sentence_length; ++i) {
    const bool in_target = std::any_of(
        targets.begin(), targets.end(),
        [i](const Span& s) { return s.contains(i); });
    if (!in_target) out.push_back(i);
  }
  return out;
}

std::vector<std::string> remove_tokens(const std::vector<std::string>& sentence,
                                       const std::vector<bool>& removed) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (!removed[i]) out.push_back(sentence[i]);
  }
  return out;
}

namespace {

void check_spans(const std::vector<std::string>& sentence,
                 const std::vector<Span>& spans) {
  for (std::size_t a = 0; a < spans.size(); ++a) {
    if (spans[a].start > spans[a].end || spans[a].end >= sentence.size()) {
      throw Error("target span out of bounds");
    }
    for (std::size_t b = a + 1; b < spans.size(); ++b) {
      if (spans[a].overlaps(spans[b])) {
        throw Error("overlapping entity spans");
      }
    }
  }
}

std::vector<bool> mask_of(std::size_t n, const std::vector<Span>& spans) {
  std::vector<bool> m(n, false);
  for (const auto& s : spans) {
    for (std::size_t i = s.start; i <= s.end; ++i) m[i] = true;
  }
  return m;
}

// Shared removal algebra for both maps.
AttributionMap leave_one_out_map(const std::vector<std::string>& sentence,
                                 const AttributionTarget& target,
                                 ScorerBackend& scorer,
                                 std::string_view restriction) {
  check_spans(sentence, target.spans);
  const auto candidates = candidate_keywords(sentence.size(), target.spans);
  if (candidates.empty()) throw Error("no candidate keywords");

  auto score = [&](const std::vector<bool>& removed) {
    return loo_score(remove_tokens(sentence, removed), scorer, restriction);
  };

  AttributionMap map;
  map.target = target;
  const std::vector<bool> none(sentence.size(), false);
  const double full = score(none);

  if (target.spans.empty()) {
    for (std::size_t w : candidates) {
      auto removed = none;
      removed[w] = true;
      map.entries[w] = full - score(removed);
    }
    return map;
  }

  const auto target_mask = mask_of(sentence.size(), target.spans);
  const double attr_target = full - score(target_mask);
  for (std::size_t w : candidates) {
    auto without_w = none;
    without_w[w] = true;
    auto without_both = target_mask;
    without_both[w] = true;
    const double attr_target_minus_w = score(without_w) - score(without_both);
    map.entries[w] = attr_target - attr_target_minus_w;
  }
  return map;
}

std::vector<std::size_t> ranked(const std::map<std::size_t, double>& values) {
  std::vector<std::size_t> order;
  order.reserve(values.size());
  for (const auto& [i, v] : values) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = values.at(a), vb = values.at(b);
    if (va != vb) return va > vb;
    return a < b;
  });
  return order;
}

}  // namespace

AttributionMap attr_lexicon(const std::vector<std::string>& sentence,
                            const AttributionTarget& target,
                            ScorerBackend& scorer) {
  if (scorer.kind() != ScorerKind::kTaskLogit) {
    throw Error("lexicon attribution needs a task-logit scorer");
  }
  return leave_one_out_map(sentence, target, scorer, {});
}

double pair_contribution(const std::vector<std::string>& sentence,
                         const Span& e1, const Span& e2,
                         ScorerBackend& scorer) {
  check_spans(sentence, {e1, e2});
  const std::size_t n = sentence.size();
  auto score = [&](const std::vector<Span>& removed) {
    return loo_score(remove_tokens(sentence, mask_of(n, removed)), scorer);
  };
  // attr(e1) - attr(e1 \ e2) with attr(e1 \ e2) = attr(s\e2) - attr(s\{e1,e2}).
  const double attr_e1 = score({}) - score({e1});
  const double attr_e1_minus_e2 = score({e2}) - score({e1, e2});
  return attr_e1 - attr_e1_minus_e2;
}

AttributionMap attr_bio(const std::vector<std::string>& sentence,
                        const AttributionTarget& target,
                        ScorerBackend& scorer) {
  if (scorer.kind() != ScorerKind::kInferenceRelativity) {
    throw Error("bio attribution needs an inference-relativity scorer");
  }
  if (target.restriction_text.empty()) {
    throw Error("missing restriction text for bio attribution");
  }
  AttributionMap map =
      leave_one_out_map(sentence, target, scorer, target.restriction_text);
  const std::vector<bool> none(sentence.size(), false);
  map.anchors[std::string(kAnchorFull)] =
      loo_score(sentence, scorer, target.restriction_text);
  if (target.spans.empty()) {
    // Nothing to remove: a fully masked sentence stands in for the
    // no-entities case.
    map.anchors[std::string(kAnchorNoTargets)] = loo_score(
        {std::string(kMaskSentinel)}, scorer, target.restriction_text);
  } else {
    map.anchors[std::string(kAnchorNoTargets)] = loo_score(
        remove_tokens(sentence, mask_of(sentence.size(), target.spans)),
        scorer, target.restriction_text);
  }
  return map;
}

AttributionMap normalize_lexicon(const AttributionMap& raw, double reference) {
  if (!(reference > 0.0)) {
    throw DegenerateInstance("non-positive lexicon reference contribution");
  }
  AttributionMap out = raw;
  for (auto& [i, v] : out.entries) v /= reference;
  out.anchors[std::string(kAnchorReference)] = reference / reference;
  out.normalized = true;
  out.rank_fallback = false;
  return out;
}

AttributionMap normalize_lexicon_by_rank(const AttributionMap& raw) {
  AttributionMap out = raw;
  const auto order = ranked(raw.entries);
  const std::size_t m = order.size();
  for (std::size_t r = 0; r < m; ++r) {
    out.entries[order[r]] =
        m == 1 ? 1.0
               : 1.0 - static_cast<double>(r) / static_cast<double>(m - 1);
  }
  out.anchors[std::string(kAnchorReference)] = 1.0;
  out.normalized = true;
  out.rank_fallback = true;
  return out;
}

AttributionMap normalize_bio(const AttributionMap& raw) {
  auto full = raw.anchors.find(std::string(kAnchorFull));
  auto none = raw.anchors.find(std::string(kAnchorNoTargets));
  if (full == raw.anchors.end() || none == raw.anchors.end()) {
    throw Error("bio map lacks its anchor evaluations");
  }
  const double a1 = full->second;
  const double a0 = none->second;
  if (a1 == a0) {
    throw DegenerateInstance("relation indistinguishable: bio anchors are equal");
  }
  // A decreasing transform would invert the ranking.
  if (a1 < a0) {
    throw DegenerateInstance(
        "full sentence scores below the sentence without entities");
  }
  auto affine = [&](double v) { return (v - a0) / (a1 - a0); };
  AttributionMap out = raw;
  for (auto& [i, v] : out.entries) v = affine(v);
  out.anchors[std::string(kAnchorFull)] = affine(a1);
  out.anchors[std::string(kAnchorNoTargets)] = affine(a0);
  out.normalized = true;
  return out;
}

std::size_t default_keyword_count(std::size_t candidates) {
  const auto quarter = static_cast<std::size_t>(
      std::ceil(0.25 * static_cast<double>(candidates)));
  return std::max<std::size_t>(3, quarter);
}

KeywordSet select_keywords(const AttributionMap& lexicon,
                           const AttributionMap& bio, std::size_t n) {
  if (n < 1) throw Error("keyword count must be at least 1");
  KeywordSet out;
  out.n = n;
  for (const auto& [i, lv] : lexicon.entries) {
    if (auto it = bio.entries.find(i); it != bio.entries.end()) {
      out.combined[i] = (lv + it->second) / 2.0;
    }
  }

  auto top_pool = [&](const AttributionMap& map) {
    auto order = ranked(map.entries);
    if (order.size() > 2 * n) order.resize(2 * n);
    return order;
  };
  const auto lex_pool = top_pool(lexicon);
  const auto bio_pool = top_pool(bio);

  std::map<std::size_t, double> common;
  for (std::size_t i : lex_pool) {
    if (std::find(bio_pool.begin(), bio_pool.end(), i) != bio_pool.end() &&
        out.combined.count(i)) {
      common[i] = out.combined.at(i);
    }
  }
  std::vector<std::size_t> chosen = ranked(common);
  if (chosen.size() > n) chosen.resize(n);
  if (chosen.size() < n) {
    for (std::size_t i : ranked(out.combined)) {
      if (chosen.size() == n) break;
      if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
        chosen.push_back(i);
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  out.indices = std::move(chosen);
  return out;
}

namespace {

nlohmann::json map_json(const std::vector<std::string>& sentence,
                        const AttributionMap& map) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [i, v] : map.entries) {
    entries.push_back({{"index", i}, {"token", sentence.at(i)}, {"value", v}});
  }
  return {{"normalized", map.normalized},
          {"rank_fallback", map.rank_fallback},
          {"anchors", map.anchors},
          {"entries", std::move(entries)}};
}

}  // namespace

nlohmann::json attribution_report(const std::vector<std::string>& sentence,
                                  const AttributionMap& lexicon,
                                  const AttributionMap& bio,
                                  const KeywordSet& keywords) {
  nlohmann::json spans = nlohmann::json::array();
  for (const auto& s : lexicon.target.spans) spans.push_back({s.start, s.end});
  nlohmann::json combined = nlohmann::json::array();
  for (const auto& [i, v] : keywords.combined) {
    combined.push_back({{"index", i}, {"value", v}});
  }
  return {{"tokens", sentence},
          {"target",
           {{"spans", std::move(spans)},
            {"restriction_text", lexicon.target.restriction_text}}},
          {"lexicon", map_json(sentence, lexicon)},
          {"bio", map_json(sentence, bio)},
          {"keywords",
           {{"n", keywords.n},
            {"indices", keywords.indices},
            {"combined", std::move(combined)}}}};
}

}  // namespace bioaug
