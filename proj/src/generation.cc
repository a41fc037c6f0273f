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

#include "bioaug/generation.h"

#include <algorithm>
#include <random>
#include <set>

#include "bioaug/error.h"
#include "bioaug/hashing.h"
#include "text_util.h"

namespace bioaug {

double similarity(std::string_view a, std::string_view b) {
  const auto ta = tokenize(a);
  const auto tb = tokenize(b);
  if (ta.empty() && tb.empty()) return 1.0;
  if (ta.empty() || tb.empty()) return 0.0;
  std::vector<std::size_t> prev(tb.size() + 1, 0), cur(tb.size() + 1, 0);
  for (std::size_t i = 1; i <= ta.size(); ++i) {
    for (std::size_t j = 1; j <= tb.size(); ++j) {
      cur[j] = ta[i - 1].text == tb[j - 1].text
                   ? prev[j - 1] + 1
                   : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[tb.size()]) /
         static_cast<double>(std::max(ta.size(), tb.size()));
}

std::string with_notion(std::string_view sentence, std::string_view notion) {
  std::string out(sentence);
  if (!notion.empty()) {
    out += " | ";
    out += notion;
  }
  return out;
}

std::string exemplar_label(const TaskInstance& inst) {
  switch (inst.task) {
    case TaskType::kRe:
      return "RE:" + inst.relation;
    case TaskType::kTc: {
      auto topics = inst.topics;
      std::sort(topics.begin(), topics.end());
      return "TC:" + join_tokens(topics);
    }
    case TaskType::kNer: {
      std::set<std::string> types;
      for (const auto& e : inst.entities) types.insert(e.entity_type);
      return "NER:" + join_tokens({types.begin(), types.end()});
    }
    case TaskType::kQa:
      return "QA";
  }
  return {};
}

namespace {

bool exact_match(const TaskInstance& a, const TaskInstance& b) {
  using internal::to_lower;
  if (a.task == TaskType::kRe && a.entity_pair && b.entity_pair) {
    const auto& [a1, a2] = *a.entity_pair;
    const auto& [b1, b2] = *b.entity_pair;
    return to_lower(a.entities[a1].surface) == to_lower(b.entities[b1].surface) &&
           to_lower(a.entities[a2].surface) == to_lower(b.entities[b2].surface);
  }
  if (a.task == TaskType::kNer) {
    for (const auto& ea : a.entities) {
      for (const auto& eb : b.entities) {
        if (to_lower(ea.surface) == to_lower(eb.surface)) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::vector<std::size_t> sample_similar(const Dataset& dataset,
                                        const TaskInstance& target,
                                        std::size_t k, std::uint64_t seed) {
  if (k < 1) throw Error("exemplar count k must be at least 1");
  const std::string label = exemplar_label(target);
  std::vector<std::size_t> exact, same_label;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& cand = dataset[i];
    if (cand.id == target.id || cand.task != target.task) continue;
    if (exemplar_label(cand) != label) continue;
    (exact_match(target, cand) ? exact : same_label).push_back(i);
  }
  if (exact.empty() && same_label.empty()) {
    throw Error("no structural exemplars for label '" + label + "'");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(exact.begin(), exact.end(), rng);
  std::shuffle(same_label.begin(), same_label.end(), rng);
  std::vector<std::size_t> out = std::move(exact);
  out.insert(out.end(), same_label.begin(), same_label.end());
  if (out.size() > k) out.resize(k);
  return out;
}

double KeyStructure::min_similarity() const {
  if (similarities.empty()) return 0.0;
  return *std::min_element(similarities.begin(), similarities.end());
}

KeyStructure extract_key_structure(std::string_view target_sentence,
                                   const std::vector<std::string>& exemplars,
                                   std::string_view restriction_text,
                                   ExtractorBackend& extractor,
                                   double threshold, std::size_t max_rounds,
                                   const SimilarityFn& sim) {
  if (exemplars.empty()) throw Error("key-structure extraction needs exemplars");
  if (max_rounds < 1) throw Error("max_rounds must be at least 1");

  ExtractRequest req;
  req.sources.push_back(with_notion(target_sentence, restriction_text));
  for (const auto& x : exemplars) {
    req.sources.push_back(with_notion(x, restriction_text));
  }

  KeyStructure best;
  bool have_best = false;
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    KeyStructure cur;
    try {
      cur.text = extractor.extract(req);
    } catch (const RetriableError&) {
      throw;
    } catch (const std::exception& e) {
      throw RetriableError("extractor '" + extractor.id() + "' failed: " +
                               e.what(),
                           {});
    }
    cur.rounds = round;
    req.failing_pairs.clear();
    for (std::size_t i = 0; i < req.sources.size(); ++i) {
      const double s = sim(cur.text, req.sources[i]);
      cur.similarities.push_back(s);
      if (!(s > threshold)) req.failing_pairs.push_back(FailingPair{i, s});
    }
    if (req.failing_pairs.empty()) return cur;
    if (!have_best || cur.min_similarity() > best.min_similarity()) {
      best = cur;
      have_best = true;
    }
  }
  best.rounds = max_rounds;
  best.best_effort = true;
  return best;
}

std::vector<EntityMention> marked_entities(const TaskInstance& inst) {
  switch (inst.task) {
    case TaskType::kRe:
      if (!inst.entity_pair) return {};
      return {inst.entities.at((*inst.entity_pair)[0]),
              inst.entities.at((*inst.entity_pair)[1])};
    case TaskType::kNer:
      return inst.entities;
    default:
      return {};
  }
}

namespace {

struct MarkedRegion {
  std::string type;
  Span span;
  bool used = false;
};

std::vector<std::string> split_surface(std::string_view surface) {
  std::vector<std::string> out;
  for (auto p : internal::split(surface, ' ')) {
    if (!p.empty()) out.emplace_back(p);
  }
  return out;
}

std::string span_surface_of(const std::vector<std::string>& tokens,
                            const Span& span) {
  return join_tokens({tokens.begin() + static_cast<std::ptrdiff_t>(span.start),
                      tokens.begin() + static_cast<std::ptrdiff_t>(span.end) + 1});
}

}  // namespace

AugCandidate parse_candidate(const std::vector<std::string>& output,
                             const MaskedTemplate& tmpl) {
  AugCandidate cand;
  std::vector<MarkedRegion> regions;
  std::optional<MarkedRegion> open;
  for (const auto& tok : output) {
    if (tok == tmpl.sentinel) {
      throw ContractViolation("generator output contains the mask sentinel");
    }
    if (tok.size() > 4 && tok.starts_with("<s:") && tok.back() == '>') {
      if (open) throw ContractViolation("nested entity marker in output");
      open = MarkedRegion{tok.substr(3, tok.size() - 4), Span{cand.tokens.size(), 0}};
      continue;
    }
    if (tok.size() > 5 && tok.starts_with("</s:") && tok.back() == '>') {
      if (!open || tok.substr(4, tok.size() - 5) != open->type ||
          cand.tokens.size() == open->span.start) {
        throw ContractViolation("unbalanced entity marker in output");
      }
      open->span.end = cand.tokens.size() - 1;
      regions.push_back(*open);
      open.reset();
      continue;
    }
    cand.tokens.push_back(tok);
  }
  if (open) throw ContractViolation("unclosed entity marker in output");

  for (const auto& ent : tmpl.entities) {
    std::optional<Span> found;
    for (auto& r : regions) {
      if (!r.used && r.type == ent.entity_type &&
          span_surface_of(cand.tokens, r.span) == ent.surface) {
        r.used = true;
        found = r.span;
        break;
      }
    }
    if (!found) {
      const auto surface = split_surface(ent.surface);
      std::vector<Span> hits;
      for (std::size_t p = 0; p + surface.size() <= cand.tokens.size(); ++p) {
        if (std::equal(surface.begin(), surface.end(),
                       cand.tokens.begin() + static_cast<std::ptrdiff_t>(p))) {
          hits.push_back(Span{p, p + surface.size() - 1});
        }
      }
      if (hits.empty()) {
        throw ContractViolation("generator output dropped entity '" +
                                ent.surface + "'");
      }
      if (hits.size() == 1) found = hits.front();
    }
    cand.entity_spans.push_back(found);
  }
  return cand;
}

AugCandidate generate_candidate(const TaskInstance& parent,
                                const MaskedTemplate& tmpl,
                                std::string_view restriction_text,
                                std::string_view key_structure,
                                GeneratorBackend& backend, std::uint64_t seed,
                                GenerationMeta meta) {
  InfillRequest req{tmpl, std::string(restriction_text),
                    std::string(key_structure), seed};
  std::vector<std::string> output;
  try {
    output = backend.infill(req);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw RetriableError("generator '" + backend.id() + "' failed: " + e.what(),
                         {});
  }
  AugCandidate cand = parse_candidate(output, tmpl);
  cand.parent_id = parent.id;
  meta.backend_id = backend.id();
  meta.seed = seed;
  cand.meta = std::move(meta);
  cand.trivial = cand.tokens == parent.token_texts();
  return cand;
}

TaskInstance project_labels(const TaskInstance& parent,
                            const AugCandidate& cand, std::string new_id) {
  const auto ents = marked_entities(parent);
  if (cand.entity_spans.size() != ents.size()) {
    throw Error("candidate entity count does not match the parent");
  }
  TaskInstance out;
  out.id = std::move(new_id);
  out.task = parent.task;
  out.relation = parent.relation;
  out.topics = parent.topics;
  out.question = parent.question;
  out.answer = parent.answer;
  out.parent_id = parent.id;
  set_tokens(out, cand.tokens);
  for (std::size_t j = 0; j < ents.size(); ++j) {
    if (!cand.entity_spans[j]) {
      throw Error("ambiguous span recovery for entity '" + ents[j].surface +
                  "'");
    }
    const Span span = *cand.entity_spans[j];
    out.entities.push_back(
        EntityMention{span, ents[j].entity_type, span_surface(out.tokens, span)});
  }
  if (out.task == TaskType::kRe) {
    out.entity_pair = std::array<std::size_t, 2>{0, 1};
  }
  if (auto report = validate_instance(out); !report.empty()) {
    throw Error("projected instance is invalid: " + report.front());
  }
  return out;
}

}  // namespace bioaug
