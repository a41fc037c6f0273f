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

#include "bioaug/reflection.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bioaug/attribution.h"
#include "bioaug/corpus.h"
#include "bioaug/hashing.h"
#include "bioaug/prompts.h"
#include "text_util.h"

namespace bioaug {

namespace {

using internal::to_lower;
using internal::trim;

constexpr std::string_view kTopic =
    "whether the augmented sentence keeps the biomedical meaning, entities "
    "and relation of the original sentence";

constexpr std::string_view kRetryNote =
    "\n\nYour previous answer could not be parsed. Reply again and follow the "
    "Required Answer Format exactly.";

std::string fenced(std::string_view lines) {
  return "Reply with a fenced block and nothing else:\n```answer\n" +
         std::string(lines) + "\n```";
}

// Lowercased, re-tokenized form used for substring and entity checks.
std::string normalized(std::string_view text) {
  std::vector<std::string> toks;
  for (auto& t : tokenize(text)) toks.push_back(to_lower(t.text));
  return " " + join_tokens(toks) + " ";
}

bool contains_normalized(std::string_view haystack, std::string_view needle) {
  const std::string n = normalized(needle);
  if (n == "  ") return true;
  return normalized(haystack).find(n) != std::string::npos;
}

std::vector<std::string> split_fields(std::string_view body) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = body.find("||", pos);
    out.emplace_back(trim(body.substr(pos, next == std::string_view::npos
                                               ? std::string_view::npos
                                               : next - pos)));
    if (next == std::string_view::npos) return out;
    pos = next + 2;
  }
}

// Returns the text after "TAG:" when `line` carries the tag.
std::optional<std::string_view> tagged(std::string_view line,
                                       std::string_view tag) {
  line = trim(line);
  if (line.size() <= tag.size() || !line.starts_with(tag) ||
      line[tag.size()] != ':') {
    return std::nullopt;
  }
  return trim(line.substr(tag.size() + 1));
}

std::uint64_t call_seed(std::uint64_t seed, std::string_view what,
                        int attempt) {
  return derive_seed(seed, std::string(what) + "#" + std::to_string(attempt));
}

ChatRequest make_request(const std::string& rendered, PromptPurpose purpose,
                         std::uint64_t seed,
                         std::map<std::string, std::string> context) {
  auto parts = split_prompt(rendered);
  ChatRequest req;
  req.system = std::move(parts.system);
  req.user = std::move(parts.user);
  req.seed = seed;
  req.purpose = purpose;
  req.context = std::move(context);
  return req;
}

std::string quote(std::string_view s) {
  return "‘" + std::string(s) + "’";
}

std::optional<Aspect> parse_aspect(std::string_view name) {
  std::string key = to_lower(trim(name));
  std::replace(key.begin(), key.end(), ' ', '_');
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "word_definition") return Aspect::kWordDefinition;
  if (key == "word_similarity" || key == "word_word_similarity") {
    return Aspect::kWordSimilarity;
  }
  if (key == "syntax_correctness") return Aspect::kSyntaxCorrectness;
  if (key == "usage_example" || key == "using_example" ||
      key == "word_examples" || key == "word_example") {
    return Aspect::kUsageExample;
  }
  return std::nullopt;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  // Tolerate "85/100" and "85%".
  const auto cut = s.find_first_of("/%");
  if (cut != std::string_view::npos) s = trim(s.substr(0, cut));
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

std::string_view to_string(PromptPurpose purpose) {
  switch (purpose) {
    case PromptPurpose::kDiscrepancy: return "discrepancy";
    case PromptPurpose::kElaborate: return "elaborate";
    case PromptPurpose::kRevise: return "revise";
    case PromptPurpose::kGrade: return "grade";
    case PromptPurpose::kOther: return "other";
  }
  return "?";
}

std::string_view to_string(Aspect aspect) {
  switch (aspect) {
    case Aspect::kWordDefinition: return "word_definition";
    case Aspect::kWordSimilarity: return "word_similarity";
    case Aspect::kSyntaxCorrectness: return "syntax_correctness";
    case Aspect::kUsageExample: return "usage_example";
  }
  return "?";
}

std::size_t select_judge(std::size_t n, std::mt19937_64& rng) {
  if (n < 2) {
    throw Error("debate requires a judge and at least one reviewer");
  }
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::vector<std::string> answer_lines(std::string_view response) {
  std::string_view body = response;
  const auto open = response.find("```answer");
  if (open != std::string_view::npos) {
    auto start = response.find('\n', open);
    if (start != std::string_view::npos) {
      ++start;
      const auto close = response.find("```", start);
      body = response.substr(start, close == std::string_view::npos
                                        ? std::string_view::npos
                                        : close - start);
    }
  }
  std::vector<std::string> out;
  for (auto line : internal::split_lines(body)) {
    line = trim(line);
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

std::vector<DiscrepancyReview> review_discrepancies(
    AgentBackend& judge, std::string_view original, std::string_view augmented,
    std::uint64_t seed, std::size_t* dropped_lines) {
  if (dropped_lines) *dropped_lines = 0;
  if (original == augmented) return {};

  const std::string topic = "the greatest discrepancies between the original "
                            "sentence " + quote(original) +
                            " and the augmented sentence " + quote(augmented);
  const std::string format = fenced(
      "DISCREPANCY: <fragment of the original> || <fragment of the augmented> "
      "|| <where it occurs>\n(one line per discrepancy, greatest first)");
  const std::string rendered = render_prompt(
      PromptTemplate::kDebateInitial,
      {{"topic", topic}, {"answer_format", format}});

  for (int attempt = 0; attempt < 2; ++attempt) {
    auto req = make_request(
        attempt == 0 ? rendered : rendered + std::string(kRetryNote),
        PromptPurpose::kDiscrepancy, call_seed(seed, "discrepancy", attempt),
        {{"original", std::string(original)},
         {"augmented", std::string(augmented)}});
    const std::string response = judge.chat(req);
    std::vector<DiscrepancyReview> out;
    std::size_t dropped = 0;
    for (const auto& line : answer_lines(response)) {
      auto body = tagged(line, "DISCREPANCY");
      if (!body) continue;
      auto fields = split_fields(*body);
      if (fields.size() < 2 || fields.size() > 3 ||
          (fields[0].empty() && fields[1].empty()) ||
          !contains_normalized(original, fields[0]) ||
          !contains_normalized(augmented, fields[1])) {
        ++dropped;
        continue;
      }
      out.push_back(DiscrepancyReview{fields[0], fields[1],
                                      fields.size() == 3 ? fields[2] : ""});
    }
    if (dropped_lines) *dropped_lines += dropped;
    if (!out.empty()) return out;
  }
  throw ParseError("judge '" + judge.id() +
                   "' returned no parseable discrepancy review");
}

std::vector<AspectReview> elaborate(AgentBackend& reviewer,
                                    const DiscrepancyReview& discrepancy,
                                    std::string_view original,
                                    std::string_view augmented,
                                    std::uint64_t seed) {
  std::string prompt = render_prompt(
      PromptTemplate::kDistinguish,
      {{"original", std::string(original)},
       {"augmented", std::string(augmented)}});
  prompt += "\n\nDiscrepancy under review: " +
            quote(discrepancy.original_fragment) + " was changed to " +
            quote(discrepancy.augmented_fragment);
  if (!discrepancy.locus.empty()) prompt += " (" + discrepancy.locus + ")";
  prompt += ".\nFor each aspect, state whether this amendment is reasonable.";
  prompt += "\n\nRequired Answer Format:\n" +
            fenced("ASPECT: word_definition || reasonable|unreasonable || "
                   "<rationale>\n"
                   "ASPECT: word_similarity || reasonable|unreasonable || "
                   "<rationale>\n"
                   "ASPECT: syntax_correctness || reasonable|unreasonable || "
                   "<rationale>\n"
                   "ASPECT: usage_example || reasonable|unreasonable || "
                   "<rationale>");

  std::string missing;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto req = make_request(
        attempt == 0 ? prompt : prompt + std::string(kRetryNote),
        PromptPurpose::kElaborate, call_seed(seed, "elaborate", attempt),
        {{"original", std::string(original)},
         {"augmented", std::string(augmented)},
         {"original_fragment", discrepancy.original_fragment},
         {"augmented_fragment", discrepancy.augmented_fragment}});
    const std::string response = reviewer.chat(req);
    std::map<Aspect, AspectReview> found;
    for (const auto& line : answer_lines(response)) {
      auto body = tagged(line, "ASPECT");
      if (!body) continue;
      auto fields = split_fields(*body);
      if (fields.size() < 2) continue;
      auto aspect = parse_aspect(fields[0]);
      const std::string verdict = to_lower(fields[1]);
      if (!aspect || found.count(*aspect)) continue;
      if (verdict != "reasonable" && verdict != "unreasonable") continue;
      found[*aspect] = AspectReview{
          *aspect,
          verdict == "reasonable" ? Verdict::kReasonable : Verdict::kUnreasonable,
          fields.size() > 2 ? fields[2] : "", reviewer.id()};
    }
    missing.clear();
    for (Aspect a : kAllAspects) {
      if (!found.count(a)) {
        missing = std::string(to_string(a));
        break;
      }
    }
    if (missing.empty()) {
      std::vector<AspectReview> out;
      for (Aspect a : kAllAspects) out.push_back(found.at(a));
      return out;
    }
  }
  throw ParseError("reviewer '" + reviewer.id() + "' omitted aspect '" +
                   missing + "'");
}

namespace {

std::string render_reviews(const std::vector<ReviewerSet>& reviews) {
  std::string out;
  for (const auto& set : reviews) {
    for (const auto& r : set.reviews) {
      if (!out.empty()) out += ' ';
      out += set.reviewer_id + " on " + std::string(to_string(r.aspect)) +
             ": " +
             (r.verdict == Verdict::kReasonable ? "reasonable"
                                                : "unreasonable");
      if (!r.rationale.empty()) out += " (" + r.rationale + ")";
      out += ';';
    }
  }
  return out;
}

bool keeps_contract(std::string_view sentence,
                    const std::vector<std::string>& entity_surfaces) {
  for (const auto& t : tokenize(sentence)) {
    if (t.text == kMaskSentinel) return false;
  }
  if (sentence.find(kMaskSentinel) != std::string_view::npos) return false;
  const std::string haystack = " " + join_tokens([&] {
    std::vector<std::string> v;
    for (auto& t : tokenize(sentence)) v.push_back(t.text);
    return v;
  }()) + " ";
  for (const auto& e : entity_surfaces) {
    if (haystack.find(" " + e + " ") == std::string::npos) return false;
  }
  return true;
}

}  // namespace

Revision revise(AgentBackend& judge, std::string_view original,
                std::string_view augmented,
                const std::vector<ReviewerSet>& reviews,
                const std::vector<std::string>& entity_surfaces,
                std::uint64_t seed) {
  const std::string format =
      "Refine the augmented sentence " + quote(augmented) +
      " so that it stays faithful to the original sentence " +
      quote(original) + ". Keep every entity unchanged.\n" +
      fenced("REVISED: <the refined augmented sentence>");
  const std::string rendered = render_prompt(
      PromptTemplate::kDebateRevision,
      {{"reviews", render_reviews(reviews)}, {"answer_format", format}});

  for (int attempt = 0; attempt < 2; ++attempt) {
    auto req = make_request(
        attempt == 0 ? rendered : rendered + std::string(kRetryNote),
        PromptPurpose::kRevise, call_seed(seed, "revise", attempt),
        {{"original", std::string(original)},
         {"augmented", std::string(augmented)}});
    for (const auto& line : answer_lines(judge.chat(req))) {
      auto body = tagged(line, "REVISED");
      if (!body || body->empty()) continue;
      if (!keeps_contract(*body, entity_surfaces)) {
        return Revision{std::string(augmented), true};
      }
      return Revision{std::string(*body), false};
    }
  }
  return Revision{std::string(augmented), true};
}

Grade grade(AgentBackend& grader, std::string_view original,
            std::string_view augmented, std::size_t iteration,
            std::uint64_t seed) {
  const std::string format =
      "Grade how acceptable the augmented sentence is as a faithful "
      "replacement of the original sentence " + quote(original) +
      ", from 0 (unacceptable) to 100 (fully acceptable).\n" +
      fenced("GRADE: <integer from 0 to 100>");
  const std::string rendered = render_prompt(
      PromptTemplate::kDebateReview,
      {{"topic", std::string(kTopic)},
       {"initial_statement", std::string(augmented)},
       {"answer_format", format}});
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto req = make_request(
        attempt == 0 ? rendered : rendered + std::string(kRetryNote),
        PromptPurpose::kGrade, call_seed(seed, "grade", attempt),
        {{"original", std::string(original)},
         {"augmented", std::string(augmented)},
         {"iteration", std::to_string(iteration)}});
    for (const auto& line : answer_lines(grader.chat(req))) {
      auto body = tagged(line, "GRADE");
      if (!body) continue;
      if (auto v = parse_number(*body)) {
        return Grade{std::clamp(*v / 100.0, 0.0, 1.0), grader.id(), iteration};
      }
    }
  }
  throw ParseError("grader '" + grader.id() + "' returned no parseable grade");
}

DebateResult run_debate(const DebateSubject& subject,
                        const std::vector<AgentBackend*>& agents,
                        const DebateConfig& config, std::uint64_t seed) {
  if (agents.size() < 2) {
    throw Error("debate requires a judge and at least one reviewer");
  }
  if (!(config.sigma > 0.0 && config.sigma <= 1.0)) {
    throw Error("sigma must lie in (0, 1]");
  }
  if (config.max_iters < 1) throw Error("max_iters must be at least 1");

  DebateTranscript t;
  t.original = subject.original;
  t.initial_augmented = subject.augmented;
  std::string current = subject.augmented;
  std::mt19937_64 rng(seed);

  for (std::size_t it = 1; it <= config.max_iters; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    const std::string iter_key = "iter" + std::to_string(it);
    try {
      rec.judge_index = select_judge(agents.size(), rng);
      AgentBackend& judge = *agents[rec.judge_index];
      rec.judge_id = judge.id();
      rec.discrepancies = review_discrepancies(
          judge, subject.original, current,
          derive_seed(seed, iter_key + "/judge"), &rec.dropped_lines);

      for (std::size_t a = 0; a < agents.size(); ++a) {
        if (a == rec.judge_index) continue;
        ReviewerSet set{agents[a]->id(), {}};
        for (std::size_t d = 0; d < rec.discrepancies.size(); ++d) {
          auto reviews = elaborate(
              *agents[a], rec.discrepancies[d], subject.original, current,
              derive_seed(seed, iter_key + "/review/" + std::to_string(a) +
                                    "/" + std::to_string(d)));
          set.reviews.insert(set.reviews.end(), reviews.begin(), reviews.end());
        }
        rec.aspect_reviews.push_back(std::move(set));
      }

      const bool any_review = std::any_of(
          rec.aspect_reviews.begin(), rec.aspect_reviews.end(),
          [](const ReviewerSet& s) { return !s.reviews.empty(); });
      if (any_review) {
        auto revision = revise(judge, subject.original, current,
                               rec.aspect_reviews, subject.entity_surfaces,
                               derive_seed(seed, iter_key + "/revise"));
        current = revision.sentence;
        rec.revision_noop = revision.noop;
      } else {
        rec.revision_noop = true;
      }
      rec.revised = current;

      double sum = 0.0;
      for (std::size_t a = 0; a < agents.size(); ++a) {
        if (a == rec.judge_index) continue;
        rec.grades.push_back(grade(*agents[a], subject.original, current, it,
                                   derive_seed(seed, iter_key + "/grade/" +
                                                         std::to_string(a))));
        sum += rec.grades.back().value;
      }
      rec.acceptance = sum / static_cast<double>(rec.grades.size());
    } catch (const Error& e) {
      t.final_sentence = current;
      throw DebateAborted(std::string("debate aborted: ") + e.what(),
                          std::move(t));
    }
    t.iterations.push_back(std::move(rec));
    if (t.iterations.back().acceptance > config.sigma) {
      t.outcome = DebateOutcome::kAccepted;
      break;
    }
  }
  t.final_sentence = current;
  return DebateResult{std::move(t)};
}

std::unique_ptr<AgentBackend> make_agreeable_agent(std::string id, int grade) {
  return std::make_unique<ScriptedAgent>(
      std::move(id), [grade](const ChatRequest& req) -> std::string {
        auto get = [&](const char* key) {
          auto it = req.context.find(key);
          return it == req.context.end() ? std::string() : it->second;
        };
        switch (req.purpose) {
          case PromptPurpose::kDiscrepancy: {
            auto a = tokenize(get("original"));
            auto b = tokenize(get("augmented"));
            std::size_t lo = 0;
            while (lo < a.size() && lo < b.size() && a[lo].text == b[lo].text) {
              ++lo;
            }
            std::size_t ea = a.size(), eb = b.size();
            while (ea > lo && eb > lo && a[ea - 1].text == b[eb - 1].text) {
              --ea, --eb;
            }
            auto piece = [](const std::vector<Token>& t, std::size_t from,
                            std::size_t to) {
              std::vector<std::string> v;
              for (std::size_t i = from; i < to; ++i) v.push_back(t[i].text);
              return join_tokens(v);
            };
            return "```answer\nDISCREPANCY: " + piece(a, lo, ea) + " || " +
                   piece(b, lo, eb) + " || token " + std::to_string(lo) +
                   "\n```";
          }
          case PromptPurpose::kElaborate:
            return "```answer\n"
                   "ASPECT: word_definition || reasonable || consistent\n"
                   "ASPECT: word_similarity || reasonable || consistent\n"
                   "ASPECT: syntax_correctness || reasonable || consistent\n"
                   "ASPECT: usage_example || reasonable || consistent\n"
                   "```";
          case PromptPurpose::kRevise:
            return "```answer\nREVISED: " + get("augmented") + "\n```";
          case PromptPurpose::kGrade:
            return "```answer\nGRADE: " + std::to_string(grade) + "\n```";
          case PromptPurpose::kOther:
            break;
        }
        return "```answer\nSTATEMENT: no opinion\n```";
      });
}

nlohmann::json to_json(const DebateTranscript& t) {
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& r : t.iterations) {
    nlohmann::json discrepancies = nlohmann::json::array();
    for (const auto& d : r.discrepancies) {
      discrepancies.push_back({{"original", d.original_fragment},
                               {"augmented", d.augmented_fragment},
                               {"locus", d.locus}});
    }
    nlohmann::json reviews = nlohmann::json::array();
    for (const auto& set : r.aspect_reviews) {
      nlohmann::json items = nlohmann::json::array();
      for (const auto& a : set.reviews) {
        items.push_back(
            {{"aspect", to_string(a.aspect)},
             {"verdict",
              a.verdict == Verdict::kReasonable ? "reasonable" : "unreasonable"},
             {"rationale", a.rationale}});
      }
      reviews.push_back({{"reviewer", set.reviewer_id}, {"reviews", items}});
    }
    nlohmann::json grades = nlohmann::json::array();
    for (const auto& g : r.grades) {
      grades.push_back({{"grader", g.grader_id}, {"value", g.value}});
    }
    iters.push_back({{"iteration", r.iteration},
                     {"judge_index", r.judge_index},
                     {"judge", r.judge_id},
                     {"discrepancies", discrepancies},
                     {"dropped_lines", r.dropped_lines},
                     {"aspect_reviews", reviews},
                     {"revised", r.revised},
                     {"revision_noop", r.revision_noop},
                     {"grades", grades},
                     {"acceptance", r.acceptance}});
  }
  return {{"original", t.original},
          {"initial_augmented", t.initial_augmented},
          {"outcome",
           t.outcome == DebateOutcome::kAccepted ? "accepted" : "exhausted"},
          {"final_sentence", t.final_sentence},
          {"iterations", iters}};
}

}  // namespace bioaug
