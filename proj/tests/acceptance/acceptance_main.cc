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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// fails. Oracles live in test_util.h and never call the code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bioaug/attribution.h"
#include "bioaug/error.h"
#include "bioaug/generation.h"
#include "bioaug/masked_template.h"
#include "bioaug/metrics.h"
#include "bioaug/mocks.h"
#include "bioaug/pipeline.h"
#include "bioaug/prompts.h"
#include "bioaug/reflection.h"
#include "cli.h"
#include "test_util.h"

namespace bioaug {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the first few failure messages of a check.
struct Check {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    ++failures;
    if (notes.size() < 5) notes.push_back(what);
  }
};

int g_failed = 0;

void report(const std::string& name, const Check& c, const std::string& extra) {
  const bool ok = c.failures == 0 && c.cases > 0;
  if (!ok) ++g_failed;
  std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << c.cases - c.failures
            << "/" << c.cases << " checks" << (extra.empty() ? "" : ", ")
            << extra << ")\n";
  for (const auto& n : c.notes) std::cout << "     - " << n << "\n";
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

// --- leave-one-out oracle --------------------------------------------------

void loo_oracle() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<std::size_t> len(3, 12);
  std::size_t sentences = 0;
  for (int trial = 0; trial < 240; ++trial) {
    const std::size_t L = len(rng);
    const std::size_t ents = 1 + trial % 2;
    auto inst = testing::random_instance(rng, L, ents);
    std::vector<Span> spans;
    std::size_t covered = 0;
    for (const auto& e : inst.entities) {
      spans.push_back(e.span);
      covered += e.span.length();
    }
    if (covered >= L) continue;
    ++sentences;
    std::unique_ptr<MockScorer> lex, bio;
    switch (trial % 3) {
      case 0:
        lex = make_additive_scorer(ScorerKind::kTaskLogit, 0.5 + trial % 5);
        bio = make_additive_scorer(ScorerKind::kInferenceRelativity, 0.3);
        break;
      case 1:
        lex = make_pair_bonus_scorer(trial, ScorerKind::kTaskLogit, 2.0);
        bio = make_relativity_scorer(trial, 1.5);
        break;
      default:
        lex = make_constant_scorer(trial * 0.1, ScorerKind::kTaskLogit);
        bio = make_constant_scorer(-1.0, ScorerKind::kInferenceRelativity);
    }
    const std::string r = "one drug changes the levels of the other drug";
    const auto got_lex = attr_lexicon(inst.tokens, {spans, ""}, *lex);
    const auto want_lex = testing::brute_force_map(inst.tokens, spans, *lex, "");
    const auto got_bio = attr_bio(inst.tokens, {spans, r}, *bio);
    const auto want_bio = testing::brute_force_map(inst.tokens, spans, *bio, r);
    c.expect(got_lex.entries.size() == want_lex.entries.size() &&
                 got_bio.entries.size() == want_bio.entries.size(),
             "candidate sets differ at trial " + std::to_string(trial));
    for (const auto& [i, v] : want_lex.entries) {
      c.expect(got_lex.entries.count(i) && std::abs(got_lex.entries.at(i) - v) <= 1e-9,
               "lexicon entry " + std::to_string(i) + " trial " + std::to_string(trial));
    }
    for (const auto& [i, v] : want_bio.entries) {
      c.expect(got_bio.entries.count(i) && std::abs(got_bio.entries.at(i) - v) <= 1e-9,
               "bio entry " + std::to_string(i) + " trial " + std::to_string(trial));
    }
    c.expect(std::abs(got_bio.anchors.at("full_sentence") - want_bio.full) <= 1e-9 &&
                 std::abs(got_bio.anchors.at("without_targets") -
                          want_bio.without_targets) <= 1e-9,
             "bio anchors trial " + std::to_string(trial));
    if (spans.size() == 2) {
      c.expect(std::abs(pair_contribution(inst.tokens, spans[0], spans[1], *lex) -
                        testing::brute_force_pair(inst.tokens, spans[0], spans[1],
                                                  *lex)) <= 1e-9,
               "pair contribution trial " + std::to_string(trial));
    }
  }
  const double t = since(t0);
  c.expect(sentences >= 200, "only " + std::to_string(sentences) + " sentences");
  c.expect(t < 10.0, "runtime " + secs(t));
  report("loo-oracle-equivalence", c,
         std::to_string(sentences) + " sentences, " + secs(t));
}

// --- normalization ---------------------------------------------------------

std::vector<std::size_t> argsort(const AttributionMap& m) {
  std::vector<std::pair<std::size_t, double>> v(m.entries.begin(), m.entries.end());
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::size_t> out;
  for (const auto& [i, x] : v) out.push_back(i);
  return out;
}

void normalization() {
  Check c;
  const auto notions = load_notions(testing::data_dir() / "notions.tsv");
  auto lex = make_pair_bonus_scorer(0x6c6578, ScorerKind::kTaskLogit, 0.5);
  auto bio = make_relativity_scorer(0x62696f);
  std::size_t fixtures = 0, skipped = 0;
  for (const char* f : {"re_fixture.jsonl", "ner_fixture.jsonl", "tc_fixture.jsonl"}) {
    for (const auto& inst :
         load_dataset(testing::data_dir() / f, DatasetFormat::kCanonicalJsonl)) {
      AttributionResult r;
      try {
        r = attribute_instance(inst, notions, *lex, *bio, 0);
      } catch (const DegenerateInstance&) {
        ++skipped;
        continue;
      }
      if (r.lexicon.rank_fallback) {
        ++skipped;
        continue;
      }
      ++fixtures;
      c.expect(r.lexicon.anchors.at("reference") == 1.0, inst.id + " reference");
      if (inst.task != TaskType::kRe) {
        double mx = -1e300;
        for (const auto& [i, v] : r.lexicon.entries) mx = std::max(mx, v);
        c.expect(mx == 1.0, inst.id + " max lexicon entry != 1");
      }
      c.expect(r.bio.anchors.at("full_sentence") == 1.0 &&
                   r.bio.anchors.at("without_targets") == 0.0,
               inst.id + " bio anchors");
    }
  }
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> size(1, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    AttributionMap raw;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      // Rounded values so ties are exercised.
      raw.entries[static_cast<std::size_t>(i * 2)] = std::round(u(rng) * 4) / 4;
    }
    const double ref = 0.25 + std::abs(u(rng));
    const double a0 = u(rng);
    raw.anchors = {{"full_sentence", a0 + 0.1 + std::abs(u(rng))},
                   {"without_targets", a0}};
    const auto want = argsort(raw);
    c.expect(argsort(normalize_lexicon(raw, ref)) == want,
             "lexicon argsort trial " + std::to_string(trial));
    c.expect(argsort(normalize_bio(raw)) == want,
             "bio argsort trial " + std::to_string(trial));
  }
  c.expect(fixtures > 0, "no non-degenerate fixture");
  report("normalization-anchors", c,
         std::to_string(fixtures) + " fixtures, " + std::to_string(skipped) +
             " degenerate skipped, 1000 random maps");
}

// --- mask ------------------------------------------------------------------

void mask_correctness() {
  Check c;
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<std::size_t> len(2, 16);
  std::bernoulli_distribution coin(0.35);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t L = len(rng);
    auto inst = testing::random_instance(rng, L, 1 + trial % 3);
    std::vector<std::size_t> kw;
    for (std::size_t i = 0; i < L; ++i) {
      bool in_entity = false;
      for (const auto& e : inst.entities) in_entity |= e.span.contains(i);
      if (!in_entity && coin(rng)) kw.push_back(i);
    }
    const auto tmpl = build_masked_template(inst.tokens, kw, inst.entities);
    const auto rendered = render_template(tmpl);
    const auto inv = invert_template(parse_template(rendered), inst.tokens);
    bool spans_ok = inv.entity_spans.size() == inst.entities.size();
    for (std::size_t j = 0; spans_ok && j < inst.entities.size(); ++j) {
      spans_ok = inv.entity_spans[j] == inst.entities[j].span;
    }
    c.expect(inv.keywords == kw && spans_ok, "inversion trial " + std::to_string(trial));
    for (const auto& e : inst.entities) {
      const std::string marked = open_marker(e.entity_type) + " " + e.surface +
                                 " " + close_marker(e.entity_type);
      c.expect(rendered.find(marked) != std::string::npos,
               "marker missing for '" + e.surface + "'");
    }
  }
  report("mask-correctness", c, "500 triples");
}

// --- key structure ---------------------------------------------------------

void key_structure() {
  Check c;
  // Hand-computed token LCS / max length.
  const std::vector<std::tuple<std::string, std::string, double>> pairs = {
      {"a b c d", "a x c d", 0.75},
      {"a b c", "a b c", 1.0},
      {"a b", "c d", 0.0},
      {"a b c d", "b d", 0.5},
      {"a b c d e", "a b c d x", 0.8},
      {"x y z", "z y x", 1.0 / 3.0},
      {"a", "a b c d", 0.25},
      {"the dose of aspirin", "the dose of warfarin", 0.75},
      {"a b c d e f", "f e d c b a", 1.0 / 6.0},
      {"a a a", "a", 1.0 / 3.0},
      {"a b a b", "b a b a", 0.75},
      {"p q r s t", "q s", 0.4},
      {"one two three", "one three", 2.0 / 3.0},
      {"drug increases levels | mechanism", "drug increases levels", 0.6},
      {"a b c d e f g h", "a c e g", 0.5},
      {"x", "y", 0.0},
      {"a b c d e f g h i j", "a b c d e f g h i k", 0.9},
      {"m n o", "n", 1.0 / 3.0},
      {"k l m n", "k l m n o p q r", 0.5},
      {"a b c", "c b a b c", 0.6},
  };
  for (const auto& [a, b, want] : pairs) {
    c.expect(similarity(a, b) == want && similarity(b, a) == want,
             "lcs('" + a + "','" + b + "')");
  }

  const std::string target =
      "aspirin may strongly inhibit the hepatic metabolism of warfarin in adults";
  const std::vector<std::string> exemplars = {
      "ketoconazole may strongly inhibit the hepatic metabolism of midazolam in adults",
      "cimetidine may strongly inhibit the hepatic metabolism of theophylline in adults"};
  const std::string r = "mechanism";
  // Far proposals first, then a structure close to every source.
  const std::string close =
      "X may strongly inhibit the hepatic metabolism of Y in adults | mechanism";
  const std::vector<std::vector<std::string>> scripts = {
      {"drug", "may inhibit the metabolism of drug | mechanism", close},
      {"unrelated text", close},
      {close},
  };
  std::size_t accepted = 0;
  for (const auto& script : scripts) {
    ScriptedExtractor ex(script);
    const auto ks = extract_key_structure(target, exemplars, r, ex, 0.80, 5);
    if (!ks.best_effort) {
      ++accepted;
      c.expect(ks.min_similarity() > 0.80, "accepted with min <= 0.80");
      c.expect(ks.similarities.size() == exemplars.size() + 1, "similarity count");
    }
    c.expect(ks.rounds <= 5 && ex.calls() == ks.rounds, "rounds vs calls");
  }
  c.expect(accepted == scripts.size(), "a close structure was not accepted");
  for (std::size_t max_rounds = 1; max_rounds <= 4; ++max_rounds) {
    ScriptedExtractor ex({"nothing alike", "still nothing alike", "no"});
    const auto ks = extract_key_structure(target, exemplars, r, ex, 0.80, max_rounds);
    c.expect(ks.best_effort && ks.rounds == max_rounds && ex.calls() == max_rounds,
             "exhaustion at max_rounds " + std::to_string(max_rounds));
  }
  report("key-structure-loop", c, "20 LCS pairs");
}

// --- debate ----------------------------------------------------------------

std::unique_ptr<AgentBackend> scheduled(std::string id, std::vector<int> schedule) {
  auto inner = std::shared_ptr<AgentBackend>(make_agreeable_agent(id));
  return std::make_unique<ScriptedAgent>(
      id, [inner, schedule](const ChatRequest& req) {
        if (req.purpose != PromptPurpose::kGrade) return inner->chat(req);
        const auto it = std::stoul(req.context.at("iteration"));
        return testing::grade_reply(schedule[std::min(it, schedule.size()) - 1]);
      });
}

void debate_protocol() {
  Check c;
  struct Case {
    std::vector<int> schedule;
    double sigma;
    std::size_t max_iters;
    std::size_t agents;
  };
  const std::vector<Case> cases = {
      {{90}, 0.8, 5, 3},          {{50, 70, 90}, 0.8, 5, 3},
      {{80}, 0.8, 4, 2},          {{10, 20, 30, 40, 50, 60}, 0.55, 6, 4},
      {{100}, 1.0, 3, 3},         {{81}, 0.8, 5, 5},
      {{0, 0, 0, 95}, 0.9, 5, 3}, {{60, 61, 62}, 0.61, 3, 2},
      {{30}, 0.5, 1, 3},          {{79, 80, 81}, 0.8, 10, 6},
  };
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& cs = cases[k];
    // Oracle: first iteration whose grade exceeds sigma, else max_iters.
    std::size_t want_iters = cs.max_iters;
    bool want_accept = false;
    for (std::size_t i = 1; i <= cs.max_iters; ++i) {
      const double g = cs.schedule[std::min(i, cs.schedule.size()) - 1] / 100.0;
      if (g > cs.sigma) {
        want_iters = i;
        want_accept = true;
        break;
      }
    }
    std::vector<std::unique_ptr<AgentBackend>> owned;
    std::vector<AgentBackend*> agents;
    for (std::size_t a = 0; a < cs.agents; ++a) {
      owned.push_back(scheduled("agent-" + std::to_string(a), cs.schedule));
      agents.push_back(owned.back().get());
    }
    const DebateSubject subject{"Give a 5 mg dose of aspirin daily .",
                                "Give a 5 mg amount of aspirin daily .",
                                {"aspirin"}};
    const auto r = run_debate(subject, agents, {cs.sigma, cs.max_iters}, 1000 + k);
    const auto& t = r.transcript;
    const std::string tag = "schedule " + std::to_string(k);
    c.expect(t.iterations.size() == want_iters, tag + " iterations");
    c.expect(r.accepted() == want_accept, tag + " outcome");
    c.expect(t.iterations.size() <= cs.max_iters, tag + " exceeded max_iters");
    for (const auto& it : t.iterations) {
      const double g = cs.schedule[std::min(it.iteration, cs.schedule.size()) - 1] / 100.0;
      c.expect(std::abs(it.acceptance - g) <= 1e-12, tag + " acceptance");
      c.expect(it.grades.size() == cs.agents - 1 &&
                   it.aspect_reviews.size() == cs.agents - 1,
               tag + " per-iteration review/grade count");
    }
  }
  std::mt19937_64 rng(4242);
  const std::size_t n = 5, draws = 10000;
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t i = 0; i < draws; ++i) ++counts[select_judge(n, rng)];
  const double mean = static_cast<double>(draws) / n;
  const double sd = std::sqrt(draws * (1.0 / n) * (1.0 - 1.0 / n));
  std::ostringstream spread;
  for (std::size_t i = 0; i < n; ++i) {
    spread << (i ? "/" : "") << counts[i];
    c.expect(std::abs(counts[i] - mean) <= 3.3 * sd, "judge frequency");
  }
  report("debate-protocol", c, "10 schedules, judge counts " + spread.str());
}

// --- prompts ---------------------------------------------------------------

std::string golden(const std::string& name) {
  std::string s =
      testing::slurp(fs::path(BIOAUG_GOLDEN_DIR) / (name + ".txt"));
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

void prompt_fidelity() {
  Check c;
  const auto fmt = [](const char* tag) {
    return std::string("Answer with a single line starting with ") + tag + ":";
  };
  const std::string topic =
      "whether replacing \"dose\" with \"concentration\" keeps the clinical meaning";
  c.expect(render_prompt(PromptTemplate::kDebateInitial,
                         {{"topic", topic}, {"answer_format", fmt("STATEMENT")}}) ==
               golden("debate_initial"),
           "debate_initial");
  c.expect(render_prompt(PromptTemplate::kDebateReview,
                         {{"topic", topic},
                          {"initial_statement",
                           "\"dose\" refers to the amount given to a patient, "
                           "\"concentration\" to a laboratory measure."},
                          {"answer_format", fmt("REVIEW")}}) ==
               golden("debate_review"),
           "debate_review");
  c.expect(render_prompt(PromptTemplate::kDebateRevision,
                         {{"reviews",
                           "Agent 2: the swap changes the clinical setting. Agent "
                           "3: \"concentration\" implies an in vitro assay."},
                          {"answer_format", fmt("REVISED")}}) ==
               golden("debate_revision"),
           "debate_revision");
  c.expect(render_prompt(PromptTemplate::kTaskAnswer,
                         {{"task", "NER"},
                          {"sentence", "Patients received a 500 mg dose of aspirin daily."}}) ==
               golden("task_answer_ner"),
           "task_answer NER");
  c.expect(render_prompt(PromptTemplate::kTaskAnswer,
                         {{"task", "RE"},
                          {"sentence",
                           "Grepafloxacin may inhibit the metabolism of theobromine."}}) ==
               golden("task_answer_re"),
           "task_answer RE");
  c.expect(render_prompt(PromptTemplate::kTaskAnswer,
                         {{"task", "TC"},
                          {"sentence", "Loss of p53 lets tumour cells escape arrest."},
                          {"categories",
                           "sustaining proliferative signaling, evading growth "
                           "suppressors"}}) == golden("task_answer_tc"),
           "task_answer TC");
  c.expect(render_prompt(PromptTemplate::kTaskAnswer,
                         {{"task", "QA"},
                          {"passage", "Aspirin irreversibly inhibits cyclooxygenase."},
                          {"question", "Does aspirin inhibit cyclooxygenase?"}}) ==
               golden("task_answer_qa"),
           "task_answer QA");
  c.expect(render_prompt(PromptTemplate::kDistinguish,
                         {{"original", "Give a 5 mg dose of aspirin ."},
                          {"augmented", "Give a 5 mg concentration of aspirin ."}}) ==
               golden("distinguish"),
           "distinguish");
  c.expect(golden("debate_initial").find("You are the Lead Agent tasked") !=
                   std::string::npos &&
               golden("distinguish").find("distinguishing between augmented data "
                                          "and original data") != std::string::npos,
           "golden anchors");
  report("prompt-fidelity", c, "8 golden files");
}

// --- metrics ---------------------------------------------------------------

TaskInstance make(TaskType task, std::string id) {
  TaskInstance t;
  t.id = std::move(id);
  t.task = task;
  set_tokens(t, {"a", "b", "c", "d", "e", "f"});
  return t;
}

void metrics() {
  Check c;
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  c.expect(near(prf_from_counts(4, 1, 3).f1, 2.0 / 3.0), "F1(4,1,3) = 2/3");
  c.expect(near(prf_from_counts(4, 4, 3).f1, 8.0 / 15.0), "F1(4,4,3) = 8/15");

  // Entity-level: 3 gold, 3 predicted, 2 exact.
  auto g = make(TaskType::kNer, "n1"), p = g;
  g.entities = {{Span{0, 0}, "CHEM", "a"}, {Span{2, 3}, "DISEASE", "c d"},
                {Span{5, 5}, "CHEM", "f"}};
  p.entities = {{Span{0, 0}, "CHEM", "a"}, {Span{2, 2}, "DISEASE", "c"},
                {Span{5, 5}, "CHEM", "f"}};
  c.expect(near(compute_metrics({g}, {p}, TaskType::kNer).values.at("f1"), 2.0 / 3.0),
           "entity-level F1");

  // Micro F1 over positive labels: TP=4, FP=1, FN=3.
  Dataset gold, pred;
  const std::vector<std::pair<std::string, std::string>> re = {
      {"int", "int"},          {"effect", "effect"}, {"advise", "advise"},
      {"mechanism", "mechanism"}, {"false", "effect"}, {"int", "false"},
      {"effect", "false"},     {"advise", "none"}};
  for (std::size_t i = 0; i < re.size(); ++i) {
    auto a = make(TaskType::kRe, "r" + std::to_string(i));
    a.entities = {{Span{0, 0}, "DRUG", "a"}, {Span{2, 2}, "DRUG", "c"}};
    a.entity_pair = std::array<std::size_t, 2>{0, 1};
    auto b = a;
    a.relation = re[i].first;
    b.relation = re[i].second;
    gold.push_back(a);
    pred.push_back(b);
  }
  const auto m = compute_metrics(gold, pred, TaskType::kRe);
  c.expect(m.counts.at("tp") == 4 && m.counts.at("fp") == 1 && m.counts.at("fn") == 3,
           "micro counts 4/1/3");
  c.expect(near(m.values.at("f1"), 2.0 / 3.0), "micro F1");

  // Average (sample) micro F1: instance F1 2/3 and 1 -> 5/6.
  auto t1 = make(TaskType::kTc, "t1"), t2 = make(TaskType::kTc, "t2");
  t1.topics = {"x", "y"};
  t2.topics = {"z"};
  auto q1 = t1, q2 = t2;
  q1.topics = {"x"};
  c.expect(near(compute_metrics({t1, t2}, {q1, q2}, TaskType::kTc).values.at("f1"),
                5.0 / 6.0),
           "average micro F1");

  // Accuracy: 2 of 3.
  Dataset qg, qp;
  for (auto [gold_ans, pred_ans] : {std::pair{"yes", "Yes"}, {"no", "yes"},
                                    {"maybe", " maybe "}}) {
    auto a = make(TaskType::kQa, "q" + std::to_string(qg.size()));
    a.question = "q";
    a.answer = gold_ans;
    auto b = a;
    b.answer = pred_ans;
    qg.push_back(a);
    qp.push_back(b);
  }
  c.expect(near(compute_metrics(qg, qp, TaskType::kQa).values.at("accuracy"), 2.0 / 3.0),
           "accuracy");

  for (const char* f : {"re_fixture.jsonl", "ner_fixture.jsonl", "tc_fixture.jsonl"}) {
    const auto ds = load_dataset(testing::data_dir() / f, DatasetFormat::kCanonicalJsonl);
    c.expect(compute_metrics(ds, ds, ds.front().task).values.at("f1") == 1.0,
             std::string("perfect predictions on ") + f);
  }
  c.expect(compute_metrics(qg, qg, TaskType::kQa).values.at("accuracy") == 1.0,
           "perfect QA");
  report("metrics", c, "hand-computed fixtures to 1e-12");
  std::cout << "INFO metrics: counts TP=4, FP=1, FN=3 give micro F1 = 2/3; the "
               "8/15 value corresponds to TP=4, FP=4, FN=3. Both are checked.\n";
}

// --- end to end ------------------------------------------------------------

int run_tool(std::vector<std::string> args, std::string* err_text) {
  args.insert(args.begin(), "bioaug");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

void end_to_end() {
  Check c;
  const auto dir = testing::fresh_dir("acceptance-e2e");
  const auto input = testing::data_dir() / "re_fixture.jsonl";
  double full_run = 0.0;
  for (const char* p : {"0", "0.5", "1"}) {
    std::string first_out, first_report;
    for (int run = 0; run < 3; ++run) {
      const auto out = dir / ("out-" + std::string(p) + "-" + std::to_string(run) + ".jsonl");
      const auto rep = dir / ("report-" + std::string(p) + "-" + std::to_string(run) + ".json");
      std::string err;
      const auto t0 = Clock::now();
      const int code = run_tool({"augment", "--dataset", input.string(), "--notions",
                                 (testing::data_dir() / "notions.tsv").string(),
                                 "--mock-generator", "synonym", "--seed", "13",
                                 "--proportion", p, "--output", out.string(),
                                 "--report", rep.string()},
                                &err);
      if (std::string(p) == "1") full_run = std::max(full_run, since(t0));
      c.expect(code == 0, std::string("exit code at proportion ") + p + ": " + err);
      const auto o = testing::slurp(out), r = testing::slurp(rep);
      if (run == 0) {
        first_out = o;
        first_report = r;
      } else {
        c.expect(o == first_out && r == first_report,
                 std::string("bytes differ at proportion ") + p);
      }
    }
    const auto lines = std::count(first_out.begin(), first_out.end(), '\n');
    const long want_lines = 10 + static_cast<long>(std::stod(p) * 10);
    c.expect(lines == want_lines, std::string("output size at proportion ") + p);
    if (std::string(p) == "0") {
      const auto in = load_dataset(input, DatasetFormat::kCanonicalJsonl);
      c.expect(parse_dataset(first_out, DatasetFormat::kCanonicalJsonl) == in &&
                   first_out == serialize_dataset(in),
               "proportion 0 output differs from input");
    }
  }
  c.expect(full_run < 30.0, "full run " + secs(full_run));
  report("end-to-end-determinism", c,
         "3 runs x proportion {0, 0.5, 1}, full run " + secs(full_run));
}

}  // namespace
}  // namespace bioaug

int main() {
  using namespace bioaug;
  const std::vector<std::pair<const char*, std::function<void()>>> checks = {
      {"loo-oracle-equivalence", loo_oracle},
      {"normalization-anchors", normalization},
      {"mask-correctness", mask_correctness},
      {"key-structure-loop", key_structure},
      {"debate-protocol", debate_protocol},
      {"prompt-fidelity", prompt_fidelity},
      {"metrics", metrics},
      {"end-to-end-determinism", end_to_end},
  };
  for (const auto& [name, fn] : checks) {
    try {
      fn();
    } catch (const std::exception& e) {
      ++g_failed;
      std::cout << "FAIL " << name << " (exception: " << e.what() << ")\n";
    }
  }
  std::cout << (g_failed == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(g_failed))
            << "\n";
  return g_failed == 0 ? 0 : 1;
}
