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

#include "bioaug/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cctype>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <omp.h>

#include "bioaug/error.h"
#include "bioaug/hashing.h"
#include "bioaug/mocks.h"
#include "bioaug/remote.h"
#include "text_util.h"

namespace bioaug {

namespace {

// Seeds of the offline scorers. They stand in for fixed model weights and
// therefore do not follow the run seed.
constexpr std::uint64_t kMockLexiconSeed = 0x6c6578;
constexpr std::uint64_t kMockBioSeed = 0x62696f;

std::vector<std::string> parameter_errors(const RunConfig& c) {
  std::vector<std::string> out;
  try {
    parse_format(c.dataset_format);
  } catch (const std::exception& e) {
    out.push_back(std::string("dataset_format: ") + e.what());
  }
  if (!c.task.empty()) {
    try {
      parse_task(c.task);
    } catch (const std::exception& e) {
      out.push_back(std::string("task: ") + e.what());
    }
  }
  if (c.backend != "mock" && c.backend != "http") {
    out.push_back("backend: expected mock or http, got '" + c.backend + "'");
  }
  if (c.backend == "http" && c.endpoint.empty()) {
    out.push_back("endpoint: required for the http backend");
  }
  if (c.mock_generator != "identity" && c.mock_generator != "synonym") {
    out.push_back("mock_generator: expected identity or synonym, got '" +
                  c.mock_generator + "'");
  }
  if (c.mock_grade < 0 || c.mock_grade > 100) {
    out.push_back("mock_grade: must lie in [0, 100]");
  }
  if (c.k < 1) out.push_back("k: must be at least 1");
  if (!(c.sigma > 0.0 && c.sigma <= 1.0)) {
    out.push_back("sigma: must lie in (0, 1]");
  }
  if (c.max_iters < 1) out.push_back("max_iters: must be at least 1");
  if (c.n_agents < 2) {
    out.push_back("n_agents: a judge and at least one reviewer are needed");
  }
  if (!(c.similarity_threshold >= 0.0 && c.similarity_threshold <= 1.0)) {
    out.push_back("similarity_threshold: must lie in [0, 1]");
  }
  if (c.max_rounds < 1) out.push_back("max_rounds: must be at least 1");
  if (!(c.proportion >= 0.0 && c.proportion <= 1.0)) {
    out.push_back("proportion: must lie in [0, 1]");
  }
  if (c.workers < 0) out.push_back("workers: must not be negative");
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string file_safe(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace

std::vector<std::string> validate_config(const RunConfig& config) {
  std::vector<std::string> out;
  if (config.dataset_path.empty()) out.push_back("dataset_path: required");
  bool qa = false;
  try {
    qa = !config.task.empty() && parse_task(config.task) == TaskType::kQa;
  } catch (const std::exception&) {
  }
  if (config.notions_path.empty() && !qa) {
    out.push_back("notions_path: required (label definitions)");
  }
  auto more = parameter_errors(config);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

nlohmann::ordered_json config_echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["dataset_path"] = c.dataset_path;
  j["dataset_format"] = c.dataset_format;
  j["notions_path"] = c.notions_path;
  j["task"] = c.task;
  j["backend"] = c.backend;
  if (c.backend == "http") {
    j["endpoint"] = c.endpoint;
  } else {
    j["mock_generator"] = c.mock_generator;
    j["mock_grade"] = c.mock_grade;
  }
  j["n"] = c.n;
  j["k"] = c.k;
  j["sigma"] = c.sigma;
  j["max_iters"] = c.max_iters;
  j["n_agents"] = c.n_agents;
  j["similarity_threshold"] = c.similarity_threshold;
  j["max_rounds"] = c.max_rounds;
  j["proportion"] = c.proportion;
  j["seed"] = c.seed;
  return j;
}

namespace {

// Counts calls that reach the model, below every cache layer.
class CallCounter final : public ScorerBackend {
 public:
  explicit CallCounter(ScorerBackend& inner) : inner_(inner) {}
  std::string id() const override { return inner_.id(); }
  ScorerKind kind() const override { return inner_.kind(); }
  double score(const ScoreRequest& request) override {
    ++calls_;
    return inner_.score(request);
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  ScorerBackend& inner_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace

struct BackendSet::Impl {
  std::unique_ptr<ScorerBackend> lexicon_base, bio_base;
  std::unique_ptr<CallCounter> lexicon_count, bio_count;
  std::unique_ptr<ScorerBackend> lexicon_cached, bio_cached;
  std::unique_ptr<MemoScorer> lexicon_memo, bio_memo;
  std::unique_ptr<GeneratorBackend> generator_base, generator_cached;
  std::unique_ptr<ExtractorBackend> extractor_base, extractor_cached;
  std::vector<std::unique_ptr<AgentBackend>> agents_base, agents_cached;
};

BackendSet::BackendSet(const RunConfig& config, const Dataset& dataset,
                       ResponseCache* cache)
    : impl_(std::make_unique<Impl>()) {
  auto& m = *impl_;
  if (config.backend == "http") {
    Endpoint ep{config.endpoint, config.api_key};
    m.lexicon_base = std::make_unique<HttpScorer>(ep, ScorerKind::kTaskLogit,
                                                  "http-lexicon");
    m.bio_base = std::make_unique<HttpScorer>(
        ep, ScorerKind::kInferenceRelativity, "http-bio");
    m.generator_base = std::make_unique<HttpGenerator>(ep);
    m.extractor_base = std::make_unique<HttpExtractor>(ep);
    for (std::size_t i = 0; i < config.n_agents; ++i) {
      m.agents_base.push_back(
          std::make_unique<HttpAgent>(ep, "agent-" + std::to_string(i + 1)));
    }
  } else {
    m.lexicon_base = make_pair_bonus_scorer(kMockLexiconSeed,
                                            ScorerKind::kTaskLogit, 0.5);
    m.bio_base = make_relativity_scorer(kMockBioSeed);
    if (config.mock_generator == "synonym") {
      m.generator_base =
          std::make_unique<SynonymInfill>(dataset, default_synonyms());
    } else {
      m.generator_base = std::make_unique<IdentityInfill>(dataset);
    }
    m.extractor_base = std::make_unique<EchoExtractor>();
    for (std::size_t i = 0; i < config.n_agents; ++i) {
      m.agents_base.push_back(make_agreeable_agent(
          "agent-" + std::to_string(i + 1), config.mock_grade));
    }
  }

  m.lexicon_count = std::make_unique<CallCounter>(*m.lexicon_base);
  m.bio_count = std::make_unique<CallCounter>(*m.bio_base);
  ScorerBackend* lex = m.lexicon_count.get();
  ScorerBackend* bio = m.bio_count.get();
  view_.generator = m.generator_base.get();
  view_.extractor = m.extractor_base.get();
  if (cache) {
    m.lexicon_cached = std::make_unique<CachedScorer>(*lex, *cache);
    m.bio_cached = std::make_unique<CachedScorer>(*bio, *cache);
    lex = m.lexicon_cached.get();
    bio = m.bio_cached.get();
    m.generator_cached =
        std::make_unique<CachedGenerator>(*view_.generator, *cache);
    view_.generator = m.generator_cached.get();
    m.extractor_cached =
        std::make_unique<CachedExtractor>(*view_.extractor, *cache);
    view_.extractor = m.extractor_cached.get();
    for (auto& a : m.agents_base) {
      m.agents_cached.push_back(std::make_unique<CachedAgent>(*a, *cache));
    }
  }
  m.lexicon_memo = std::make_unique<MemoScorer>(*lex);
  m.bio_memo = std::make_unique<MemoScorer>(*bio);
  view_.lexicon = m.lexicon_memo.get();
  view_.bio = m.bio_memo.get();
  for (auto& a : cache ? m.agents_cached : m.agents_base) {
    view_.agents.push_back(a.get());
  }
}

BackendSet::~BackendSet() = default;

std::size_t BackendSet::scorer_backend_calls() const {
  return impl_->lexicon_count->calls() + impl_->bio_count->calls();
}

std::string_view to_string(InstanceOutcome outcome) {
  switch (outcome) {
    case InstanceOutcome::kAccepted: return "accepted";
    case InstanceOutcome::kExhausted: return "exhausted";
    case InstanceOutcome::kDegenerate: return "degenerate";
  }
  return "?";
}

std::vector<std::size_t> select_subset(std::size_t size, double proportion,
                                       std::uint64_t seed) {
  if (!(proportion >= 0.0 && proportion <= 1.0)) {
    throw Error("proportion must lie in [0, 1]");
  }
  std::vector<std::size_t> order(size);
  for (std::size_t i = 0; i < size; ++i) order[i] = i;
  std::mt19937_64 rng(derive_seed(seed, "subset"));
  std::shuffle(order.begin(), order.end(), rng);
  const auto m = static_cast<std::size_t>(
      std::floor(proportion * static_cast<double>(size)));
  order.resize(std::min(m, size));
  std::sort(order.begin(), order.end());
  return order;
}

AttributionResult attribute_instance(const TaskInstance& inst,
                                     const NotionTable& notions,
                                     ScorerBackend& lexicon,
                                     ScorerBackend& bio, std::size_t n) {
  AttributionResult r;
  r.sentence = inst.token_texts();
  r.target = derive_attribution_target(inst, notions);
  const AttributionMap lex_raw = attr_lexicon(r.sentence, r.target, lexicon);

  double reference = 0.0;
  if (inst.task == TaskType::kRe && inst.entity_pair) {
    const Span e1 = inst.entities.at((*inst.entity_pair)[0]).span;
    const Span e2 = inst.entities.at((*inst.entity_pair)[1]).span;
    reference = std::max(pair_contribution(r.sentence, e1, e2, lexicon),
                         pair_contribution(r.sentence, e2, e1, lexicon));
  } else {
    reference = -std::numeric_limits<double>::infinity();
    for (const auto& [i, v] : lex_raw.entries) reference = std::max(reference, v);
  }
  r.lexicon = reference > 0.0 ? normalize_lexicon(lex_raw, reference)
                              : normalize_lexicon_by_rank(lex_raw);
  r.bio = normalize_bio(attr_bio(r.sentence, r.target, bio));
  const std::size_t count =
      n ? n : default_keyword_count(r.lexicon.entries.size());
  r.keywords = select_keywords(r.lexicon, r.bio, count);
  r.report = attribution_report(r.sentence, r.lexicon, r.bio, r.keywords);
  r.report["id"] = inst.id;
  r.report["raw_reference"] = std::isfinite(reference) ? reference : 0.0;
  return r;
}

namespace {

nlohmann::json attribute_one(const TaskInstance& inst,
                             const NotionTable& notions,
                             ScorerBackend& lexicon, ScorerBackend& bio,
                             std::size_t n) {
  try {
    return attribute_instance(inst, notions, lexicon, bio, n).report;
  } catch (const DegenerateInstance& e) {
    return {{"id", inst.id}, {"error", e.what()}, {"degenerate", true}};
  } catch (const std::exception& e) {
    return {{"id", inst.id}, {"error", e.what()}, {"degenerate", false}};
  }
}

}  // namespace

std::vector<nlohmann::json> attribute_batch_serial(const Dataset& dataset,
                                                   const NotionTable& notions,
                                                   ScorerBackend& lexicon,
                                                   ScorerBackend& bio,
                                                   std::size_t n) {
  std::vector<nlohmann::json> out;
  out.reserve(dataset.size());
  for (const auto& inst : dataset) {
    out.push_back(attribute_one(inst, notions, lexicon, bio, n));
  }
  return out;
}

std::vector<nlohmann::json> attribute_batch(const Dataset& dataset,
                                            const NotionTable& notions,
                                            ScorerBackend& lexicon,
                                            ScorerBackend& bio, std::size_t n,
                                            int workers) {
  std::vector<nlohmann::json> out(dataset.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto size = static_cast<std::ptrdiff_t>(dataset.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    out[static_cast<std::size_t>(i)] = attribute_one(
        dataset[static_cast<std::size_t>(i)], notions, lexicon, bio, n);
  }
  return out;
}

InstanceResult process_instance(const TaskInstance& inst, std::size_t index,
                                const Dataset& dataset,
                                const NotionTable& notions, Backends& backends,
                                const RunConfig& config) {
  InstanceResult res;
  res.id = inst.id;
  res.index = index;
  const std::uint64_t seed = derive_seed(config.seed, inst.id);
  std::string stage = "attribution";
  auto t0 = std::chrono::steady_clock::now();
  auto lap = [&](const std::string& next) {
    res.timing[stage] += seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    stage = next;
  };

  try {
    const auto attribution = attribute_instance(
        inst, notions, *backends.lexicon, *backends.bio, config.n);
    res.keywords = attribution.keywords.indices;
    res.rank_fallback = attribution.lexicon.rank_fallback;

    lap("mask");
    const auto entities = marked_entities(inst);
    const MaskedTemplate tmpl = build_masked_template(
        attribution.sentence, attribution.keywords.indices, entities);

    lap("exemplars");
    std::vector<std::string> exemplars;
    for (std::size_t i :
         sample_similar(dataset, inst, config.k, derive_seed(seed, "exemplars"))) {
      exemplars.push_back(dataset[i].text);
    }

    lap("key_structure");
    const KeyStructure ks = extract_key_structure(
        inst.text, exemplars, attribution.target.restriction_text,
        *backends.extractor, config.similarity_threshold, config.max_rounds);
    res.best_effort = ks.best_effort;

    lap("generation");
    GenerationMeta meta;
    meta.n = attribution.keywords.n;
    meta.k = config.k;
    const AugCandidate cand = generate_candidate(
        inst, tmpl, attribution.target.restriction_text, ks.text,
        *backends.generator, derive_seed(seed, "infill"), meta);
    res.trivial = cand.trivial;

    lap("projection");
    const std::string aug_id = inst.id + "-aug";
    TaskInstance augmented = project_labels(inst, cand, aug_id);

    lap("debate");
    DebateSubject subject{inst.text, augmented.text, {}};
    for (const auto& e : entities) subject.entity_surfaces.push_back(e.surface);
    DebateConfig dc{config.sigma, config.max_iters};
    try {
      auto result = run_debate(subject, backends.agents, dc,
                               derive_seed(seed, "debate"));
      res.transcript = result.transcript;
    } catch (const DebateAborted& e) {
      res.transcript = e.transcript();
      throw;
    }
    const auto& tr = *res.transcript;
    res.debate_iterations = tr.iterations.size();
    res.acceptance = tr.iterations.empty() ? 0.0 : tr.iterations.back().acceptance;

    if (tr.outcome == DebateOutcome::kAccepted) {
      if (tr.final_sentence != augmented.text) {
        lap("reprojection");
        std::vector<std::string> toks;
        for (auto& t : tokenize(tr.final_sentence)) toks.push_back(t.text);
        augmented = project_labels(inst, parse_candidate(toks, tmpl), aug_id);
      }
      res.outcome = InstanceOutcome::kAccepted;
      res.augmented = std::move(augmented);
    } else {
      res.outcome = InstanceOutcome::kExhausted;
    }
    lap("done");
  } catch (const std::exception& e) {
    res.outcome = InstanceOutcome::kDegenerate;
    res.stage = stage;
    res.reason = e.what();
    res.augmented.reset();
    lap("done");
  }
  res.timing.erase("done");
  return res;
}

namespace {

AugmentOutput assemble(const RunConfig& config, const Dataset& dataset,
                       std::vector<InstanceResult> results) {
  AugmentOutput out;
  out.dataset = dataset;
  auto& report = out.report;
  report.config = config_echo(config);
  for (auto& r : results) {
    ++report.counts.attempted;
    switch (r.outcome) {
      case InstanceOutcome::kAccepted:
        ++report.counts.accepted;
        out.dataset.push_back(*r.augmented);
        break;
      case InstanceOutcome::kExhausted:
        ++report.counts.exhausted;
        break;
      case InstanceOutcome::kDegenerate:
        ++report.counts.degenerate;
        break;
    }
    for (const auto& [k, v] : r.timing) report.timing[k] += v;
    report.records.push_back(std::move(r));
  }
  if (!config.transcript_dir.empty()) {
    std::filesystem::create_directories(config.transcript_dir);
    for (const auto& r : report.records) {
      if (!r.transcript) continue;
      auto j = to_json(*r.transcript);
      j["id"] = r.id;
      j["outcome"] = std::string(to_string(r.outcome));
      internal::write_file_atomic(
          std::filesystem::path(config.transcript_dir) / (file_safe(r.id) + ".json"),
          j.dump(2) + "\n");
    }
  }
  return out;
}

void check_parameters(const RunConfig& config, const Backends& backends) {
  auto errors = parameter_errors(config);
  if (!backends.lexicon || !backends.bio || !backends.generator ||
      !backends.extractor) {
    errors.push_back("backends: every backend must be set");
  }
  if (backends.agents.size() < 2) {
    errors.push_back("backends: at least two agents are needed");
  }
  if (!errors.empty()) {
    std::string msg = "invalid run configuration: " + errors.front();
    for (std::size_t i = 1; i < errors.size(); ++i) msg += "; " + errors[i];
    throw Error(msg);
  }
}

}  // namespace

AugmentOutput augment_dataset_serial(const RunConfig& config,
                                     const Dataset& dataset,
                                     const NotionTable& notions,
                                     Backends& backends) {
  check_parameters(config, backends);
  const auto subset = select_subset(dataset.size(), config.proportion, config.seed);
  std::vector<InstanceResult> results;
  results.reserve(subset.size());
  for (std::size_t i : subset) {
    results.push_back(
        process_instance(dataset[i], i, dataset, notions, backends, config));
  }
  return assemble(config, dataset, std::move(results));
}

AugmentOutput augment_dataset(const RunConfig& config, const Dataset& dataset,
                              const NotionTable& notions, Backends& backends) {
  if (!backends.thread_safe) {
    return augment_dataset_serial(config, dataset, notions, backends);
  }
  check_parameters(config, backends);
  const auto subset = select_subset(dataset.size(), config.proportion, config.seed);
  std::vector<InstanceResult> results(subset.size());
  const int threads = config.workers > 0 ? config.workers : omp_get_max_threads();
  const auto size = static_cast<std::ptrdiff_t>(subset.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t j = 0; j < size; ++j) {
    const std::size_t i = subset[static_cast<std::size_t>(j)];
    results[static_cast<std::size_t>(j)] =
        process_instance(dataset[i], i, dataset, notions, backends, config);
  }
  return assemble(config, dataset, std::move(results));
}

AugmentOutput augment_dataset(const RunConfig& config) {
  if (auto errors = validate_config(config); !errors.empty()) {
    std::string msg = "invalid run configuration: " + errors.front();
    for (std::size_t i = 1; i < errors.size(); ++i) msg += "; " + errors[i];
    throw Error(msg);
  }
  const auto t0 = std::chrono::steady_clock::now();
  Dataset dataset =
      load_dataset(config.dataset_path, parse_format(config.dataset_format));
  if (!config.task.empty()) {
    const TaskType want = parse_task(config.task);
    for (const auto& inst : dataset) {
      if (inst.task != want) {
        throw Error("instance '" + inst.id + "' is " +
                    std::string(to_string(inst.task)) + ", expected " +
                    config.task);
      }
    }
  }
  NotionTable notions;
  if (!config.notions_path.empty()) notions = load_notions(config.notions_path);
  const double load_seconds = seconds_since(t0);

  std::optional<ResponseCache> cache;
  if (!config.cache_path.empty()) {
    cache.emplace(std::filesystem::path(config.cache_path));
    if (!cache->warning().empty()) std::cerr << "warning: " << cache->warning() << "\n";
  }
  BackendSet backends(config, dataset, cache ? &*cache : nullptr);
  AugmentOutput out = augment_dataset(config, dataset, notions, backends.view());
  out.report.timing["load"] = load_seconds;
  out.report.scorer_backend_calls = backends.scorer_backend_calls();
  if (cache) {
    out.report.cache_hit_rate = cache->hit_rate();
    cache->save();
  }
  if (!config.predictions_path.empty() && !dataset.empty()) {
    out.report.metrics =
        compute_metrics(dataset, config.predictions_path, dataset.front().task);
  }
  if (!config.output_path.empty()) write_dataset(out.dataset, config.output_path);
  if (!config.report_path.empty()) {
    internal::write_file_atomic(config.report_path,
                                to_json(out.report).dump(2) + "\n");
  }
  return out;
}

nlohmann::ordered_json to_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["counts"] = {{"attempted", report.counts.attempted},
                 {"accepted", report.counts.accepted},
                 {"exhausted", report.counts.exhausted},
                 {"degenerate", report.counts.degenerate}};
  j["config"] = report.config;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json rec;
    rec["id"] = r.id;
    rec["index"] = r.index;
    rec["outcome"] = std::string(to_string(r.outcome));
    if (r.outcome == InstanceOutcome::kDegenerate) {
      rec["stage"] = r.stage;
      rec["reason"] = r.reason;
    }
    rec["keywords"] = r.keywords;
    rec["rank_fallback"] = r.rank_fallback;
    rec["best_effort"] = r.best_effort;
    rec["trivial"] = r.trivial;
    rec["debate_iterations"] = r.debate_iterations;
    rec["acceptance"] = r.acceptance;
    if (r.augmented) rec["augmented_id"] = r.augmented->id;
    records.push_back(std::move(rec));
  }
  j["instances"] = std::move(records);
  if (report.metrics) j["metrics"] = to_json(*report.metrics);
  return j;
}

nlohmann::ordered_json stats_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["timing_seconds"] = report.timing;
  j["cache_hit_rate"] = report.cache_hit_rate;
  j["scorer_backend_calls"] = report.scorer_backend_calls;
  return j;
}

std::string render_report(const RunReport& report) {
  std::ostringstream out;
  const auto& c = report.counts;
  out << "attempted " << c.attempted << ", accepted " << c.accepted
      << ", exhausted " << c.exhausted << ", degenerate " << c.degenerate
      << "\n";
  for (const auto& r : report.records) {
    if (r.outcome != InstanceOutcome::kDegenerate) continue;
    out << "  degenerate " << r.id << " at " << r.stage << ": " << r.reason
        << "\n";
  }
  if (report.metrics) out << render_metrics(*report.metrics) << "\n";
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const auto& [stage, s] : report.timing) {
    out << "  time " << stage << " " << s << "s\n";
  }
  out << "  cache hit rate " << report.cache_hit_rate << "\n";
  return out.str();
}

}  // namespace bioaug
