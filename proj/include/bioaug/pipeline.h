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

// Orchestration: per-instance attribution -> mask -> key structure ->
// candidate -> debate, over a seeded subset of the dataset.

#ifndef BIOAUG_PIPELINE_H_
#define BIOAUG_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bioaug/attribution.h"
#include "bioaug/cache.h"
#include "bioaug/corpus.h"
#include "bioaug/generation.h"
#include "bioaug/masked_template.h"
#include "bioaug/metrics.h"
#include "bioaug/reflection.h"

namespace bioaug {

struct RunConfig {
  std::string dataset_path;
  std::string dataset_format = "jsonl";
  std::string notions_path;
  // Empty: taken from the dataset.
  std::string task;

  // "mock" (offline, deterministic) or "http".
  std::string backend = "mock";
  std::string endpoint;
  std::string api_key;
  // Mock generator: "identity" or "synonym".
  std::string mock_generator = "identity";
  // Grade (0-100) the offline agents give.
  int mock_grade = 100;

  // 0 selects max(3, ceil(|candidates| / 4)).
  std::size_t n = 0;
  std::size_t k = 3;
  double sigma = 0.8;
  std::size_t max_iters = 5;
  std::size_t n_agents = 3;
  double similarity_threshold = 0.80;
  std::size_t max_rounds = 5;
  double proportion = 1.0;
  std::uint64_t seed = 13;
  // 0 lets OpenMP decide.
  int workers = 0;

  std::string output_path;
  std::string report_path;
  std::string transcript_dir;
  std::string cache_path;
  // When set, metrics of these predictions against the input are reported.
  std::string predictions_path;
};

// Every message names the offending field. Empty means valid.
std::vector<std::string> validate_config(const RunConfig& config);

// Fields that influence results; paths of outputs and secrets are left out.
nlohmann::ordered_json config_echo(const RunConfig& config);

// Non-owning view of the backends a run uses.
struct Backends {
  ScorerBackend* lexicon = nullptr;
  ScorerBackend* bio = nullptr;
  GeneratorBackend* generator = nullptr;
  ExtractorBackend* extractor = nullptr;
  std::vector<AgentBackend*> agents;
  // False forces the serial path.
  bool thread_safe = true;
};

// Owns the backends built from a config (mock or http), wrapped in the
// memo and persistent-cache decorators.
class BackendSet {
 public:
  BackendSet(const RunConfig& config, const Dataset& dataset,
             ResponseCache* cache);
  ~BackendSet();
  BackendSet(const BackendSet&) = delete;
  BackendSet& operator=(const BackendSet&) = delete;

  Backends& view() { return view_; }
  std::size_t scorer_backend_calls() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Backends view_;
};

enum class InstanceOutcome { kAccepted, kExhausted, kDegenerate };
std::string_view to_string(InstanceOutcome outcome);

struct InstanceResult {
  std::string id;
  std::size_t index = 0;
  InstanceOutcome outcome = InstanceOutcome::kDegenerate;
  // Failing stage and message for degenerate instances.
  std::string stage;
  std::string reason;
  std::vector<std::size_t> keywords;
  bool rank_fallback = false;
  bool best_effort = false;
  bool trivial = false;
  std::size_t debate_iterations = 0;
  double acceptance = 0.0;
  std::optional<TaskInstance> augmented;
  std::optional<DebateTranscript> transcript;
  // Seconds per stage; not part of the deterministic report.
  std::map<std::string, double> timing;
};

struct RunCounts {
  std::size_t attempted = 0;
  std::size_t accepted = 0;
  std::size_t exhausted = 0;
  std::size_t degenerate = 0;
};

struct RunReport {
  RunCounts counts;
  std::vector<InstanceResult> records;
  nlohmann::ordered_json config;
  std::optional<MetricTable> metrics;
  // Volatile statistics, kept out of to_json.
  std::map<std::string, double> timing;
  double cache_hit_rate = 0.0;
  std::size_t scorer_backend_calls = 0;
};

// Deterministic: counts, per-instance records, config echo and metrics.
nlohmann::ordered_json to_json(const RunReport& report);
// Timing and cache statistics.
nlohmann::ordered_json stats_json(const RunReport& report);
std::string render_report(const RunReport& report);

// Seeded shuffle of [0, size), prefix of floor(proportion * size), returned
// in ascending order.
std::vector<std::size_t> select_subset(std::size_t size, double proportion,
                                       std::uint64_t seed);

struct AttributionResult {
  std::vector<std::string> sentence;
  AttributionTarget target;
  AttributionMap lexicon;
  AttributionMap bio;
  KeywordSet keywords;
  nlohmann::json report;
};

// Both maps, normalized, and the selected keywords. The lexicon reference
// is the entity-pair contribution for relations and the largest raw entry
// otherwise; a non-positive reference falls back to rank normalization.
AttributionResult attribute_instance(const TaskInstance& inst,
                                     const NotionTable& notions,
                                     ScorerBackend& lexicon,
                                     ScorerBackend& bio, std::size_t n = 0);

// One JSON record per instance; failures become {"id", "error"} records.
std::vector<nlohmann::json> attribute_batch(const Dataset& dataset,
                                            const NotionTable& notions,
                                            ScorerBackend& lexicon,
                                            ScorerBackend& bio, std::size_t n,
                                            int workers = 0);
std::vector<nlohmann::json> attribute_batch_serial(const Dataset& dataset,
                                                   const NotionTable& notions,
                                                   ScorerBackend& lexicon,
                                                   ScorerBackend& bio,
                                                   std::size_t n);

// The full chain for one instance. Never throws for instance-level
// failures; they come back as degenerate results.
InstanceResult process_instance(const TaskInstance& inst, std::size_t index,
                                const Dataset& dataset,
                                const NotionTable& notions, Backends& backends,
                                const RunConfig& config);

struct AugmentOutput {
  // The input followed by accepted augmentations in input order.
  Dataset dataset;
  RunReport report;
};

AugmentOutput augment_dataset(const RunConfig& config, const Dataset& dataset,
                              const NotionTable& notions, Backends& backends);
AugmentOutput augment_dataset_serial(const RunConfig& config,
                                     const Dataset& dataset,
                                     const NotionTable& notions,
                                     Backends& backends);

// Loads inputs, builds backends, runs, writes outputs named in the config.
// Throws Error before any work when the config is invalid.
AugmentOutput augment_dataset(const RunConfig& config);

}  // namespace bioaug

#endif  // BIOAUG_PIPELINE_H_
