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

// Evaluation of predictions against gold data.
//   NER  entity-level micro P/R/F1 over exact (span, type) matches
//   RE   micro P/R/F1 over positive relation labels
//   TC   per-instance label-set P/R/F1, averaged over instances
//   QA   exact-match accuracy of the answer string

#ifndef BIOAUG_METRICS_H_
#define BIOAUG_METRICS_H_

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "bioaug/corpus.h"

namespace bioaug {

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// With no positives on either side every score is 1.
PrfScores prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

// Labels treated as "no relation" by the RE metric (compared lowercase).
bool is_negative_relation(std::string_view label);

struct MetricTable {
  TaskType task = TaskType::kNer;
  std::size_t instances = 0;
  // precision/recall/f1, or accuracy for QA.
  std::map<std::string, double> values;
  // tp/fp/fn for NER and RE, correct for QA.
  std::map<std::string, std::size_t> counts;
};

nlohmann::json to_json(const MetricTable& table);
std::string render_metrics(const MetricTable& table);

// Predictions are matched to gold by id; missing or unknown ids throw an
// Error listing them.
MetricTable compute_metrics(const Dataset& gold, const Dataset& predictions,
                            TaskType task);
MetricTable compute_metrics(const Dataset& gold,
                            const std::filesystem::path& predictions_file,
                            TaskType task);

}  // namespace bioaug

#endif  // BIOAUG_METRICS_H_
