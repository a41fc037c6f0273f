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

#include "bioaug/metrics.h"

#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "bioaug/error.h"
#include "text_util.h"

namespace bioaug {

PrfScores prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp + fp + fn == 0) return {1.0, 1.0, 1.0};
  PrfScores s;
  const double t = static_cast<double>(tp);
  s.precision = tp + fp == 0 ? 0.0 : t / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : t / static_cast<double>(tp + fn);
  s.f1 = 2.0 * t / static_cast<double>(2 * tp + fp + fn);
  return s;
}

bool is_negative_relation(std::string_view label) {
  static const std::set<std::string, std::less<>> kNegative = {
      "", "false", "none", "no_relation", "0", "negative", "ddi-false"};
  return kNegative.count(internal::to_lower(internal::trim(label))) > 0;
}

namespace {

std::string id_list(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) {
    out += " (+" + std::to_string(ids.size() - shown) + " more)";
  }
  return out;
}

std::string normalize_answer(std::string_view s) {
  return internal::to_lower(internal::trim(s));
}

}  // namespace

MetricTable compute_metrics(const Dataset& gold, const Dataset& predictions,
                            TaskType task) {
  std::unordered_map<std::string, const TaskInstance*> pred_by_id;
  for (const auto& p : predictions) {
    if (!pred_by_id.emplace(p.id, &p).second) {
      throw Error("predictions repeat id '" + p.id + "'");
    }
  }
  std::vector<std::string> missing;
  std::set<std::string> gold_ids;
  for (const auto& g : gold) {
    if (g.task != task) {
      throw Error("gold instance '" + g.id + "' is not a " +
                  std::string(to_string(task)) + " instance");
    }
    gold_ids.insert(g.id);
    if (!pred_by_id.count(g.id)) missing.push_back(g.id);
  }
  if (!missing.empty()) {
    throw Error("predictions missing ids: " + id_list(missing));
  }
  std::vector<std::string> unknown;
  for (const auto& p : predictions) {
    if (!gold_ids.count(p.id)) unknown.push_back(p.id);
  }
  if (!unknown.empty()) {
    throw Error("predictions contain unknown ids: " + id_list(unknown));
  }

  MetricTable table;
  table.task = task;
  table.instances = gold.size();
  switch (task) {
    case TaskType::kNer: {
      using Key = std::tuple<std::string, std::size_t, std::size_t, std::string>;
      std::set<Key> g, p;
      for (const auto& inst : gold) {
        for (const auto& e : inst.entities) {
          g.emplace(inst.id, e.span.start, e.span.end, e.entity_type);
        }
        for (const auto& e : pred_by_id.at(inst.id)->entities) {
          p.emplace(inst.id, e.span.start, e.span.end, e.entity_type);
        }
      }
      std::size_t tp = 0;
      for (const auto& k : p) tp += g.count(k);
      const std::size_t fp = p.size() - tp, fn = g.size() - tp;
      const auto s = prf_from_counts(tp, fp, fn);
      table.values = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
      table.counts = {{"tp", tp}, {"fp", fp}, {"fn", fn}};
      break;
    }
    case TaskType::kRe: {
      std::size_t tp = 0, fp = 0, fn = 0;
      for (const auto& inst : gold) {
        const auto& g = inst.relation;
        const auto& p = pred_by_id.at(inst.id)->relation;
        const bool gp = !is_negative_relation(g), pp = !is_negative_relation(p);
        if (pp && gp && internal::to_lower(g) == internal::to_lower(p)) {
          ++tp;
          continue;
        }
        if (pp) ++fp;
        if (gp) ++fn;
      }
      const auto s = prf_from_counts(tp, fp, fn);
      table.values = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
      table.counts = {{"tp", tp}, {"fp", fp}, {"fn", fn}};
      break;
    }
    case TaskType::kTc: {
      double sp = 0.0, sr = 0.0, sf = 0.0;
      for (const auto& inst : gold) {
        const std::set<std::string> g(inst.topics.begin(), inst.topics.end());
        const auto& pt = pred_by_id.at(inst.id)->topics;
        const std::set<std::string> p(pt.begin(), pt.end());
        std::size_t tp = 0;
        for (const auto& t : p) tp += g.count(t);
        const auto s = prf_from_counts(tp, p.size() - tp, g.size() - tp);
        sp += s.precision;
        sr += s.recall;
        sf += s.f1;
      }
      const double n = gold.empty() ? 1.0 : static_cast<double>(gold.size());
      if (gold.empty()) sp = sr = sf = 1.0;
      table.values = {{"precision", sp / n}, {"recall", sr / n}, {"f1", sf / n}};
      break;
    }
    case TaskType::kQa: {
      std::size_t correct = 0;
      for (const auto& inst : gold) {
        correct += normalize_answer(inst.answer) ==
                   normalize_answer(pred_by_id.at(inst.id)->answer);
      }
      table.values = {
          {"accuracy", gold.empty() ? 1.0
                                    : static_cast<double>(correct) /
                                          static_cast<double>(gold.size())}};
      table.counts = {{"correct", correct}};
      break;
    }
  }
  return table;
}

MetricTable compute_metrics(const Dataset& gold,
                            const std::filesystem::path& predictions_file,
                            TaskType task) {
  return compute_metrics(
      gold, load_dataset(predictions_file, DatasetFormat::kCanonicalJsonl), task);
}

nlohmann::json to_json(const MetricTable& table) {
  return {{"task", to_string(table.task)},
          {"instances", table.instances},
          {"values", table.values},
          {"counts", table.counts}};
}

std::string render_metrics(const MetricTable& table) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << to_string(table.task) << " (" << table.instances << " instances)";
  for (const auto& [k, v] : table.values) out << "  " << k << "=" << v;
  return out.str();
}

}  // namespace bioaug
