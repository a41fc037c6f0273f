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


// Serial reference against the OpenMP kernels, on the relation fixture
// replicated to a few hundred instances.

#include <benchmark/benchmark.h>

#include <string>

#include "bioaug/corpus.h"
#include "bioaug/mocks.h"
#include "bioaug/pipeline.h"

namespace bioaug {
namespace {

const std::string kData = BIOAUG_TEST_DATA_DIR;

Dataset replicated(std::size_t copies) {
  const auto base =
      load_dataset(kData + "/re_fixture.jsonl", DatasetFormat::kCanonicalJsonl);
  Dataset out;
  for (std::size_t c = 0; c < copies; ++c) {
    for (auto inst : base) {
      inst.id += "-" + std::to_string(c);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

RunConfig config(int workers) {
  RunConfig c;
  c.dataset_path = kData + "/re_fixture.jsonl";
  c.notions_path = kData + "/notions.tsv";
  c.mock_generator = "synonym";
  c.seed = 13;
  c.workers = workers;
  return c;
}

void BM_AttributeSerial(benchmark::State& state) {
  const auto ds = replicated(static_cast<std::size_t>(state.range(0)));
  const auto notions = load_notions(kData + "/notions.tsv");
  auto lex = make_pair_bonus_scorer(1);
  auto bio = make_relativity_scorer(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attribute_batch_serial(ds, notions, *lex, *bio, 0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.size()));
}

void BM_AttributeParallel(benchmark::State& state) {
  const auto ds = replicated(static_cast<std::size_t>(state.range(0)));
  const auto notions = load_notions(kData + "/notions.tsv");
  auto lex = make_pair_bonus_scorer(1);
  auto bio = make_relativity_scorer(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(attribute_batch(ds, notions, *lex, *bio, 0, 0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.size()));
}

void BM_AugmentSerial(benchmark::State& state) {
  const auto ds = replicated(static_cast<std::size_t>(state.range(0)));
  const auto notions = load_notions(kData + "/notions.tsv");
  const auto c = config(1);
  for (auto _ : state) {
    BackendSet backends(c, ds, nullptr);
    benchmark::DoNotOptimize(augment_dataset_serial(c, ds, notions, backends.view()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.size()));
}

void BM_AugmentParallel(benchmark::State& state) {
  const auto ds = replicated(static_cast<std::size_t>(state.range(0)));
  const auto notions = load_notions(kData + "/notions.tsv");
  const auto c = config(0);
  for (auto _ : state) {
    BackendSet backends(c, ds, nullptr);
    benchmark::DoNotOptimize(augment_dataset(c, ds, notions, backends.view()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.size()));
}

BENCHMARK(BM_AttributeSerial)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AttributeParallel)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AugmentSerial)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AugmentParallel)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace bioaug

BENCHMARK_MAIN();
