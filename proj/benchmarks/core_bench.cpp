//------------------------------------------------------------------------------
//
//   Copyright 2026 The tanglefl Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "tanglefl/dataset.hpp"
#include "tanglefl/ledger.hpp"
#include "tanglefl/random.hpp"
#include "tanglefl/selection.hpp"
#include "tanglefl/signature.hpp"
#include "tanglefl/training.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace tanglefl {
namespace {

TipMetadata metadata(std::uint64_t client, std::uint64_t epoch, double t)
{
  TipMetadata md;
  md.client_id          = client;
  md.signature.entries  = std::vector<double>(8, 0.25);
  md.model_accuracy     = 0.5;
  md.current_epoch      = epoch;
  md.validation_node_id = client;
  md.timestamp          = t;
  return md;
}

// tangle-shaped: each append approves two of the current tips
Ledger tangle(std::size_t size, std::uint64_t seed)
{
  Rng    rng(seed);
  Ledger ledger;
  while (ledger.size() < size)
  {
    auto const tips = ledger.tips();
    NodeId const a  = tips[rng() % tips.size()];
    NodeId const b  = tips[rng() % tips.size()];
    ledger.append(a, b, metadata(rng() % 10, ledger.size() / 10, static_cast<double>(ledger.size())));
  }
  return ledger;
}

void BM_Digest(benchmark::State &state)
{
  Digest const      parent{};
  TipMetadata const md = metadata(3, 7, 12.5);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(compute_digest(parent, parent, md));
  }
}
BENCHMARK(BM_Digest);

void BM_Append(benchmark::State &state)
{
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(tangle(static_cast<std::size_t>(state.range(0)), 1).size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Append)->Arg(100)->Arg(1000);

void BM_PartitionTips(benchmark::State &state)
{
  Ledger const ledger = tangle(static_cast<std::size_t>(state.range(0)), 2);
  NodeId const start{ledger.size() / 2};
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(partition_tips(ledger, start));
  }
}
BENCHMARK(BM_PartitionTips)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SelectTips(benchmark::State &state)
{
  Ledger const ledger = tangle(static_cast<std::size_t>(state.range(0)), 3);
  SimilarityRegistry registry;
  for (std::uint64_t c = 1; c < 10; ++c)
  {
    registry.record(0, 0, c, 0.1 * static_cast<double>(c));
  }
  Selector selector;
  selector.anchor = NodeId{ledger.size() / 2};
  selector.epoch  = ledger.size() / 10;
  selector.now    = static_cast<double>(ledger.size());
  SelectionConfig const config;
  auto evaluator = [](NodeId id) { return static_cast<double>(id.value % 97) / 97.0; };
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(select_tips(ledger, selector, config, registry, evaluator));
  }
}
BENCHMARK(BM_SelectTips)->Arg(100)->Arg(1000);

void BM_LocalTrain(benchmark::State &state)
{
  Dataset const     data  = make_toy_digits(static_cast<std::size_t>(state.range(0)), 4);
  ModelParams const model = init_model({data.feature_count, 64, data.class_count}, 5);
  TrainOptions      options;
  options.epochs = 1;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(local_train(model, data, options, 6));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LocalTrain)->Arg(480)->Arg(4800);

void BM_DatasetSignature(benchmark::State &state)
{
  Dataset const     data  = make_toy_digits(480, 7);
  ModelParams const model = init_model({data.feature_count, 64, data.class_count}, 8);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(dataset_signature(model, data, 8));
  }
}
BENCHMARK(BM_DatasetSignature);

}  // namespace
}  // namespace tanglefl

BENCHMARK_MAIN();
