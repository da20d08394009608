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
#include "tanglefl/model.hpp"
#include "tanglefl/random.hpp"
#include "tanglefl/signature.hpp"
#include "tanglefl/training.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace tanglefl {
namespace {

Dataset random_data(std::size_t n, std::size_t d, std::size_t c, std::uint64_t seed)
{
  Rng                              rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset                          data;
  data.feature_count = d;
  data.class_count   = c;
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < d; ++j)
    {
      data.features.push_back(noise(rng));
    }
    data.labels.push_back(static_cast<std::uint32_t>(rng() % c));
    data.origin.push_back(i);
  }
  return data;
}

TEST(SampleSignature, Examples)
{
  std::vector<double> zeros(16, 0.0);
  EXPECT_EQ(sample_signature(zeros), 1.0);

  std::vector<double> half(16, 0.3);
  std::fill(half.begin(), half.begin() + 8, 0.0);
  EXPECT_EQ(sample_signature(half), 0.5);

  std::vector<double> positive(16, 1e-3);
  EXPECT_EQ(sample_signature(positive), 0.0);

  std::vector<double> tiny{1e-13, -1e-13, 2e-12};
  EXPECT_NEAR(sample_signature(tiny), 2.0 / 3.0, 1e-15);

  EXPECT_THROW(sample_signature({}), std::invalid_argument);
}

TEST(DatasetSignature, SingleSampleAndDeadLayer)
{
  ModelShape const shape{6, 8, 3};
  auto const       model = init_model(shape, 3);
  Dataset const    data  = random_data(1, 6, 3, 4);

  std::vector<double> h(8);
  hidden_activations(model, data.row(0), h);
  auto const sig = dataset_signature(model, data, 4);
  ASSERT_EQ(sig.size(), 4u);
  for (std::size_t g = 0; g < 4; ++g)
  {
    EXPECT_EQ(sig.entries[g], sample_signature(std::span<double const>(h).subspan(2 * g, 2)));
  }

  ModelParams dead = model;
  std::fill(dead.w1().begin(), dead.w1().end(), 0.0);
  std::fill(dead.b1().begin(), dead.b1().end(), -1.0);
  auto const all_zero = dataset_signature(dead, random_data(20, 6, 3, 5), 4);
  for (double v : all_zero.entries)
  {
    EXPECT_EQ(v, 1.0);
  }

  EXPECT_THROW(dataset_signature(model, Dataset{6, 3, {}, {}, {}}, 4), std::invalid_argument);
  EXPECT_THROW(dataset_signature(model, data, 3), std::invalid_argument);
}

TEST(DatasetSignature, MatchesTwoLoopOracle)
{
  ModelShape const shape{10, 16, 4};
  auto const       model = init_model(shape, 8);
  Dataset const    data  = random_data(50, 10, 4, 9);

  std::vector<double> oracle(8, 0.0);
  std::vector<double> h(16);
  for (std::size_t i = 0; i < data.size(); ++i)
  {
    hidden_activations(model, data.row(i), h);
    for (std::size_t g = 0; g < 8; ++g)
    {
      double zeros = 0;
      for (std::size_t u = 2 * g; u < 2 * g + 2; ++u)
      {
        zeros += std::abs(h[u]) <= 1e-12 ? 1.0 : 0.0;
      }
      oracle[g] += zeros / 2.0;
    }
  }
  auto const sig = dataset_signature(model, data, 8);
  for (std::size_t g = 0; g < 8; ++g)
  {
    EXPECT_NEAR(sig.entries[g], oracle[g] / 50.0, 1e-12);
    EXPECT_GE(sig.entries[g], 0.0);
    EXPECT_LE(sig.entries[g], 1.0);
  }

  // a mean, so row order does not matter
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::reverse(rows.begin(), rows.end());
  EXPECT_EQ(dataset_signature(model, data.subset(rows), 8), sig);
}

TEST(Cosine, Examples)
{
  FeatureSignature a{{0.3, 0.7, 0.1}};
  EXPECT_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_EQ(cosine_similarity({{1.0, 0.0}}, {{0.0, 1.0}}), 0.0);
  EXPECT_NEAR(cosine_similarity({{1.0, 0.0}}, {{1.0, 1.0}}), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_EQ(cosine_similarity({{0.0, 0.0}}, {{1.0, 1.0}}), 0.0);
  EXPECT_THROW(cosine_similarity({{1.0}}, {{1.0, 1.0}}), std::invalid_argument);
}

TEST(Cosine, SymmetricAndScaleFree)
{
  Rng                                    rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial)
  {
    FeatureSignature a;
    FeatureSignature b;
    for (int i = 0; i < 8; ++i)
    {
      a.entries.push_back(unit(rng));
      b.entries.push_back(unit(rng));
    }
    double const c = 0.1 + 10.0 * unit(rng);
    FeatureSignature scaled = a;
    for (auto &v : scaled.entries)
    {
      v *= c;
    }
    ASSERT_EQ(cosine_similarity(a, b), cosine_similarity(b, a));
    ASSERT_NEAR(cosine_similarity(scaled, b), cosine_similarity(a, b), 1e-12);
    ASSERT_NEAR(cosine_similarity(a, a), 1.0, 1e-12);
  }
}

TEST(Cosine, IdenticalClientsGiveExactlyOne)
{
  ModelShape const shape{10, 16, 4};
  auto const       model = init_model(shape, 21);
  Dataset const    data  = random_data(40, 10, 4, 22);
  auto const       a     = dataset_signature(model, data, 8);
  auto const       b     = dataset_signature(model, data, 8);
  EXPECT_EQ(a, b);
  EXPECT_EQ(cosine_similarity(a, b), 1.0);
}

TEST(Registry, RecordAndQuery)
{
  SimilarityRegistry r;
  r.record(1, 2, 3, 0.8);
  EXPECT_EQ(r.query(1, 3, 2), 0.8);
  EXPECT_EQ(r.query(5, 2, 3), 0.8);
  EXPECT_FALSE(r.query(0, 2, 3).has_value());
  EXPECT_FALSE(r.query(5, 2, 4).has_value());

  r.record(4, 3, 2, 0.6);
  EXPECT_EQ(r.query(3, 2, 3), 0.8);
  EXPECT_EQ(r.query(4, 2, 3), 0.6);
  EXPECT_EQ(r.query(100, 2, 3), 0.6);

  r.record(2, 7, 7, 1.0);
  EXPECT_EQ(r.query(2, 7, 7), 1.0);
  EXPECT_THROW(r.record(1, 7, 7, 0.5), std::invalid_argument);
  EXPECT_THROW(r.record(1, 1, 2, 1.5), std::invalid_argument);

  std::ostringstream csv;
  r.write_csv(csv);
  EXPECT_EQ(csv.str(), "round,i,j,value\n1,2,3,0.8\n2,7,7,1\n4,2,3,0.6\n");
}

}  // namespace
}  // namespace tanglefl
