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

#pragma once

#include "tanglefl/dataset.hpp"
#include "tanglefl/model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tanglefl {

class TrainingError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct TrainOptions
{
  std::size_t epochs{5};
  double      lr{0.01};
  std::size_t batch_size{32};
};

/// Mean softmax cross-entropy over `rows` of `data`; writes d(loss)/d(params) into `gradient`.
double loss_and_gradient(ModelParams const &model, Dataset const &data,
                         std::span<std::size_t const> rows, std::vector<double> &gradient);

/// Mean softmax cross-entropy over `rows`, no gradient.
double loss(ModelParams const &model, Dataset const &data, std::span<std::size_t const> rows);

/**
 * Mini-batch SGD on softmax cross-entropy. The input model is not modified;
 * shuffling uses `seed` only, so identical inputs give bitwise-identical
 * outputs. Throws TrainingError("divergence") on a non-finite loss.
 */
ModelParams local_train(ModelParams const &model, Dataset const &train, TrainOptions const &options,
                        std::uint64_t seed);

/// Arg-max prediction, lowest class index wins ties.
std::uint32_t predict(ModelParams const &model, std::span<double const> sample);

/// Fraction of rows predicted correctly. Throws std::invalid_argument on empty data.
double evaluate_accuracy(ModelParams const &model, Dataset const &data);

/// Post-rectification hidden activations for one sample.
void hidden_activations(ModelParams const &model, std::span<double const> sample,
                        std::span<double> out);

}  // namespace tanglefl
