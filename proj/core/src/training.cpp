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

#include "tanglefl/training.hpp"

#include "tanglefl/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tanglefl {
namespace {

void check_compatible(ModelParams const &model, Dataset const &data)
{
  if (model.shape().inputs != data.feature_count)
  {
    throw std::invalid_argument("model input width does not match dataset features");
  }
  if (model.shape().outputs < data.class_count)
  {
    throw std::invalid_argument("model has fewer outputs than dataset classes");
  }
}

// z1 = b1 + x W1, written as axpy over input rows so the inner loop is contiguous.
void forward_hidden(ModelParams const &model, std::span<double const> x, std::span<double> z1)
{
  auto const   w1 = model.w1();
  auto const   b1 = model.b1();
  std::size_t  h  = model.shape().hidden;
  std::copy(b1.begin(), b1.end(), z1.begin());
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    double const xi = x[i];
    if (xi == 0.0)
    {
      continue;
    }
    double const *row = w1.data() + i * h;
    for (std::size_t j = 0; j < h; ++j)
    {
      z1[j] += xi * row[j];
    }
  }
}

void forward_output(ModelParams const &model, std::span<double const> a1, std::span<double> z2)
{
  auto const  w2 = model.w2();
  auto const  b2 = model.b2();
  std::size_t c  = model.shape().outputs;
  std::copy(b2.begin(), b2.end(), z2.begin());
  for (std::size_t j = 0; j < a1.size(); ++j)
  {
    double const aj = a1[j];
    if (aj == 0.0)
    {
      continue;
    }
    double const *row = w2.data() + j * c;
    for (std::size_t k = 0; k < c; ++k)
    {
      z2[k] += aj * row[k];
    }
  }
}

/// Replaces logits with softmax probabilities, returns -log p[label].
double softmax_xent(std::span<double> z, std::uint32_t label)
{
  double const top    = *std::max_element(z.begin(), z.end());
  double const target = z[label];
  double       sum    = 0.0;
  for (auto &v : z)
  {
    v = std::exp(v - top);
    sum += v;
  }
  double const loss = std::log(sum) + top - target;
  for (auto &v : z)
  {
    v /= sum;
  }
  return loss;
}

struct Workspace
{
  std::vector<double> z1, z2, dz1;

  explicit Workspace(ModelShape const &s)
    : z1(s.hidden)
    , z2(s.outputs)
    , dz1(s.hidden)
  {}
};

double accumulate_sample(ModelParams const &model, std::span<double const> x, std::uint32_t y,
                         double scale, std::vector<double> *gradient, Workspace &ws)
{
  ModelShape const &s = model.shape();
  forward_hidden(model, x, ws.z1);
  std::vector<double> &a1 = ws.z1;  // relu in place, sign of z1 kept through a1 > 0
  for (auto &v : a1)
  {
    v = v > 0.0 ? v : 0.0;
  }
  forward_output(model, a1, ws.z2);
  double const l = softmax_xent(ws.z2, y);
  if (gradient == nullptr)
  {
    return l;
  }

  // dz2 = p - onehot
  ws.z2[y] -= 1.0;
  for (auto &v : ws.z2)
  {
    v *= scale;
  }

  auto const   w2  = model.w2();
  double      *g   = gradient->data();
  double      *gw1 = g;
  double      *gb1 = g + s.inputs * s.hidden;
  double      *gw2 = gb1 + s.hidden;
  double      *gb2 = gw2 + s.hidden * s.outputs;

  for (std::size_t k = 0; k < s.outputs; ++k)
  {
    gb2[k] += ws.z2[k];
  }
  for (std::size_t j = 0; j < s.hidden; ++j)
  {
    double const *w2row = w2.data() + j * s.outputs;
    double        back  = 0.0;
    for (std::size_t k = 0; k < s.outputs; ++k)
    {
      back += w2row[k] * ws.z2[k];
    }
    ws.dz1[j] = a1[j] > 0.0 ? back : 0.0;
    double const aj = a1[j];
    if (aj != 0.0)
    {
      double *grow = gw2 + j * s.outputs;
      for (std::size_t k = 0; k < s.outputs; ++k)
      {
        grow[k] += aj * ws.z2[k];
      }
    }
  }
  for (std::size_t j = 0; j < s.hidden; ++j)
  {
    gb1[j] += ws.dz1[j];
  }
  for (std::size_t i = 0; i < s.inputs; ++i)
  {
    double const xi = x[i];
    if (xi == 0.0)
    {
      continue;
    }
    double *grow = gw1 + i * s.hidden;
    for (std::size_t j = 0; j < s.hidden; ++j)
    {
      grow[j] += xi * ws.dz1[j];
    }
  }
  return l;
}

}  // namespace

double loss_and_gradient(ModelParams const &model, Dataset const &data,
                         std::span<std::size_t const> rows, std::vector<double> &gradient)
{
  check_compatible(model, data);
  if (rows.empty())
  {
    throw std::invalid_argument("loss_and_gradient: empty batch");
  }
  gradient.assign(model.size(), 0.0);
  Workspace    ws(model.shape());
  double const scale = 1.0 / static_cast<double>(rows.size());
  double       total = 0.0;
  for (auto r : rows)
  {
    total += accumulate_sample(model, data.row(r), data.labels[r], scale, &gradient, ws);
  }
  return total * scale;
}

double loss(ModelParams const &model, Dataset const &data, std::span<std::size_t const> rows)
{
  check_compatible(model, data);
  if (rows.empty())
  {
    throw std::invalid_argument("loss: empty batch");
  }
  Workspace ws(model.shape());
  double    total = 0.0;
  for (auto r : rows)
  {
    total += accumulate_sample(model, data.row(r), data.labels[r], 1.0, nullptr, ws);
  }
  return total / static_cast<double>(rows.size());
}

ModelParams local_train(ModelParams const &model, Dataset const &train, TrainOptions const &options,
                        std::uint64_t seed)
{
  check_compatible(model, train);
  if (options.epochs == 0)
  {
    throw std::invalid_argument("local_train: epochs must be >= 1");
  }
  if (!(options.lr >= 0.0) || options.batch_size == 0)
  {
    throw std::invalid_argument("local_train: lr must be >= 0 and batch_size >= 1");
  }
  if (train.empty())
  {
    throw std::invalid_argument("local_train: empty training set");
  }

  ModelParams              out = model;
  Rng                      rng(seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> gradient;

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch)
  {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < order.size(); begin += options.batch_size)
    {
      std::size_t const n = std::min(options.batch_size, order.size() - begin);
      double const      l =
          loss_and_gradient(out, train, std::span<std::size_t const>(order).subspan(begin, n), gradient);
      if (!std::isfinite(l))
      {
        throw TrainingError("divergence: non-finite training loss");
      }
      auto values = out.values();
      for (std::size_t p = 0; p < values.size(); ++p)
      {
        values[p] -= options.lr * gradient[p];
      }
    }
  }
  if (!out.all_finite())
  {
    throw TrainingError("divergence: non-finite parameters");
  }
  return out;
}

std::uint32_t predict(ModelParams const &model, std::span<double const> sample)
{
  ModelShape const   &s = model.shape();
  std::vector<double> z1(s.hidden), z2(s.outputs);
  forward_hidden(model, sample, z1);
  for (auto &v : z1)
  {
    v = v > 0.0 ? v : 0.0;
  }
  forward_output(model, z1, z2);
  // max_element returns the first maximum, i.e. the lowest class index on ties
  return static_cast<std::uint32_t>(std::max_element(z2.begin(), z2.end()) - z2.begin());
}

double evaluate_accuracy(ModelParams const &model, Dataset const &data)
{
  check_compatible(model, data);
  if (data.empty())
  {
    throw std::invalid_argument("evaluate_accuracy: empty dataset");
  }
  ModelShape const   &s = model.shape();
  std::vector<double> z1(s.hidden), z2(s.outputs);
  std::size_t         correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
  {
    forward_hidden(model, data.row(i), z1);
    for (auto &v : z1)
    {
      v = v > 0.0 ? v : 0.0;
    }
    forward_output(model, z1, z2);
    auto const guess = static_cast<std::uint32_t>(std::max_element(z2.begin(), z2.end()) - z2.begin());
    correct += guess == data.labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

void hidden_activations(ModelParams const &model, std::span<double const> sample,
                        std::span<double> out)
{
  if (sample.size() != model.shape().inputs || out.size() != model.shape().hidden)
  {
    throw std::invalid_argument("hidden_activations: size mismatch");
  }
  forward_hidden(model, sample, out);
  for (auto &v : out)
  {
    v = v > 0.0 ? v : 0.0;
  }
}

}  // namespace tanglefl
