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

#include "tanglefl/model.hpp"

#include "tanglefl/random.hpp"

#include <cmath>
#include <random>

namespace tanglefl {

ModelParams::ModelParams(ModelShape shape)
  : shape_{shape}
  , values_(shape.parameter_count(), 0.0)
{}

ModelParams::ModelParams(ModelShape shape, std::vector<double> values)
  : shape_{shape}
  , values_{std::move(values)}
{
  if (values_.size() != shape_.parameter_count())
  {
    throw std::invalid_argument("parameter vector length does not match model shape");
  }
}

std::span<double const> ModelParams::w1() const noexcept
{
  return std::span<double const>(values_).subspan(0, shape_.inputs * shape_.hidden);
}

std::span<double const> ModelParams::b1() const noexcept
{
  return std::span<double const>(values_).subspan(shape_.inputs * shape_.hidden, shape_.hidden);
}

std::span<double const> ModelParams::w2() const noexcept
{
  return std::span<double const>(values_).subspan(shape_.inputs * shape_.hidden + shape_.hidden,
                                                  shape_.hidden * shape_.outputs);
}

std::span<double const> ModelParams::b2() const noexcept
{
  return std::span<double const>(values_).subspan(values_.size() - shape_.outputs);
}

std::span<double> ModelParams::w1() noexcept
{
  return std::span<double>(values_).subspan(0, shape_.inputs * shape_.hidden);
}

std::span<double> ModelParams::b1() noexcept
{
  return std::span<double>(values_).subspan(shape_.inputs * shape_.hidden, shape_.hidden);
}

std::span<double> ModelParams::w2() noexcept
{
  return std::span<double>(values_).subspan(shape_.inputs * shape_.hidden + shape_.hidden,
                                            shape_.hidden * shape_.outputs);
}

std::span<double> ModelParams::b2() noexcept
{
  return std::span<double>(values_).subspan(values_.size() - shape_.outputs);
}

bool ModelParams::all_finite() const noexcept
{
  for (double v : values_)
  {
    if (!std::isfinite(v))
    {
      return false;
    }
  }
  return true;
}

ModelParams init_model(ModelShape shape, std::uint64_t seed)
{
  if (shape.inputs == 0 || shape.hidden == 0 || shape.outputs == 0)
  {
    throw std::invalid_argument("model dimensions must be positive");
  }
  ModelParams model(shape);
  Rng         rng(seed);

  double const bound1 = 1.0 / std::sqrt(static_cast<double>(shape.inputs));
  double const bound2 = 1.0 / std::sqrt(static_cast<double>(shape.hidden));
  std::uniform_real_distribution<double> layer1(-bound1, bound1);
  std::uniform_real_distribution<double> layer2(-bound2, bound2);

  for (auto &v : model.w1())
  {
    v = layer1(rng);
  }
  for (auto &v : model.b1())
  {
    v = layer1(rng);
  }
  for (auto &v : model.w2())
  {
    v = layer2(rng);
  }
  for (auto &v : model.b2())
  {
    v = layer2(rng);
  }
  return model;
}

}  // namespace tanglefl
