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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tanglefl {

/// Layer sizes of the one-hidden-layer rectified MLP.
struct ModelShape
{
  std::size_t inputs{64};
  std::size_t hidden{64};
  std::size_t outputs{10};

  std::size_t parameter_count() const noexcept
  {
    return inputs * hidden + hidden + hidden * outputs + outputs;
  }

  bool operator==(ModelShape const &) const = default;
};

/**
 * Flat parameter vector of the MLP plus its shape.
 *
 * Layout: W1 (inputs x hidden, row-major), b1 (hidden), W2 (hidden x outputs,
 * row-major), b2 (outputs). This is the unit that is stored, averaged and
 * trained; copies are cheap enough at desk scale that everything is passed by
 * value or const reference.
 */
class ModelParams
{
public:
  ModelParams() = default;
  explicit ModelParams(ModelShape shape);
  ModelParams(ModelShape shape, std::vector<double> values);

  ModelShape const &shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double>       values() noexcept { return values_; }
  std::span<double const> values() const noexcept { return values_; }

  std::span<double const> w1() const noexcept;
  std::span<double const> b1() const noexcept;
  std::span<double const> w2() const noexcept;
  std::span<double const> b2() const noexcept;
  std::span<double>       w1() noexcept;
  std::span<double>       b1() noexcept;
  std::span<double>       w2() noexcept;
  std::span<double>       b2() noexcept;

  bool all_finite() const noexcept;

  bool operator==(ModelParams const &) const = default;

private:
  ModelShape          shape_{};
  std::vector<double> values_;
};

/// Uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer.
ModelParams init_model(ModelShape shape, std::uint64_t seed);

}  // namespace tanglefl
