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
#include "tanglefl/partition.hpp"
#include "tanglefl/selection.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tanglefl {

/// Raised for malformed or out-of-range configuration; `line` is 0 when not file-based.
class ConfigError : public std::runtime_error
{
public:
  ConfigError(std::size_t line, std::string const &field, std::string const &message);

  std::size_t        line() const noexcept { return line_; }
  std::string const &field() const noexcept { return field_; }
  std::string const &message() const noexcept { return message_; }

private:
  std::size_t line_;
  std::string field_;
  std::string message_;
};

enum class TipSelectionMode
{
  three_factor,
  random
};

struct RunConfig
{
  TaskKind      task{TaskKind::toy_digits};
  std::size_t   samples{6000};
  std::size_t   hidden{64};
  std::size_t   signature_groups{8};
  std::size_t   clients{10};

  SelectionConfig  selection{};
  TipSelectionMode tip_selection{TipSelectionMode::three_factor};

  PartitionMode partition_mode{PartitionMode::iid};
  double        beta{0.1};
  std::uint64_t seed{1};

  std::size_t           max_global_iters{200};
  std::size_t           patience{5};
  std::size_t           local_epochs{5};
  double                lr{0.01};
  std::size_t           batch_size{32};
  std::optional<double> target_accuracy;

  std::vector<double> speed_factors;  // empty = auto (log-uniform in [1, 5])
  double              base_epoch_time{1.0};
  double              eval_cost_per_sample{1e-3};
  double              registry_query_cost{0.0};

  bool        trace{false};
  std::string out_dir{"out"};

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  bool operator==(RunConfig const &) const = default;
};

/**
 * Parses flat `key = value` text with `#` comments. Unknown keys, duplicate
 * keys and invalid values are errors that carry the line number.
 */
RunConfig parse_config(std::istream &in);
RunConfig load_config(std::string const &path);

/// Every key with defaults resolved; parse_config(write_config(c)) == c.
void write_config(std::ostream &out, RunConfig const &config);

std::string task_name(TaskKind task);

}  // namespace tanglefl
