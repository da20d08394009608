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

#include "tanglefl/ledger.hpp"
#include "tanglefl/model.hpp"
#include "tanglefl/signature.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tanglefl {

/// exp(-|current_epoch - tip_epoch|).
double tipc(std::uint64_t current_epoch, std::uint64_t tip_epoch);

/// tipc * 1 / (1 + alpha * (now - tip_time)). Throws std::invalid_argument on
/// clock regression or alpha <= 0.
double freshness(std::uint64_t current_epoch, std::uint64_t tip_epoch, double now, double tip_time,
                 double alpha);

struct TipPartition
{
  std::vector<NodeId> reachable;
  std::vector<NodeId> unreachable;
};

/**
 * Breadth-first search over approved-by edges from `start`. Tips met on the way
 * are reachable; every other tip is unreachable. Both lists ascend by id.
 */
TipPartition partition_tips(Ledger const &ledger, NodeId start);

/// How freshness enters the reachable-branch ranking.
enum class FreshnessPolicy
{
  product,    // freshness * accuracy
  tie_break,  // accuracy, then freshness
  ignore      // accuracy only
};

std::string     to_string(FreshnessPolicy policy);
FreshnessPolicy parse_freshness_policy(std::string const &text);

struct SelectionConfig
{
  std::size_t                tips{2};
  double                     lambda{0.5};
  double                     alpha{0.1};
  std::optional<std::size_t> prefilter;  // p; default min(2 * N2, pool)
  FreshnessPolicy            policy{FreshnessPolicy::product};

  std::size_t reachable_quota() const;    // round(lambda * N)
  std::size_t unreachable_quota() const;  // N - reachable_quota()

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(SelectionConfig const &) const = default;
};

struct Selector
{
  std::uint64_t client{0};
  NodeId        anchor{kGenesis};  // the selector's latest node
  std::uint64_t epoch{0};          // T_cur
  double        now{0.0};
  std::uint64_t registry_round{0};
};

struct TipScore
{
  NodeId                tip;
  double                tipc{0.0};
  double                freshness{0.0};
  std::optional<double> measured_accuracy;
  std::optional<double> similarity_to_selector;
  bool                  reachable{false};
  bool                  chosen{false};
};

/// Measures a tip's model on the selector's validation set.
using AccuracyEvaluator = std::function<double(NodeId)>;

struct SelectionResult
{
  std::vector<NodeId>   chosen;      // rank order: reachable picks, then unreachable picks
  std::vector<TipScore> candidates;  // every tip, ascending id
  std::size_t           reachable_pool{0};
  std::size_t           unreachable_pool{0};
  std::size_t           reachable_picks{0};
  std::size_t           unreachable_picks{0};
  std::size_t           evaluations{0};
  std::size_t           registry_queries{0};
};

/**
 * Three-factor tip selection.
 *
 * Reachable tips are all evaluated and ranked by the freshness policy.
 * Unreachable tips are first narrowed to the `p` most similar uploaders, then
 * evaluated and ranked by accuracy with freshness as tie-break. A branch that
 * cannot meet its quota is backfilled from the other one. A single-tip ledger
 * with N = 2 yields that tip twice.
 */
SelectionResult select_tips(Ledger const &ledger, Selector const &selector,
                            SelectionConfig const &config, SimilarityRegistry const &registry,
                            AccuracyEvaluator const &evaluator);

/// Baseline: N tips drawn uniformly (with replacement when fewer than N exist).
std::vector<NodeId> select_random_tips(Ledger const &ledger, std::size_t count, std::uint64_t seed);

/// Coordinate-wise mean. Throws std::invalid_argument on empty input or shape mismatch.
ModelParams aggregate(std::span<ModelParams const *const> models);
ModelParams aggregate(std::span<ModelParams const> models);

}  // namespace tanglefl
