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

#include "tanglefl/selection.hpp"

#include "tanglefl/random.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tanglefl {

double tipc(std::uint64_t current_epoch, std::uint64_t tip_epoch)
{
  std::uint64_t const gap =
      current_epoch > tip_epoch ? current_epoch - tip_epoch : tip_epoch - current_epoch;
  return std::exp(-static_cast<double>(gap));
}

double freshness(std::uint64_t current_epoch, std::uint64_t tip_epoch, double now, double tip_time,
                 double alpha)
{
  if (!(alpha > 0.0))
  {
    throw std::invalid_argument("freshness: alpha must be > 0");
  }
  if (!(now >= tip_time))
  {
    throw std::invalid_argument("freshness: clock regression (now < tip time)");
  }
  return tipc(current_epoch, tip_epoch) * (1.0 / (1.0 + alpha * (now - tip_time)));
}

TipPartition partition_tips(Ledger const &ledger, NodeId start)
{
  if (!ledger.contains(start))
  {
    throw LedgerError("partition_tips: unknown start node " + std::to_string(start.value));
  }

  std::vector<bool>  visited(ledger.size(), false);
  std::vector<bool>  reachable(ledger.size(), false);
  std::deque<NodeId> queue{start};
  visited[start.value] = true;
  while (!queue.empty())
  {
    NodeId const node = queue.front();
    queue.pop_front();
    auto const approvers = ledger.approvers(node);
    if (approvers.empty())
    {
      reachable[node.value] = true;
    }
    for (auto next : approvers)
    {
      if (!visited[next.value])
      {
        visited[next.value] = true;
        queue.push_back(next);
      }
    }
  }

  TipPartition out;
  for (auto tip : ledger.tips())
  {
    (reachable[tip.value] ? out.reachable : out.unreachable).push_back(tip);
  }
  return out;
}

std::string to_string(FreshnessPolicy policy)
{
  switch (policy)
  {
  case FreshnessPolicy::product:
    return "product";
  case FreshnessPolicy::tie_break:
    return "tie-break";
  case FreshnessPolicy::ignore:
    return "ignore";
  }
  return "?";
}

FreshnessPolicy parse_freshness_policy(std::string const &text)
{
  if (text == "product")
  {
    return FreshnessPolicy::product;
  }
  if (text == "tie-break")
  {
    return FreshnessPolicy::tie_break;
  }
  if (text == "ignore")
  {
    return FreshnessPolicy::ignore;
  }
  throw std::invalid_argument("freshness policy must be product, tie-break or ignore");
}

std::size_t SelectionConfig::reachable_quota() const
{
  return static_cast<std::size_t>(std::llround(lambda * static_cast<double>(tips)));
}

std::size_t SelectionConfig::unreachable_quota() const
{
  return tips - reachable_quota();
}

void SelectionConfig::validate() const
{
  if (tips < 1)
  {
    throw std::invalid_argument("tips: N must be >= 1");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0))
  {
    throw std::invalid_argument("lambda: must lie in [0,1]");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha))
  {
    throw std::invalid_argument("alpha: must be > 0");
  }
  if (prefilter && *prefilter < unreachable_quota())
  {
    throw std::invalid_argument("prefilter: p must be >= N2 = N - round(lambda * N)");
  }
}

namespace {

// Ranking keys. Every comparator ends on the node id so orderings are total.
bool higher_score(TipScore const &a, TipScore const &b, FreshnessPolicy policy)
{
  double const acc_a = a.measured_accuracy.value_or(0.0);
  double const acc_b = b.measured_accuracy.value_or(0.0);
  switch (policy)
  {
  case FreshnessPolicy::product:
  {
    double const sa = a.freshness * acc_a;
    double const sb = b.freshness * acc_b;
    if (sa != sb)
    {
      return sa > sb;
    }
    break;
  }
  case FreshnessPolicy::tie_break:
  case FreshnessPolicy::ignore:
    if (acc_a != acc_b)
    {
      return acc_a > acc_b;
    }
    if (policy == FreshnessPolicy::tie_break && a.freshness != b.freshness)
    {
      return a.freshness > b.freshness;
    }
    break;
  }
  return a.tip < b.tip;
}

bool higher_accuracy(TipScore const &a, TipScore const &b, FreshnessPolicy policy)
{
  double const acc_a = a.measured_accuracy.value_or(0.0);
  double const acc_b = b.measured_accuracy.value_or(0.0);
  if (acc_a != acc_b)
  {
    return acc_a > acc_b;
  }
  if (policy != FreshnessPolicy::ignore && a.freshness != b.freshness)
  {
    return a.freshness > b.freshness;
  }
  return a.tip < b.tip;
}

bool more_similar(TipScore const &a, TipScore const &b)
{
  double const sa = a.similarity_to_selector.value_or(0.0);
  double const sb = b.similarity_to_selector.value_or(0.0);
  if (sa != sb)
  {
    return sa > sb;
  }
  if (a.freshness != b.freshness)
  {
    return a.freshness > b.freshness;
  }
  return a.tip < b.tip;
}

}  // namespace

SelectionResult select_tips(Ledger const &ledger, Selector const &selector,
                            SelectionConfig const &config, SimilarityRegistry const &registry,
                            AccuracyEvaluator const &evaluator)
{
  config.validate();
  auto const all_tips = ledger.tips();
  if (all_tips.empty())
  {
    throw LedgerError("select_tips: ledger has no tips");
  }

  TipPartition const parts = partition_tips(ledger, selector.anchor);

  SelectionResult result;
  result.reachable_pool   = parts.reachable.size();
  result.unreachable_pool = parts.unreachable.size();

  auto score_of = [&](NodeId tip, bool reachable) {
    auto const &md = ledger.node(tip).metadata;
    TipScore    s;
    s.tip       = tip;
    s.reachable = reachable;
    s.tipc      = tipc(selector.epoch, md.current_epoch);
    s.freshness = freshness(selector.epoch, md.current_epoch, selector.now, md.timestamp, config.alpha);
    return s;
  };
  auto measure = [&](TipScore &s) {
    if (!s.measured_accuracy)
    {
      s.measured_accuracy = evaluator(s.tip);
      ++result.evaluations;
    }
  };

  std::vector<TipScore> reach;
  std::vector<TipScore> unreach;
  for (auto t : parts.reachable)
  {
    reach.push_back(score_of(t, true));
  }
  for (auto t : parts.unreachable)
  {
    unreach.push_back(score_of(t, false));
  }

  std::size_t const n     = config.tips;
  std::size_t const quota = config.reachable_quota();

  // quotas after backfilling a short branch from the other one
  std::size_t take_r = std::min(quota, reach.size());
  std::size_t take_u = std::min(n - quota, unreach.size());
  if (take_r < quota)
  {
    take_u = std::min(unreach.size(), n - take_r);
  }
  if (take_u < n - quota)
  {
    take_r = std::min(reach.size(), n - take_u);
  }

  // reachable branch: evaluate all, rank by the freshness policy
  if (take_r > 0)
  {
    for (auto &s : reach)
    {
      measure(s);
    }
    std::stable_sort(reach.begin(), reach.end(),
                     [&](auto const &a, auto const &b) { return higher_score(a, b, config.policy); });
  }

  // unreachable branch: similarity prefilter of p candidates, then accuracy ranking
  if (take_u > 0)
  {
    for (auto &s : unreach)
    {
      auto const uploader = ledger.node(s.tip).metadata.client_id;
      s.similarity_to_selector =
          registry.query(selector.registry_round, selector.client, uploader).value_or(0.0);
      ++result.registry_queries;
    }
    std::stable_sort(unreach.begin(), unreach.end(), more_similar);

    std::size_t const default_p = std::min(2 * (n - quota), unreach.size());
    std::size_t       p         = std::min(config.prefilter.value_or(default_p), unreach.size());
    p                           = std::max(p, take_u);
    for (std::size_t i = 0; i < p; ++i)
    {
      measure(unreach[i]);
    }
    std::stable_sort(unreach.begin(), unreach.begin() + static_cast<std::ptrdiff_t>(p),
                     [&](auto const &a, auto const &b) { return higher_accuracy(a, b, config.policy); });
  }

  for (std::size_t i = 0; i < take_r; ++i)
  {
    reach[i].chosen = true;
    result.chosen.push_back(reach[i].tip);
  }
  for (std::size_t i = 0; i < take_u; ++i)
  {
    unreach[i].chosen = true;
    result.chosen.push_back(unreach[i].tip);
  }
  result.reachable_picks   = take_r;
  result.unreachable_picks = take_u;

  if (all_tips.size() == 1 && n == 2)
  {
    result.chosen.push_back(result.chosen.back());
  }

  result.candidates.reserve(reach.size() + unreach.size());
  result.candidates.insert(result.candidates.end(), reach.begin(), reach.end());
  result.candidates.insert(result.candidates.end(), unreach.begin(), unreach.end());
  std::sort(result.candidates.begin(), result.candidates.end(),
            [](auto const &a, auto const &b) { return a.tip < b.tip; });
  return result;
}

std::vector<NodeId> select_random_tips(Ledger const &ledger, std::size_t count, std::uint64_t seed)
{
  auto tips = ledger.tips();
  if (tips.empty())
  {
    throw LedgerError("select_random_tips: ledger has no tips");
  }
  Rng rng(seed);
  if (tips.size() >= count)
  {
    std::shuffle(tips.begin(), tips.end(), rng);
    tips.resize(count);
    return tips;
  }
  std::uniform_int_distribution<std::size_t> pick(0, tips.size() - 1);
  std::vector<NodeId>                        out;
  for (std::size_t i = 0; i < count; ++i)
  {
    out.push_back(tips[pick(rng)]);
  }
  return out;
}

ModelParams aggregate(std::span<ModelParams const *const> models)
{
  if (models.empty())
  {
    throw std::invalid_argument("aggregate: no models");
  }
  ModelShape const shape = models.front()->shape();
  for (auto const *m : models)
  {
    if (m->shape() != shape || m->size() != shape.parameter_count())
    {
      throw std::invalid_argument("aggregate: model dimension mismatch");
    }
  }

  // Per coordinate: sort, then min + sum(v - min) / n. Sorting makes the result
  // independent of argument order; anchoring on the minimum makes a list of
  // equal models come back bit-identical.
  ModelParams         out(shape);
  auto                dst = out.values();
  std::size_t const   n   = models.size();
  double const        dn  = static_cast<double>(n);
  std::vector<double> column(n);
  for (std::size_t i = 0; i < dst.size(); ++i)
  {
    for (std::size_t k = 0; k < n; ++k)
    {
      column[k] = models[k]->values()[i];
    }
    std::sort(column.begin(), column.end());
    double spread = 0.0;
    for (std::size_t k = 1; k < n; ++k)
    {
      spread += column[k] - column[0];
    }
    dst[i] = column[0] + spread / dn;
  }
  return out;
}

ModelParams aggregate(std::span<ModelParams const> models)
{
  std::vector<ModelParams const *> ptrs;
  ptrs.reserve(models.size());
  for (auto const &m : models)
  {
    ptrs.push_back(&m);
  }
  return aggregate(ptrs);
}

}  // namespace tanglefl
