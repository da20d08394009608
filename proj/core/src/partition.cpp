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

#include "tanglefl/partition.hpp"

#include "tanglefl/random.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tanglefl {

void PartitionSpec::validate() const
{
  if (client_count == 0)
  {
    throw std::invalid_argument("partition: client_count must be >= 1");
  }
  if (mode == PartitionMode::dirichlet && !(beta > 0.0 && std::isfinite(beta)))
  {
    throw std::invalid_argument("partition: dirichlet beta must be > 0");
  }
}

PartitionSpec parse_partition(std::string const &text)
{
  PartitionSpec spec;
  if (text == "iid")
  {
    spec.mode = PartitionMode::iid;
    return spec;
  }
  std::string const prefix = "dirichlet:";
  if (text.rfind(prefix, 0) == 0)
  {
    spec.mode = PartitionMode::dirichlet;
    std::size_t consumed = 0;
    auto const  body     = text.substr(prefix.size());
    try
    {
      spec.beta = std::stod(body, &consumed);
    }
    catch (std::exception const &)
    {
      consumed = 0;
    }
    if (consumed == 0 || consumed != body.size() || !(spec.beta > 0.0) || !std::isfinite(spec.beta))
    {
      throw std::invalid_argument("partition: dirichlet beta must be a number > 0");
    }
    return spec;
  }
  throw std::invalid_argument("partition must be 'iid' or 'dirichlet:<beta>'");
}

std::string format_partition(PartitionSpec const &spec)
{
  if (spec.mode == PartitionMode::iid)
  {
    return "iid";
  }
  char       buf[32];
  auto const end = std::to_chars(buf, buf + sizeof(buf), spec.beta).ptr;
  return "dirichlet:" + std::string(buf, end);
}

ClassShares dirichlet_shares(std::size_t classes, std::size_t clients, double beta,
                             std::uint64_t seed)
{
  Rng                             rng(seed);
  std::gamma_distribution<double> gamma(beta, 1.0);
  ClassShares                     shares(classes, std::vector<double>(clients, 0.0));
  for (auto &row : shares)
  {
    double total = 0.0;
    // tiny beta can underflow every draw; redraw the row in that case
    while (!(total > 0.0))
    {
      total = 0.0;
      for (auto &v : row)
      {
        v = gamma(rng);
        total += v;
      }
    }
    for (auto &v : row)
    {
      v /= total;
    }
  }
  return shares;
}

namespace {

std::vector<std::vector<std::size_t>> cut_by_shares(Dataset const &data, ClassShares const &shares,
                                                    Rng &rng)
{
  std::size_t const clients = shares.front().size();
  std::vector<std::vector<std::size_t>> by_class(data.class_count);
  for (std::size_t i = 0; i < data.size(); ++i)
  {
    by_class[data.labels[i]].push_back(i);
  }

  std::vector<std::vector<std::size_t>> rows(clients);
  for (std::size_t c = 0; c < data.class_count; ++c)
  {
    auto &members = by_class[c];
    std::shuffle(members.begin(), members.end(), rng);
    double      cumulative = 0.0;
    std::size_t begin      = 0;
    for (std::size_t k = 0; k < clients; ++k)
    {
      cumulative += shares[c][k];
      std::size_t end = k + 1 == clients
                            ? members.size()
                            : std::min(members.size(), static_cast<std::size_t>(std::llround(
                                                           cumulative * members.size())));
      end = std::max(end, begin);
      rows[k].insert(rows[k].end(), members.begin() + begin, members.begin() + end);
      begin = end;
    }
  }
  return rows;
}

}  // namespace

std::vector<Dataset> partition(Dataset const &data, PartitionSpec const &spec)
{
  spec.validate();
  if (data.empty())
  {
    throw std::invalid_argument("partition: dataset is empty");
  }
  if (spec.client_count > data.size())
  {
    throw std::invalid_argument("partition: more clients than samples");
  }

  Rng                                   rng(derive_seed(spec.seed, {0}));
  std::vector<std::vector<std::size_t>> rows;

  if (spec.mode == PartitionMode::iid)
  {
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    rows.resize(spec.client_count);
    std::size_t const base  = data.size() / spec.client_count;
    std::size_t const extra = data.size() % spec.client_count;
    std::size_t       at    = 0;
    for (std::size_t k = 0; k < spec.client_count; ++k)
    {
      std::size_t const n = base + (k < extra ? 1 : 0);
      rows[k].assign(order.begin() + at, order.begin() + at + n);
      at += n;
    }
  }
  else
  {
    std::size_t const floor_size = std::min(spec.min_client_size, data.size() / spec.client_count);
    constexpr int     kMaxAttempts = 10000;
    for (int attempt = 0;; ++attempt)
    {
      if (attempt == kMaxAttempts)
      {
        throw std::invalid_argument("partition: could not satisfy the minimum client size");
      }
      auto shares = dirichlet_shares(data.class_count, spec.client_count, spec.beta,
                                     derive_seed(spec.seed, {1, static_cast<std::uint64_t>(attempt)}));
      rows = cut_by_shares(data, shares, rng);
      bool const ok = std::all_of(rows.begin(), rows.end(),
                                  [&](auto const &r) { return r.size() >= std::max<std::size_t>(1, floor_size); });
      if (ok)
      {
        break;
      }
    }
  }

  std::vector<Dataset> out;
  out.reserve(rows.size());
  for (auto &r : rows)
  {
    std::sort(r.begin(), r.end());
    out.push_back(data.subset(r));
  }
  return out;
}

double label_entropy(Dataset const &data)
{
  if (data.empty())
  {
    return 0.0;
  }
  double h = 0.0;
  for (auto count : data.class_histogram())
  {
    if (count > 0)
    {
      double const p = static_cast<double>(count) / static_cast<double>(data.size());
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace tanglefl
