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

#include "tanglefl/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tanglefl {

void Dataset::push_back_from(Dataset const &other, std::size_t i)
{
  auto r = other.row(i);
  features.insert(features.end(), r.begin(), r.end());
  labels.push_back(other.labels[i]);
  origin.push_back(other.origin.empty() ? i : other.origin[i]);
}

Dataset Dataset::subset(std::span<std::size_t const> rows) const
{
  Dataset out;
  out.feature_count = feature_count;
  out.class_count   = class_count;
  out.features.reserve(rows.size() * feature_count);
  out.labels.reserve(rows.size());
  out.origin.reserve(rows.size());
  for (auto i : rows)
  {
    out.push_back_from(*this, i);
  }
  return out;
}

std::vector<std::size_t> Dataset::class_histogram() const
{
  std::vector<std::size_t> h(class_count, 0);
  for (auto y : labels)
  {
    ++h[y];
  }
  return h;
}

void Dataset::validate() const
{
  if (features.size() != labels.size() * feature_count)
  {
    throw std::invalid_argument("feature matrix does not match label count");
  }
  if (!origin.empty() && origin.size() != labels.size())
  {
    throw std::invalid_argument("origin index does not match label count");
  }
  for (auto y : labels)
  {
    if (y >= class_count)
    {
      throw std::invalid_argument("label " + std::to_string(y) + " out of range");
    }
  }
}

Dataset concat(std::span<Dataset const> parts)
{
  Dataset out;
  if (parts.empty())
  {
    return out;
  }
  out.feature_count = parts.front().feature_count;
  out.class_count   = parts.front().class_count;
  for (auto const &p : parts)
  {
    if (p.feature_count != out.feature_count || p.class_count != out.class_count)
    {
      throw std::invalid_argument("cannot concatenate datasets of different shapes");
    }
    for (std::size_t i = 0; i < p.size(); ++i)
    {
      out.push_back_from(p, i);
    }
  }
  return out;
}

DataSplit split_train_val_test(Dataset const &data, std::uint64_t seed)
{
  std::size_t const n = data.size();
  if (n < 3)
  {
    throw std::invalid_argument("need at least 3 rows to split 8:1:1");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t const held = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(n * 0.1)));
  std::span<std::size_t const> all(order);

  DataSplit split;
  split.validation = data.subset(all.subspan(0, held));
  split.test       = data.subset(all.subspan(held, held));
  split.train      = data.subset(all.subspan(2 * held));
  return split;
}

namespace {

// 8x8 glyphs, '#' = ink
constexpr std::array<std::array<char const *, 8>, 10> kGlyphs{{
    {"..####..", ".##..##.", ".##..##.", ".##..##.", ".##..##.", ".##..##.", ".##..##.", "..####.."},
    {"...##...", "..###...", ".####...", "...##...", "...##...", "...##...", "...##...", ".######."},
    {"..####..", ".##..##.", ".....##.", "....##..", "...##...", "..##....", ".##.....", ".######."},
    {"..####..", ".##..##.", ".....##.", "...###..", ".....##.", ".....##.", ".##..##.", "..####.."},
    {"....##..", "...###..", "..#.##..", ".#..##..", ".######.", "....##..", "....##..", "....##.."},
    {".######.", ".##.....", ".##.....", ".#####..", ".....##.", ".....##.", ".##..##.", "..####.."},
    {"..####..", ".##.....", ".##.....", ".#####..", ".##..##.", ".##..##.", ".##..##.", "..####.."},
    {".######.", ".....##.", "....##..", "....##..", "...##...", "...##...", "..##....", "..##...."},
    {"..####..", ".##..##.", ".##..##.", "..####..", ".##..##.", ".##..##.", ".##..##.", "..####.."},
    {"..####..", ".##..##.", ".##..##.", ".##..##.", "..#####.", ".....##.", ".....##.", "..####.."},
}};

}  // namespace

Dataset make_toy_digits(std::size_t samples, std::uint64_t seed)
{
  Dataset out;
  out.feature_count = 64;
  out.class_count   = 10;
  out.features.reserve(samples * 64);
  out.labels.reserve(samples);
  out.origin.reserve(samples);

  Rng                                        rng(seed);
  std::uniform_int_distribution<std::size_t> pick_class(0, 9);
  std::uniform_int_distribution<int>         shift(-1, 1);
  std::uniform_real_distribution<double>     ink(8.0, 16.0);
  std::normal_distribution<double>           noise(0.0, 3.0);
  std::bernoulli_distribution                dropout(0.10);

  std::array<double, 64> image{};
  for (std::size_t s = 0; s < samples; ++s)
  {
    auto const label = static_cast<std::uint32_t>(pick_class(rng));
    int const  dx    = shift(rng);
    int const  dy    = shift(rng);
    double const strength = ink(rng);
    for (int r = 0; r < 8; ++r)
    {
      for (int c = 0; c < 8; ++c)
      {
        int const  sr  = r - dy;
        int const  sc  = c - dx;
        bool const lit = sr >= 0 && sr < 8 && sc >= 0 && sc < 8 && kGlyphs[label][sr][sc] == '#';
        double     v   = lit && !dropout(rng) ? strength : 0.0;
        v += noise(rng);
        image[r * 8 + c] = std::clamp(v, 0.0, 16.0);
      }
    }
    out.features.insert(out.features.end(), image.begin(), image.end());
    out.labels.push_back(label);
    out.origin.push_back(s);
  }
  return out;
}

Dataset make_synthetic(std::size_t samples, std::size_t features, std::size_t classes,
                       std::uint64_t seed)
{
  if (features == 0 || classes < 2)
  {
    throw std::invalid_argument("synthetic task needs features >= 1 and classes >= 2");
  }
  Dataset out;
  out.feature_count = features;
  out.class_count   = classes;

  Rng                              rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  // class means on a sphere of radius 2, unit isotropic noise
  std::vector<double> means(classes * features);
  for (std::size_t c = 0; c < classes; ++c)
  {
    double norm = 0.0;
    for (std::size_t f = 0; f < features; ++f)
    {
      means[c * features + f] = unit(rng);
      norm += means[c * features + f] * means[c * features + f];
    }
    norm = std::sqrt(norm);
    for (std::size_t f = 0; f < features; ++f)
    {
      means[c * features + f] *= 2.0 / norm;
    }
  }

  std::uniform_int_distribution<std::size_t> pick_class(0, classes - 1);
  out.features.reserve(samples * features);
  for (std::size_t s = 0; s < samples; ++s)
  {
    auto const c = pick_class(rng);
    for (std::size_t f = 0; f < features; ++f)
    {
      out.features.push_back(means[c * features + f] + unit(rng));
    }
    out.labels.push_back(static_cast<std::uint32_t>(c));
    out.origin.push_back(s);
  }
  return out;
}

Dataset make_task(TaskKind task, std::size_t samples, std::uint64_t seed)
{
  switch (task)
  {
  case TaskKind::toy_digits:
    return make_toy_digits(samples, seed);
  case TaskKind::synthetic:
    return make_synthetic(samples, 64, 10, seed);
  }
  throw std::invalid_argument("unknown task");
}

void write_csv(std::ostream &out, Dataset const &data)
{
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i)
  {
    line.str({});
    for (double v : data.row(i))
    {
      line << v << ',';
    }
    line << data.labels[i] << '\n';
    out << line.str();
  }
}

Dataset read_csv(std::istream &in, std::size_t class_count)
{
  Dataset     out;
  out.class_count = class_count;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.empty())
    {
      continue;
    }
    std::vector<double> cells;
    std::stringstream   ss(line);
    std::string         cell;
    while (std::getline(ss, cell, ','))
    {
      try
      {
        cells.push_back(std::stod(cell));
      }
      catch (std::exception const &)
      {
        throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number '" +
                                    cell + "'");
      }
    }
    if (cells.size() < 2)
    {
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": too few columns");
    }
    if (out.feature_count == 0)
    {
      out.feature_count = cells.size() - 1;
    }
    else if (cells.size() - 1 != out.feature_count)
    {
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": column count changed");
    }
    double const label = cells.back();
    if (label < 0 || label >= static_cast<double>(class_count) || label != std::floor(label))
    {
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad label");
    }
    out.features.insert(out.features.end(), cells.begin(), cells.end() - 1);
    out.labels.push_back(static_cast<std::uint32_t>(label));
    out.origin.push_back(out.labels.size() - 1);
  }
  return out;
}

}  // namespace tanglefl
