/*
 * Copyright 2026 The mccal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "core/subpops.hpp"

#include <algorithm>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace mccal {
namespace {

// Median of the distinct values; mean of the middle two for an even count.
double MedianOfDistinct(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void AppendBytes(std::string& key, const void* p, std::size_t n) {
  key.append(static_cast<const char*>(p), n);
}

void AppendStep(std::string& key, const SplitStep& step) {
  const std::uint64_t cov = step.covariate;
  AppendBytes(key, &cov, sizeof cov);
  AppendBytes(key, &step.threshold, sizeof step.threshold);
  key.push_back(step.direction == Direction::kBelow ? 'b' : 'a');
  const std::uint64_t k = step.nominal_order.size();
  AppendBytes(key, &k, sizeof k);
  for (double v : step.nominal_order) AppendBytes(key, &v, sizeof v);
}

// Nominal categories of one covariate: sorted distinct values of the full
// population and each row's position among them.
struct Categories {
  std::vector<double> values;
  std::vector<std::size_t> id_of_row;
};

Categories IndexCategories(const Matrix& cov, std::size_t j) {
  Categories c;
  c.values.reserve(cov.rows());
  for (std::size_t r = 0; r < cov.rows(); ++r) c.values.push_back(cov(r, j));
  std::sort(c.values.begin(), c.values.end());
  c.values.erase(std::unique(c.values.begin(), c.values.end()),
                 c.values.end());
  c.id_of_row.resize(cov.rows());
  for (std::size_t r = 0; r < cov.rows(); ++r) {
    c.id_of_row[r] = static_cast<std::size_t>(
        std::lower_bound(c.values.begin(), c.values.end(), cov(r, j)) -
        c.values.begin());
  }
  return c;
}

std::vector<std::size_t> ApplyStep(const Population& pop,
                                   std::span<const std::size_t> node,
                                   const SplitStep& step) {
  const Matrix& cov = pop.covariates();
  std::unordered_map<double, double> rank;
  for (std::size_t i = 0; i < step.nominal_order.size(); ++i) {
    rank.emplace(step.nominal_order[i], static_cast<double>(i));
  }
  std::vector<std::size_t> child;
  for (std::size_t row : node) {
    double v = cov(row, step.covariate);
    if (!step.nominal_order.empty()) {
      const auto it = rank.find(v);
      if (it == rank.end()) {
        Fail(ErrorCode::kInvalidArgument,
             "nominal order lacks a category present in the data");
      }
      v = it->second;
    }
    const bool below = v < step.threshold;
    if (below == (step.direction == Direction::kBelow)) child.push_back(row);
  }
  return child;
}

}  // namespace

GenerationResult GenerateSubpopulations(const Population& pop,
                                        const GeneratorConfig& cfg) {
  const std::size_t p = pop.num_covariates();
  if (p == 0) {
    Fail(ErrorCode::kNoCovariates, "subpopulation generation needs covariates");
  }
  if (cfg.ell == 0) Fail(ErrorCode::kInvalidArgument, "ell must be >= 1");
  if (cfg.min_size == 0) {
    Fail(ErrorCode::kInvalidArgument, "min_size must be >= 1");
  }
  if (cfg.min_size > pop.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "min_size exceeds the population size");
  }

  const Matrix& cov = pop.covariates();
  const auto kinds = pop.covariate_kinds();
  std::vector<Categories> categories(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (kinds[j] == CovariateKind::kNominal) {
      categories[j] = IndexCategories(cov, j);
    }
  }

  Rng rng(cfg.seed);
  GenerationResult result;
  std::unordered_set<std::string> seen;
  const std::size_t max_attempts = cfg.EffectiveMaxAttempts();

  std::vector<std::size_t> root(pop.size());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = i;

  // rank_of[j][category id] for the current path.
  std::vector<std::vector<std::size_t>> rank_of(p);

  while (result.subpops.size() < cfg.ell && result.attempts < max_attempts) {
    ++result.attempts;
    for (std::size_t j = 0; j < p; ++j) {
      if (kinds[j] != CovariateKind::kNominal) continue;
      auto& ranks = rank_of[j];
      ranks.resize(categories[j].values.size());
      for (std::size_t c = 0; c < ranks.size(); ++c) ranks[c] = c;
      rng.Shuffle(ranks);
    }

    std::vector<std::size_t> node = root;
    std::vector<SplitStep> path;
    std::string key;
    std::vector<double> values;
    while (result.subpops.size() < cfg.ell) {
      const std::size_t j = rng.UniformIndex(p);
      const bool nominal = kinds[j] == CovariateKind::kNominal;
      auto value = [&](std::size_t row) {
        return nominal ? static_cast<double>(
                             rank_of[j][categories[j].id_of_row[row]])
                       : cov(row, j);
      };

      values.clear();
      for (std::size_t row : node) values.push_back(value(row));
      const double median = MedianOfDistinct(values);
      const Direction dir = rng.Coin() ? Direction::kAtOrAbove
                                       : Direction::kBelow;

      std::vector<std::size_t> child;
      for (std::size_t row : node) {
        if ((value(row) < median) == (dir == Direction::kBelow)) {
          child.push_back(row);
        }
      }
      if (child.size() < cfg.min_size || child.size() == node.size()) break;

      SplitStep step{j, median, dir, {}};
      if (nominal) {
        const auto& cats = categories[j].values;
        step.nominal_order.resize(cats.size());
        for (std::size_t c = 0; c < cats.size(); ++c) {
          step.nominal_order[rank_of[j][c]] = cats[c];
        }
      }
      AppendStep(key, step);
      path.push_back(std::move(step));
      node = std::move(child);

      if (seen.insert(key).second) {
        result.subpops.push_back(
            {node, path, result.subpops.size() + 1});
      }
    }
  }

  if (result.subpops.empty()) {
    std::ostringstream os;
    os << "no subpopulation with at least " << cfg.min_size
       << " members was produced in " << result.attempts << " attempts";
    Fail(ErrorCode::kAttemptsExhausted, os.str());
  }
  result.exhausted = result.subpops.size() < cfg.ell;
  return result;
}

std::vector<std::size_t> Materialize(const Population& pop,
                                     std::span<const SplitStep> path) {
  std::vector<std::size_t> node(pop.size());
  for (std::size_t i = 0; i < node.size(); ++i) node[i] = i;
  for (const SplitStep& step : path) {
    if (step.covariate >= pop.num_covariates()) {
      Fail(ErrorCode::kInvalidArgument, "split refers to a missing covariate");
    }
    node = ApplyStep(pop, node, step);
  }
  return node;
}

std::vector<SubpopulationView> MakeViews(
    const Population& pop, std::span<const GeneratedSubpop> subpops) {
  std::vector<SubpopulationView> views;
  views.reserve(subpops.size() + 1);
  views.push_back(SubpopulationView::Full(pop));
  for (const auto& s : subpops) views.emplace_back(pop, s.indices, s.label);
  return views;
}

std::string DescribePath(std::span<const SplitStep> path,
                         std::span<const std::string> names) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const SplitStep& s = path[i];
    if (i > 0) os << " & ";
    if (s.covariate < names.size()) {
      os << names[s.covariate];
    } else {
      os << 'x' << s.covariate;
    }
    if (s.nominal_order.empty()) {
      os << (s.direction == Direction::kBelow ? " < " : " >= ") << s.threshold;
      continue;
    }
    os << " in {";
    bool first = true;
    for (std::size_t r = 0; r < s.nominal_order.size(); ++r) {
      const bool below = static_cast<double>(r) < s.threshold;
      if (below != (s.direction == Direction::kBelow)) continue;
      if (!first) os << ", ";
      os << s.nominal_order[r];
      first = false;
    }
    os << '}';
  }
  return os.str();
}

}  // namespace mccal
