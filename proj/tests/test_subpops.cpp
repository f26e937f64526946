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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/subpops.hpp"

namespace mccal {
namespace {

Population WithCovariates(const Matrix& cov,
                          std::vector<CovariateKind> kinds) {
  std::vector<Observation> raw(cov.rows());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = {(i + 0.5) / raw.size(), static_cast<double>(i % 2), 1.0};
  }
  return BuildPopulation(raw, cov, kinds, Mode::kBernoulli);
}

Population RandomPopulation(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  Matrix cov(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    cov(i, 0) = rng.Uniform();
    cov(i, 1) = static_cast<double>(rng.UniformIndex(20));
    cov(i, 2) = static_cast<double>(rng.UniformIndex(5));  // nominal
  }
  return WithCovariates(cov, {CovariateKind::kOrdinal, CovariateKind::kOrdinal,
                              CovariateKind::kNominal});
}

ErrorCode CodeOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(Generate, FirstSplitAtMedianOfFourValues) {
  const auto pop = WithCovariates(Matrix(4, 1, {1, 2, 3, 4}),
                                  {CovariateKind::kOrdinal});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto result = GenerateSubpopulations(pop, {1, 1, seed, 0});
    ASSERT_EQ(result.subpops.size(), 1u);
    const auto& first = result.subpops[0];
    ASSERT_EQ(first.path.size(), 1u);
    EXPECT_EQ(first.path[0].threshold, 2.5);
    const std::vector<std::size_t> expected =
        first.path[0].direction == Direction::kBelow
            ? std::vector<std::size_t>{0, 1}
            : std::vector<std::size_t>{2, 3};
    EXPECT_EQ(first.indices, expected);
  }
}

TEST(Generate, ConstantCovariateTerminates) {
  const auto pop = WithCovariates(Matrix(30, 1, 7.0), {CovariateKind::kOrdinal});
  EXPECT_EQ(CodeOf([&] { GenerateSubpopulations(pop, {5, 1, 1, 50}); }),
            ErrorCode::kAttemptsExhausted);
}

TEST(Generate, SameSeedSameOutput) {
  const auto pop = RandomPopulation(1, 400);
  const auto a = GenerateSubpopulations(pop, {200, 10, 42, 0});
  const auto b = GenerateSubpopulations(pop, {200, 10, 42, 0});
  ASSERT_EQ(a.subpops.size(), b.subpops.size());
  for (std::size_t i = 0; i < a.subpops.size(); ++i) {
    EXPECT_EQ(a.subpops[i].indices, b.subpops[i].indices);
    EXPECT_EQ(a.subpops[i].path, b.subpops[i].path);
    EXPECT_EQ(a.subpops[i].label, b.subpops[i].label);
  }
  const auto c = GenerateSubpopulations(pop, {200, 10, 43, 0});
  bool differs = c.subpops.size() != a.subpops.size();
  for (std::size_t i = 0; !differs && i < a.subpops.size(); ++i) {
    differs = a.subpops[i].indices != c.subpops[i].indices;
  }
  EXPECT_TRUE(differs);
}

TEST(Generate, ContractProperties) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pop = RandomPopulation(seed + 100, 300);
    const std::size_t m = 5 + seed;
    const auto result = GenerateSubpopulations(pop, {150, m, seed, 0});
    std::set<std::string> paths;
    for (std::size_t i = 0; i < result.subpops.size(); ++i) {
      const auto& s = result.subpops[i];
      EXPECT_EQ(s.label, i + 1);
      EXPECT_GE(s.indices.size(), m);
      ASSERT_FALSE(s.path.empty());
      EXPECT_TRUE(std::is_sorted(s.indices.begin(), s.indices.end()));
      EXPECT_EQ(Materialize(pop, s.path), s.indices);

      const auto parent = Materialize(
          pop, std::span<const SplitStep>(s.path).first(s.path.size() - 1));
      EXPECT_LT(s.indices.size(), parent.size());
      EXPECT_TRUE(std::includes(parent.begin(), parent.end(),
                                s.indices.begin(), s.indices.end()));

      std::string key;
      for (const auto& step : s.path) {
        key += std::to_string(step.covariate) + ":" +
               std::to_string(step.threshold) + ":" +
               (step.direction == Direction::kBelow ? "b" : "a") + ":";
        for (double v : step.nominal_order) key += std::to_string(v) + ",";
        key += "|";
      }
      EXPECT_TRUE(paths.insert(key).second) << "duplicate split path";
    }
  }
}

TEST(Generate, SingleOrdinalGivesContiguousRanges) {
  const std::size_t n = 37;
  Matrix cov(n, 1);
  // Covariate order differs from score order.
  for (std::size_t i = 0; i < n; ++i) cov(i, 0) = static_cast<double>((i * 11) % n);
  const auto pop = WithCovariates(cov, {CovariateKind::kOrdinal});
  const auto result = GenerateSubpopulations(pop, {60, 1, 9, 0});
  ASSERT_FALSE(result.subpops.empty());
  for (const auto& s : result.subpops) {
    std::vector<double> values;
    for (std::size_t i : s.indices) values.push_back(pop.covariates()(i, 0));
    std::sort(values.begin(), values.end());
    EXPECT_EQ(values.back() - values.front() + 1.0,
              static_cast<double>(values.size()));
  }
}

TEST(Generate, NominalOrderIsFixedAlongAPath) {
  const auto pop = RandomPopulation(5, 500);
  const auto result = GenerateSubpopulations(pop, {300, 3, 8, 0});
  std::size_t nominal_steps = 0;
  for (const auto& s : result.subpops) {
    const std::vector<double>* order = nullptr;
    for (const auto& step : s.path) {
      if (step.covariate != 2) {
        EXPECT_TRUE(step.nominal_order.empty());
        continue;
      }
      ++nominal_steps;
      EXPECT_EQ(step.nominal_order.size(), 5u);
      if (order != nullptr) EXPECT_EQ(*order, step.nominal_order);
      order = &step.nominal_order;
    }
  }
  EXPECT_GT(nominal_steps, 0u);
}

TEST(Generate, NominalOrdersVaryAcrossPaths) {
  const auto pop = RandomPopulation(6, 500);
  const auto result = GenerateSubpopulations(pop, {300, 3, 8, 0});
  std::set<std::vector<double>> orders;
  for (const auto& s : result.subpops) {
    for (const auto& step : s.path) {
      if (!step.nominal_order.empty()) orders.insert(step.nominal_order);
    }
  }
  EXPECT_GT(orders.size(), 1u);
}

TEST(Generate, StopsAtEll) {
  const auto pop = RandomPopulation(2, 1000);
  const auto result = GenerateSubpopulations(pop, {17, 10, 1, 0});
  EXPECT_EQ(result.subpops.size(), 17u);
  EXPECT_FALSE(result.exhausted);
}

TEST(Generate, PartialResultWhenAttemptsRunOut) {
  // Four distinct values admit only a handful of distinct paths.
  const auto pop = WithCovariates(Matrix(4, 1, {1, 2, 3, 4}),
                                  {CovariateKind::kOrdinal});
  const auto result = GenerateSubpopulations(pop, {100, 1, 3, 200});
  EXPECT_TRUE(result.exhausted);
  EXPECT_EQ(result.attempts, 200u);
  // {1,2}, {3,4}, and the four singletons.
  EXPECT_EQ(result.subpops.size(), 6u);
}

TEST(Generate, Errors) {
  const auto none = BuildPopulation(std::vector<Observation>{{0.5, 1, 1}},
                                    Matrix(), {}, Mode::kBernoulli);
  EXPECT_EQ(CodeOf([&] { GenerateSubpopulations(none, {1, 1, 0, 0}); }),
            ErrorCode::kNoCovariates);
  const auto pop = RandomPopulation(3, 20);
  EXPECT_EQ(CodeOf([&] { GenerateSubpopulations(pop, {1, 21, 0, 0}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { GenerateSubpopulations(pop, {0, 1, 0, 0}); }),
            ErrorCode::kInvalidArgument);
}

TEST(DescribePath, OrdinalAndNominal) {
  const std::vector<SplitStep> path = {
      {0, 41.5, Direction::kBelow, {}},
      {1, 1.5, Direction::kAtOrAbove, {3.0, 1.0, 2.0}}};
  const std::vector<std::string> names = {"age", "region"};
  EXPECT_EQ(DescribePath(path, names), "age < 41.5 & region in {2}");
  EXPECT_EQ(DescribePath(path), "x0 < 41.5 & x1 in {2}");
}

TEST(MakeViews, FullPopulationFirst) {
  const auto pop = RandomPopulation(4, 100);
  const auto result = GenerateSubpopulations(pop, {5, 10, 0, 0});
  const auto views = MakeViews(pop, result.subpops);
  ASSERT_EQ(views.size(), result.subpops.size() + 1);
  EXPECT_EQ(views[0].label(), 0u);
  EXPECT_TRUE(views[0].is_full());
  EXPECT_EQ(views[3].label(), 3u);
}

}  // namespace
}  // namespace mccal
