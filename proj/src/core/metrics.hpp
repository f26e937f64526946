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

#ifndef MCCAL_CORE_METRICS_HPP_
#define MCCAL_CORE_METRICS_HPP_

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "core/dataset.hpp"

namespace mccal {

// 2 * sqrt(2 / pi): the null-hypothesis expectation of a Kuiper metric in
// units of its sigma.
inline constexpr double kNullExpectationFactor =
    2.0 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi;

// Absolute threshold below which both D_k and sigma_k count as zero when
// forming D_k * sigma_0 / sigma_k.
inline constexpr double kZeroGuard = 1e-12;

// A subset of a population given by strictly increasing positions into its
// score-sorted order. Label 0 is the full population.
class SubpopulationView {
 public:
  SubpopulationView(const Population& pop, std::vector<std::size_t> indices,
                    std::size_t label);

  static SubpopulationView Full(const Population& pop);

  const Population& population() const { return *pop_; }
  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  std::size_t label() const { return label_; }
  bool is_full() const { return indices_.size() == pop_->size(); }

 private:
  const Population* pop_;
  std::vector<std::size_t> indices_;
  std::size_t label_;
};

struct SubpopMetrics {
  std::size_t label = 0;
  std::size_t size = 0;
  double total_weight = 0.0;
  double kuiper = 0.0;
  double sigma = 0.0;
  double expected_kuiper_null = 0.0;
  double normalized = 0.0;
};

struct MetricsReport {
  std::vector<SubpopMetrics> per_subpop;  // in the order given to the caller
  double multical = 0.0;
  double multi_ablate = 0.0;
  std::size_t argmax_multical = 0;
  std::size_t argmax_ablate = 0;
  double expectation_at_argmax = 0.0;

  const SubpopMetrics& ByLabel(std::size_t label) const;
};

struct SeedAggregate {
  double mean = 0.0;
  double twice_sem = 0.0;
  std::size_t count = 0;
};

// C_0, ..., C_n for the members of `view`, C_0 = 0.
std::vector<double> CumulativeDifferences(const SubpopulationView& view);

// max C - min C over the cumulative differences, including C_0.
double Kuiper(const SubpopulationView& view);

// sqrt(sum S (1 - S) W^2) / sum W. Bernoulli populations only.
double SigmaBernoulli(const SubpopulationView& view);

// Adjacent-difference estimate of the null standard deviation of C_n for
// real-valued responses. Needs at least two members.
double SigmaRegression(const SubpopulationView& view);

// Dispatches on the population mode.
double Sigma(const SubpopulationView& view);

double ExpectedKuiperNull(double sigma);

SubpopMetrics ComputeSubpopMetrics(const SubpopulationView& view);

// Signal-to-noise weighted maximum over the views; views[0] must be the
// full population. With threads > 1 the views are evaluated concurrently;
// the result is identical to the sequential one.
MetricsReport Multicalibration(std::span<const SubpopulationView> views,
                               unsigned threads = 1);

// Recomputes M and the argmaxes from already computed per-view metrics.
// per_subpop[0] must be the full population.
MetricsReport Summarize(std::vector<SubpopMetrics> per_subpop);

// Mean and twice the standard error of the mean (Bessel-corrected).
SeedAggregate AggregateOverSeeds(std::span<const double> values);

}  // namespace mccal

#endif  // MCCAL_CORE_METRICS_HPP_
