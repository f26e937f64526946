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

#include "core/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "core/error.hpp"

namespace mccal {

SubpopulationView::SubpopulationView(const Population& pop,
                                     std::vector<std::size_t> indices,
                                     std::size_t label)
    : pop_(&pop), indices_(std::move(indices)), label_(label) {
  if (indices_.empty()) {
    Fail(ErrorCode::kEmptySubpopulation, "subpopulation has no members");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= pop.size()) {
      Fail(ErrorCode::kInvalidArgument, "subpopulation index out of range");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      Fail(ErrorCode::kInvalidArgument,
           "subpopulation indices must be strictly increasing");
    }
  }
  if (label_ == 0 && indices_.size() != pop.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "label 0 is reserved for the full population");
  }
}

SubpopulationView SubpopulationView::Full(const Population& pop) {
  std::vector<std::size_t> all(pop.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return SubpopulationView(pop, std::move(all), 0);
}

const SubpopMetrics& MetricsReport::ByLabel(std::size_t label) const {
  for (const auto& m : per_subpop) {
    if (m.label == label) return m;
  }
  Fail(ErrorCode::kInvalidArgument, "no subpopulation with that label");
}

namespace {

double TotalWeight(const SubpopulationView& view) {
  const auto w = view.population().weights();
  double total = 0.0;
  for (std::size_t i : view.indices()) total += w[i];
  return total;
}

// D_k / sigma_k with the 0/0 guard.
double GuardedRatio(double numerator, double sigma, std::size_t label) {
  if (sigma <= kZeroGuard && numerator <= kZeroGuard) return 0.0;
  if (sigma == 0.0) {
    std::ostringstream os;
    os << "subpopulation " << label << " has sigma = 0 but Kuiper metric "
       << numerator << " > 0; the signal-to-noise ratio is infinite";
    Fail(ErrorCode::kInfiniteRatio, os.str());
  }
  return numerator / sigma;
}

}  // namespace

std::vector<double> CumulativeDifferences(const SubpopulationView& view) {
  const Population& pop = view.population();
  const auto s = pop.scores();
  const auto r = pop.responses();
  const auto w = pop.weights();
  const double total = TotalWeight(view);

  std::vector<double> c;
  c.reserve(view.size() + 1);
  c.push_back(0.0);
  double partial = 0.0;
  for (std::size_t i : view.indices()) {
    partial += (r[i] - s[i]) * w[i];
    c.push_back(partial / total);
  }
  return c;
}

double Kuiper(const SubpopulationView& view) {
  const Population& pop = view.population();
  const auto s = pop.scores();
  const auto r = pop.responses();
  const auto w = pop.weights();
  const double total = TotalWeight(view);

  double partial = 0.0;
  double hi = 0.0;
  double lo = 0.0;
  for (std::size_t i : view.indices()) {
    partial += (r[i] - s[i]) * w[i];
    const double c = partial / total;
    hi = std::max(hi, c);
    lo = std::min(lo, c);
  }
  return hi - lo;
}

double SigmaBernoulli(const SubpopulationView& view) {
  const Population& pop = view.population();
  if (pop.mode() != Mode::kBernoulli) {
    Fail(ErrorCode::kWrongMode,
         "bernoulli sigma requested for a regression population");
  }
  const auto s = pop.scores();
  const auto w = pop.weights();
  double variance = 0.0;
  double total = 0.0;
  for (std::size_t i : view.indices()) {
    variance += s[i] * (1.0 - s[i]) * w[i] * w[i];
    total += w[i];
  }
  return std::sqrt(variance) / total;
}

double SigmaRegression(const SubpopulationView& view) {
  const std::size_t n = view.size();
  if (n < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "regression sigma needs at least 2 members");
  }
  const Population& pop = view.population();
  const auto s = pop.scores();
  const auto r = pop.responses();
  const auto w = pop.weights();
  const auto idx = view.indices();

  double numerator = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t a = idx[j];
    const std::size_t b = idx[j + 1];
    const double dd = (r[a] - s[a]) - (r[b] - s[b]);
    const double ww = w[a] + w[b];
    numerator += dd * dd * ww * ww;
  }
  double total = 0.0;
  double middle = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += w[idx[j]];
    if (j > 0 && j + 1 < n) middle += w[idx[j]];
  }
  const double ends = w[idx.front()] + w[idx.back()] + 2.0 * middle;
  return std::sqrt(numerator / (4.0 * total * ends));
}

double Sigma(const SubpopulationView& view) {
  return view.population().mode() == Mode::kBernoulli ? SigmaBernoulli(view)
                                                      : SigmaRegression(view);
}

double ExpectedKuiperNull(double sigma) {
  if (!(sigma >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "sigma must be nonnegative");
  }
  return kNullExpectationFactor * sigma;
}

SubpopMetrics ComputeSubpopMetrics(const SubpopulationView& view) {
  SubpopMetrics m;
  m.label = view.label();
  m.size = view.size();
  m.total_weight = TotalWeight(view);
  m.kuiper = Kuiper(view);
  m.sigma = Sigma(view);
  m.expected_kuiper_null = ExpectedKuiperNull(m.sigma);
  m.normalized = GuardedRatio(m.kuiper, m.sigma, m.label);
  return m;
}

MetricsReport Summarize(std::vector<SubpopMetrics> per_subpop) {
  if (per_subpop.empty()) {
    Fail(ErrorCode::kInvalidArgument, "no subpopulations given");
  }
  if (per_subpop.front().label != 0) {
    Fail(ErrorCode::kInvalidArgument,
         "the first subpopulation must be the full population (label 0)");
  }
  const double sigma0 = per_subpop.front().sigma;

  MetricsReport report;
  bool first = true;
  double best_m = 0.0;
  double best_d = 0.0;
  std::size_t best_d_pos = 0;
  for (std::size_t pos = 0; pos < per_subpop.size(); ++pos) {
    const SubpopMetrics& s = per_subpop[pos];
    // The full population's term is D_0 itself, never D_0 * sigma_0 / sigma_0.
    double term = s.kuiper;
    if (pos > 0) {
      // Throws on sigma_k = 0 with D_k > 0; otherwise 0 means the guard hit.
      term = GuardedRatio(s.kuiper, s.sigma, s.label) == 0.0
                 ? 0.0
                 : s.kuiper * sigma0 / s.sigma;
    }
    if (first || term > best_m ||
        (term == best_m && s.label < report.argmax_multical)) {
      best_m = term;
      report.argmax_multical = s.label;
    }
    if (first || s.kuiper > best_d ||
        (s.kuiper == best_d && s.label < report.argmax_ablate)) {
      best_d = s.kuiper;
      best_d_pos = pos;
      report.argmax_ablate = s.label;
    }
    first = false;
  }
  report.multical = best_m;
  report.multi_ablate = best_d;
  report.expectation_at_argmax = per_subpop[best_d_pos].expected_kuiper_null;
  report.per_subpop = std::move(per_subpop);
  return report;
}

MetricsReport Multicalibration(std::span<const SubpopulationView> views,
                               unsigned threads) {
  if (views.empty()) {
    Fail(ErrorCode::kInvalidArgument, "no subpopulations given");
  }
  if (views.front().label() != 0 || !views.front().is_full()) {
    Fail(ErrorCode::kInvalidArgument,
         "the first subpopulation must be the full population (label 0)");
  }
  const Population* pop = &views.front().population();
  for (const auto& v : views) {
    if (&v.population() != pop) {
      Fail(ErrorCode::kInvalidArgument,
           "all subpopulations must refer to the same population");
    }
  }

  std::vector<SubpopMetrics> per(views.size());
  threads = std::max(1u, std::min<unsigned>(threads, views.size()));
  if (threads == 1) {
    for (std::size_t k = 0; k < views.size(); ++k) {
      per[k] = ComputeSubpopMetrics(views[k]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failure_pos = views.size();
    std::mutex failure_mu;
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (std::size_t k = next++; k < views.size(); k = next++) {
            try {
              per[k] = ComputeSubpopMetrics(views[k]);
            } catch (...) {
              std::lock_guard lock(failure_mu);
              // Report the same error the sequential loop would hit first.
              if (k < failure_pos) {
                failure_pos = k;
                failure = std::current_exception();
              }
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return Summarize(std::move(per));
}

SeedAggregate AggregateOverSeeds(std::span<const double> values) {
  if (values.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "aggregation needs at least 2 values");
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);
  const double variance = squares / (n - 1.0);
  return {mean, 2.0 * std::sqrt(variance / n), values.size()};
}

}  // namespace mccal
