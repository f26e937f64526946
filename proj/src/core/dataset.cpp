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

#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

#include "core/error.hpp"

namespace mccal {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    Fail(ErrorCode::kShapeMismatch, "matrix data size does not match shape");
  }
}

Matrix Matrix::SelectRows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.data_.begin() + i * cols_);
  }
  return out;
}

Population Population::WithWeights(std::vector<double> weights) const {
  if (weights.size() != size()) {
    Fail(ErrorCode::kShapeMismatch, "weight count does not match population");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      Fail(ErrorCode::kNonpositiveWeight, "weights must be finite and > 0");
    }
  }
  Population out = *this;
  out.weights_ = std::move(weights);
  return out;
}

namespace {

std::string At(std::size_t i) {
  std::ostringstream os;
  os << " (observation " << i << ")";
  return os.str();
}

}  // namespace

Population BuildPopulation(std::span<const Observation> raw,
                           const Matrix& covariates,
                           std::span<const CovariateKind> kinds, Mode mode) {
  const std::size_t n = raw.size();
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "population is empty");
  if (kinds.size() != covariates.cols()) {
    Fail(ErrorCode::kShapeMismatch,
         "covariate kind count does not match covariate column count");
  }
  if (covariates.rows() != n && !(covariates.rows() == 0 && covariates.cols() == 0)) {
    std::ostringstream os;
    os << "covariate row count " << covariates.rows()
       << " does not match observation count " << n;
    Fail(ErrorCode::kShapeMismatch, os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Observation& o = raw[i];
    if (!std::isfinite(o.weight) || !(o.weight > 0.0)) {
      Fail(ErrorCode::kNonpositiveWeight, "weight must be finite and > 0" + At(i));
    }
    if (!(o.score >= 0.0 && o.score <= 1.0)) {
      Fail(ErrorCode::kScoreOutOfRange, "score must lie in [0, 1]" + At(i));
    }
    if (!std::isfinite(o.response)) {
      Fail(ErrorCode::kNonFinite, "response is not finite" + At(i));
    }
    if (mode == Mode::kBernoulli && o.response != 0.0 && o.response != 1.0) {
      Fail(ErrorCode::kInvalidResponse,
           "response must be 0 or 1 in bernoulli mode" + At(i));
    }
  }
  for (double v : covariates.data()) {
    if (!std::isfinite(v)) Fail(ErrorCode::kNonFinite, "covariate is not finite");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return raw[a].score < raw[b].score;
                   });

  Population pop;
  pop.mode_ = mode;
  pop.kinds_.assign(kinds.begin(), kinds.end());
  pop.scores_.reserve(n);
  pop.responses_.reserve(n);
  pop.weights_.reserve(n);
  pop.original_index_.reserve(n);
  for (std::size_t i : order) {
    pop.scores_.push_back(raw[i].score);
    pop.responses_.push_back(raw[i].response);
    pop.weights_.push_back(raw[i].weight);
    pop.original_index_.push_back(i);
  }
  pop.covariates_ = covariates.cols() == 0 ? Matrix(n, 0)
                                           : covariates.SelectRows(order);
  return pop;
}

Population ApplyWeighting(const Population& pop,
                          const WeightingScheme& scheme) {
  const auto scores = pop.scores();
  const auto responses = pop.responses();
  std::vector<double> w(pop.size());

  switch (scheme.kind) {
    case WeightingKind::kUniform:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case WeightingKind::kProportional:
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (scores[j] == 0.0) {
          Fail(ErrorCode::kZeroScore,
               "proportional weighting needs every score > 0; use the "
               "clamped or shifted variant" + At(j));
        }
        w[j] = 1.0 / scores[j];
      }
      break;
    case WeightingKind::kProportionalClamped:
    case WeightingKind::kProportionalShifted:
      if (!(scheme.rho > 0.0) || !std::isfinite(scheme.rho)) {
        Fail(ErrorCode::kInvalidArgument, "rho must be finite and > 0");
      }
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (scheme.kind == WeightingKind::kProportionalClamped) {
          w[j] = scores[j] <= scheme.rho ? 1.0 / scheme.rho : 1.0 / scores[j];
        } else {
          w[j] = 1.0 / (scores[j] + scheme.rho);
        }
      }
      break;
    case WeightingKind::kLowPrevalence: {
      if (pop.mode() != Mode::kBernoulli) {
        Fail(ErrorCode::kWrongMode,
             "low-prevalence weighting requires bernoulli mode");
      }
      double positives = 0.0;
      for (double r : responses) positives += r;
      if (positives == 0.0) {
        Fail(ErrorCode::kNoPositives,
             "low-prevalence weighting needs at least one response equal to 1");
      }
      const double prevalence = positives / static_cast<double>(pop.size());
      for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = responses[j] == 1.0 ? 1.0 / prevalence : 1.0;
      }
      break;
    }
  }
  return pop.WithWeights(std::move(w));
}

}  // namespace mccal
