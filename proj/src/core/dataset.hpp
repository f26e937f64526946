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

#ifndef MCCAL_CORE_DATASET_HPP_
#define MCCAL_CORE_DATASET_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace mccal {

enum class Mode { kBernoulli, kRegression };

enum class CovariateKind { kOrdinal, kNominal };

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }

  // Returns the rows listed in `rows`, in that order.
  Matrix SelectRows(std::span<const std::size_t> rows) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Observation {
  double score = 0.0;
  double response = 0.0;
  double weight = 1.0;
  std::size_t original_index = 0;
};

// Observations sorted ascending by score (ties by ingestion order), with the
// covariate rows permuted to match. Immutable once built.
class Population {
 public:
  std::size_t size() const { return scores_.size(); }
  std::size_t num_covariates() const { return covariates_.cols(); }
  Mode mode() const { return mode_; }

  std::span<const double> scores() const { return scores_; }
  std::span<const double> responses() const { return responses_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const std::size_t> original_indices() const {
    return original_index_;
  }
  const Matrix& covariates() const { return covariates_; }
  std::span<const CovariateKind> covariate_kinds() const { return kinds_; }

  Observation observation(std::size_t i) const {
    return {scores_[i], responses_[i], weights_[i], original_index_[i]};
  }

  // Copy with every weight replaced. Scores, responses and order are kept.
  Population WithWeights(std::vector<double> weights) const;

 private:
  friend Population BuildPopulation(std::span<const Observation>,
                                    const Matrix&,
                                    std::span<const CovariateKind>, Mode);

  std::vector<double> scores_;
  std::vector<double> responses_;
  std::vector<double> weights_;
  std::vector<std::size_t> original_index_;
  Matrix covariates_;
  std::vector<CovariateKind> kinds_;
  Mode mode_ = Mode::kBernoulli;
};

// Validates and sorts the raw observations. The `original_index` fields of
// `raw` are ignored and replaced by the position in `raw`. An empty
// `covariates` matrix (0 columns) is accepted as long as its row count
// matches or it has no rows at all.
Population BuildPopulation(std::span<const Observation> raw,
                           const Matrix& covariates,
                           std::span<const CovariateKind> kinds, Mode mode);

enum class WeightingKind {
  kUniform,
  kProportional,
  kProportionalClamped,
  kProportionalShifted,
  kLowPrevalence,
};

struct WeightingScheme {
  WeightingKind kind = WeightingKind::kUniform;
  double rho = 0.0;  // only read by the clamped and shifted variants
};

// Replaces the weights per `scheme`:
//   uniform                 W = 1
//   proportional            W = 1/S
//   proportional-clamped    W = 1/rho if S <= rho, else 1/S
//   proportional-shifted    W = 1/(S + rho)
//   low-prevalence          W = 1/A if R = 1, else 1, A = mean response
// Low-prevalence replaces any pre-existing weights rather than scaling them.
Population ApplyWeighting(const Population& pop, const WeightingScheme& scheme);

}  // namespace mccal

#endif  // MCCAL_CORE_DATASET_HPP_
