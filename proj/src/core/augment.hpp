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

#ifndef MCCAL_CORE_AUGMENT_HPP_
#define MCCAL_CORE_AUGMENT_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "core/dataset.hpp"

namespace mccal {

class FittedModel {
 public:
  virtual ~FittedModel() = default;
  // Probabilities in [0, 1], one per row. Must be deterministic.
  virtual std::vector<double> PredictProba(const Matrix& features) const = 0;
};

// Anything that can be trained on (features, responses) and then predict
// probabilities.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::unique_ptr<FittedModel> Fit(
      const Matrix& features, std::span<const double> responses) const = 0;
};

struct AugmentConfig {
  std::size_t rounds = 3;
  const Predictor* predictor = nullptr;
  // Share of the training rows the predictor is refit on.
  double holdout_fraction = 0.5;
};

// Positions of the fitting rows among n training rows: row i is taken when
// ceil(i * fraction) < ceil((i + 1) * fraction). For 0.5 these are the
// even-positioned rows.
std::vector<std::size_t> FittingRows(std::size_t n, double fraction);

// Refits the predictor `rounds` times on [covariates | current scores] over
// the fitting rows, each time replacing the score column on the fitting rows
// and the eval rows with the new predictions. `base_scores_on_fit_half`
// holds one score per fitting row, in FittingRows order. Returns the final
// eval scores.
std::vector<double> Augment(const Matrix& train_covariates,
                            std::span<const double> train_responses,
                            std::span<const double> base_scores_on_fit_half,
                            const AugmentConfig& cfg,
                            const Matrix& eval_covariates,
                            std::span<const double> base_scores_on_eval);

struct LogisticOptions {
  std::size_t max_iterations = 10000;
  double gradient_tolerance = 1e-8;
};

// Maximum-likelihood logistic regression with an intercept, fit by full-batch
// gradient descent on internally standardized features. The step size is
// fixed at 4 / (columns + 1), inside the stability bound for the mean
// log-loss on standardized columns.
class LogisticRegression final : public Predictor {
 public:
  explicit LogisticRegression(LogisticOptions options = {})
      : options_(options) {}

  std::unique_ptr<FittedModel> Fit(
      const Matrix& features,
      std::span<const double> responses) const override;

 private:
  LogisticOptions options_;
};

std::unique_ptr<Predictor> ReferenceLogisticFitter();

}  // namespace mccal

#endif  // MCCAL_CORE_AUGMENT_HPP_
