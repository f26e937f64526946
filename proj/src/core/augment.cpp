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

#include "core/augment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "core/error.hpp"

namespace mccal {
namespace {

Matrix AppendColumn(const Matrix& m, std::span<const double> column) {
  Matrix out(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    out(r, m.cols()) = column[r];
  }
  return out;
}

void CheckPredictions(const std::vector<double>& p, std::size_t rows,
                      std::size_t round) {
  if (p.size() != rows) {
    Fail(ErrorCode::kPredictorContract,
         "predictor returned the wrong number of predictions");
  }
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream os;
      os << "predictor returned " << v << " in round " << round
         << "; probabilities must lie in [0, 1]";
      Fail(ErrorCode::kPredictorContract, os.str());
    }
  }
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

class FittedLogistic final : public FittedModel {
 public:
  FittedLogistic(std::vector<double> mean, std::vector<double> scale,
                 std::vector<double> coef, double intercept)
      : mean_(std::move(mean)),
        scale_(std::move(scale)),
        coef_(std::move(coef)),
        intercept_(intercept) {}

  std::vector<double> PredictProba(const Matrix& x) const override {
    if (x.cols() != coef_.size()) {
      Fail(ErrorCode::kShapeMismatch,
           "feature count differs from the one used for fitting");
    }
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      double z = intercept_;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        if (!std::isfinite(x(r, c))) {
          Fail(ErrorCode::kNonFinite, "non-finite feature value");
        }
        z += coef_[c] * (x(r, c) - mean_[c]) / scale_[c];
      }
      out[r] = Sigmoid(z);
    }
    return out;
  }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<double> coef_;
  double intercept_;
};

}  // namespace

std::vector<std::size_t> FittingRows(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "holdout fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::ceil(static_cast<double>(i) * fraction);
    const double b = std::ceil(static_cast<double>(i + 1) * fraction);
    if (a < b) rows.push_back(i);
  }
  return rows;
}

std::vector<double> Augment(const Matrix& train_covariates,
                            std::span<const double> train_responses,
                            std::span<const double> base_scores_on_fit_half,
                            const AugmentConfig& cfg,
                            const Matrix& eval_covariates,
                            std::span<const double> base_scores_on_eval) {
  if (cfg.rounds < 1) Fail(ErrorCode::kInvalidArgument, "rounds must be >= 1");
  if (cfg.predictor == nullptr) {
    Fail(ErrorCode::kInvalidArgument, "no predictor given");
  }
  if (train_responses.size() != train_covariates.rows()) {
    Fail(ErrorCode::kShapeMismatch,
         "training responses do not match training covariate rows");
  }
  if (eval_covariates.cols() != train_covariates.cols()) {
    Fail(ErrorCode::kShapeMismatch,
         "eval and training covariates differ in column count");
  }
  if (base_scores_on_eval.size() != eval_covariates.rows()) {
    Fail(ErrorCode::kShapeMismatch,
         "eval scores do not match eval covariate rows");
  }
  const std::vector<std::size_t> fit_rows =
      FittingRows(train_covariates.rows(), cfg.holdout_fraction);
  if (base_scores_on_fit_half.size() != fit_rows.size()) {
    std::ostringstream os;
    os << "expected " << fit_rows.size()
       << " base scores for the fitting rows, got "
       << base_scores_on_fit_half.size();
    Fail(ErrorCode::kShapeMismatch, os.str());
  }
  for (auto scores : {base_scores_on_fit_half, base_scores_on_eval}) {
    for (double s : scores) {
      if (!(s >= 0.0 && s <= 1.0)) {
        Fail(ErrorCode::kScoreOutOfRange, "base scores must lie in [0, 1]");
      }
    }
  }

  const Matrix fit_x = train_covariates.SelectRows(fit_rows);
  std::vector<double> fit_y;
  fit_y.reserve(fit_rows.size());
  for (std::size_t r : fit_rows) fit_y.push_back(train_responses[r]);

  std::vector<double> fit_scores(base_scores_on_fit_half.begin(),
                                 base_scores_on_fit_half.end());
  std::vector<double> eval_scores(base_scores_on_eval.begin(),
                                  base_scores_on_eval.end());
  for (std::size_t round = 1; round <= cfg.rounds; ++round) {
    const Matrix fit_features = AppendColumn(fit_x, fit_scores);
    const auto model = cfg.predictor->Fit(fit_features, fit_y);
    std::vector<double> next_fit = model->PredictProba(fit_features);
    std::vector<double> next_eval =
        model->PredictProba(AppendColumn(eval_covariates, eval_scores));
    CheckPredictions(next_fit, fit_features.rows(), round);
    CheckPredictions(next_eval, eval_covariates.rows(), round);
    fit_scores = std::move(next_fit);
    eval_scores = std::move(next_eval);
  }
  return eval_scores;
}

std::unique_ptr<FittedModel> LogisticRegression::Fit(
    const Matrix& x, std::span<const double> y) const {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "no training rows");
  if (y.size() != n) {
    Fail(ErrorCode::kShapeMismatch, "responses do not match feature rows");
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) Fail(ErrorCode::kNonFinite, "non-finite feature value");
  }
  for (double v : y) {
    if (!(v >= 0.0 && v <= 1.0)) {
      Fail(ErrorCode::kInvalidResponse,
           "logistic responses must lie in [0, 1]");
    }
  }

  std::vector<double> mean(p, 0.0);
  std::vector<double> scale(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t r = 0; r < n; ++r) mean[c] += x(r, c);
    mean[c] /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
      scale[c] += (x(r, c) - mean[c]) * (x(r, c) - mean[c]);
    }
    scale[c] = std::sqrt(scale[c] / static_cast<double>(n));
    if (!(scale[c] > 0.0)) scale[c] = 1.0;  // constant column
  }
  Matrix z(n, p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) z(r, c) = (x(r, c) - mean[c]) / scale[c];
  }

  const double step = 4.0 / static_cast<double>(p + 1);
  std::vector<double> coef(p, 0.0);
  double intercept = 0.0;
  std::vector<double> grad(p);
  for (std::size_t it = 0; it < options_.max_iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad0 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double eta = intercept;
      for (std::size_t c = 0; c < p; ++c) eta += coef[c] * z(r, c);
      const double residual = Sigmoid(eta) - y[r];
      grad0 += residual;
      for (std::size_t c = 0; c < p; ++c) grad[c] += residual * z(r, c);
    }
    grad0 /= static_cast<double>(n);
    double worst = std::abs(grad0);
    for (double& g : grad) {
      g /= static_cast<double>(n);
      worst = std::max(worst, std::abs(g));
    }
    if (worst < options_.gradient_tolerance) break;
    intercept -= step * grad0;
    for (std::size_t c = 0; c < p; ++c) coef[c] -= step * grad[c];
  }
  return std::make_unique<FittedLogistic>(std::move(mean), std::move(scale),
                                          std::move(coef), intercept);
}

std::unique_ptr<Predictor> ReferenceLogisticFitter() {
  return std::make_unique<LogisticRegression>();
}

}  // namespace mccal
