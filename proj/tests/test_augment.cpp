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

#include <limits>
#include <memory>
#include <vector>

#include "core/augment.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"

namespace mccal {
namespace {

ErrorCode CodeOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// Returns the last feature column (the score) unchanged.
class IdentityPredictor final : public Predictor {
 public:
  std::unique_ptr<FittedModel> Fit(const Matrix&,
                                   std::span<const double>) const override {
    struct Model final : FittedModel {
      std::vector<double> PredictProba(const Matrix& x) const override {
        std::vector<double> out;
        for (std::size_t r = 0; r < x.rows(); ++r) {
          out.push_back(x(r, x.cols() - 1));
        }
        return out;
      }
    };
    return std::make_unique<Model>();
  }
};

class ConstantPredictor final : public Predictor {
 public:
  explicit ConstantPredictor(double value) : value_(value) {}
  std::unique_ptr<FittedModel> Fit(const Matrix&,
                                   std::span<const double>) const override {
    struct Model final : FittedModel {
      double v;
      explicit Model(double v) : v(v) {}
      std::vector<double> PredictProba(const Matrix& x) const override {
        return std::vector<double>(x.rows(), v);
      }
    };
    return std::make_unique<Model>(value_);
  }

 private:
  double value_;
};

// Records the feature matrices it is fitted on.
class RecordingPredictor final : public Predictor {
 public:
  mutable std::vector<Matrix> seen;
  std::unique_ptr<FittedModel> Fit(const Matrix& x,
                                   std::span<const double>) const override {
    seen.push_back(x);
    struct Model final : FittedModel {
      std::vector<double> PredictProba(const Matrix& x) const override {
        std::vector<double> out;
        for (std::size_t r = 0; r < x.rows(); ++r) {
          out.push_back(0.5 * x(r, x.cols() - 1) + 0.25);
        }
        return out;
      }
    };
    return std::make_unique<Model>();
  }
};

struct Toy {
  Matrix train;
  std::vector<double> train_y;
  Matrix eval;
  std::vector<double> eval_y;
};

// responses = [x > 0] on symmetric grids.
Toy SeparableToy() {
  Toy t;
  const std::size_t n_train = 200, n_eval = 101;
  t.train = Matrix(n_train, 1);
  for (std::size_t i = 0; i < n_train; ++i) {
    const double x = -1.0 + 2.0 * (i + 0.5) / n_train;
    t.train(i, 0) = x;
    t.train_y.push_back(x > 0 ? 1.0 : 0.0);
  }
  t.eval = Matrix(n_eval, 1);
  for (std::size_t i = 0; i < n_eval; ++i) {
    const double x = -0.99 + 1.98 * i / (n_eval - 1.0) + 0.001;
    t.eval(i, 0) = x;
    t.eval_y.push_back(x > 0 ? 1.0 : 0.0);
  }
  return t;
}

double KuiperOf(const std::vector<double>& scores,
                const std::vector<double>& responses) {
  std::vector<Observation> raw;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    raw.push_back({scores[i], responses[i], 1.0});
  }
  const auto pop = BuildPopulation(raw, Matrix(), {}, Mode::kBernoulli);
  return Kuiper(SubpopulationView::Full(pop));
}

TEST(FittingRows, EvenRowsForHalf) {
  EXPECT_EQ(FittingRows(5, 0.5), (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(FittingRows(4, 0.5), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(FittingRows(4, 0.25), (std::vector<std::size_t>{0}));
  EXPECT_EQ(CodeOf([] { FittingRows(4, 1.0); }), ErrorCode::kInvalidArgument);
}

TEST(Augment, IdentityPredictorIsAFixedPoint) {
  const Toy t = SeparableToy();
  const IdentityPredictor identity;
  std::vector<double> base_fit(100), base_eval(t.eval.rows());
  for (std::size_t i = 0; i < base_fit.size(); ++i) base_fit[i] = i / 100.0;
  for (std::size_t i = 0; i < base_eval.size(); ++i) base_eval[i] = i / 101.0;
  for (std::size_t rounds : {1u, 3u}) {
    const auto out = Augment(t.train, t.train_y, base_fit,
                             {rounds, &identity, 0.5}, t.eval, base_eval);
    EXPECT_EQ(out, base_eval);
  }
}

TEST(Augment, ConstantPredictorIsAbsorbing) {
  const Toy t = SeparableToy();
  const ConstantPredictor half(0.5);
  const std::vector<double> base_fit(100, 0.9), base_eval(t.eval.rows(), 0.1);
  for (std::size_t rounds : {1u, 3u}) {
    const auto out = Augment(t.train, t.train_y, base_fit,
                             {rounds, &half, 0.5}, t.eval, base_eval);
    for (double v : out) EXPECT_EQ(v, 0.5);
  }
}

TEST(Augment, ScoreColumnIsTheOnlyChangingFeature) {
  const Toy t = SeparableToy();
  const RecordingPredictor rec;
  const std::vector<double> base_fit(100, 0.2), base_eval(t.eval.rows(), 0.2);
  Augment(t.train, t.train_y, base_fit, {3, &rec, 0.5}, t.eval, base_eval);
  ASSERT_EQ(rec.seen.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(rec.seen[r].cols(), t.train.cols() + 1);
    EXPECT_EQ(rec.seen[r].rows(), 100u);
    for (std::size_t i = 0; i < 100; ++i) {
      EXPECT_EQ(rec.seen[r](i, 0), t.train(2 * i, 0));
    }
  }
  // Scores follow s -> s/2 + 1/4 starting from 0.2.
  EXPECT_DOUBLE_EQ(rec.seen[0](0, 1), 0.2);
  EXPECT_DOUBLE_EQ(rec.seen[1](0, 1), 0.35);
  EXPECT_DOUBLE_EQ(rec.seen[2](0, 1), 0.425);
}

TEST(Augment, RejectsOutOfRangePredictions) {
  const Toy t = SeparableToy();
  const ConstantPredictor bad(1.5);
  const std::vector<double> base_fit(100, 0.5), base_eval(t.eval.rows(), 0.5);
  EXPECT_EQ(CodeOf([&] {
              Augment(t.train, t.train_y, base_fit, {1, &bad, 0.5}, t.eval,
                      base_eval);
            }),
            ErrorCode::kPredictorContract);
}

TEST(Augment, DimensionChecks) {
  const Toy t = SeparableToy();
  const ConstantPredictor half(0.5);
  const std::vector<double> base_eval(t.eval.rows(), 0.5);
  EXPECT_EQ(CodeOf([&] {
              Augment(t.train, t.train_y, std::vector<double>(99, 0.5),
                      {1, &half, 0.5}, t.eval, base_eval);
            }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([&] {
              Augment(t.train, t.train_y, std::vector<double>(100, 0.5),
                      {1, &half, 0.5}, Matrix(3, 2), std::vector<double>(3));
            }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([&] {
              Augment(t.train, t.train_y, std::vector<double>(100, 0.5),
                      {0, &half, 0.5}, t.eval, base_eval);
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] {
              Augment(t.train, t.train_y, std::vector<double>(100, 1.5),
                      {1, &half, 0.5}, t.eval, base_eval);
            }),
            ErrorCode::kScoreOutOfRange);
}

TEST(Augment, LogisticReducesKuiperOnSeparableToy) {
  const Toy t = SeparableToy();
  const auto fitter = ReferenceLogisticFitter();
  const std::vector<double> base_fit(100, 0.5), base_eval(t.eval.rows(), 0.5);
  const auto out = Augment(t.train, t.train_y, base_fit,
                           {3, fitter.get(), 0.5}, t.eval, base_eval);
  for (double v : out) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  const double before = KuiperOf(base_eval, t.eval_y);
  const double after = KuiperOf(out, t.eval_y);
  EXPECT_LT(after, before);

  const auto again = Augment(t.train, t.train_y, base_fit,
                             {3, fitter.get(), 0.5}, t.eval, base_eval);
  EXPECT_EQ(out, again);
}

TEST(LogisticRegression, SeparableSign) {
  const Matrix x(4, 1, {-1, 1, -1, 1});
  const std::vector<double> y = {0, 1, 0, 1};
  const auto model = LogisticRegression().Fit(x, y);
  const auto p = model->PredictProba(x);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(p[i] > 0.5, x(i, 0) > 0) << i;
  }
}

TEST(LogisticRegression, AllOnes) {
  const Matrix x(5, 1, {0.1, 0.4, -2, 3, 1});
  const std::vector<double> y(5, 1.0);
  for (double p : LogisticRegression().Fit(x, y)->PredictProba(x)) {
    EXPECT_GT(p, 0.99);
  }
}

TEST(LogisticRegression, InterceptOnlyRecoversMean) {
  const Matrix x(10, 1, 2.0);
  const std::vector<double> y = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  for (double p : LogisticRegression().Fit(x, y)->PredictProba(x)) {
    EXPECT_NEAR(p, 0.3, 1e-3);
  }
}

TEST(LogisticRegression, RejectsNonFinite) {
  const Matrix x(2, 1, {1.0, std::numeric_limits<double>::infinity()});
  const std::vector<double> y = {0, 1};
  EXPECT_EQ(CodeOf([&] { LogisticRegression().Fit(x, y); }),
            ErrorCode::kNonFinite);
}

}  // namespace
}  // namespace mccal
