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

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "mccal/mccal.h"

namespace {

class Population {
 public:
  Population() = default;
  ~Population() { mccal_population_free(p_); }
  mccal_population** out() { return &p_; }
  mccal_population* get() const { return p_; }

 private:
  mccal_population* p_ = nullptr;
};

TEST(CApi, PopulationRoundTrip) {
  const double s[] = {0.9, 0.1, 0.5};
  const double r[] = {1, 0, 1};
  const double w[] = {2, 3, 4};
  const double cov[] = {30, 300, 10, 100, 20, 200};
  const int nominal[] = {0, 1};
  Population pop;
  ASSERT_EQ(mccal_population_create(3, s, r, w, 2, cov, nominal,
                                    MCCAL_MODE_BERNOULLI, pop.out()),
            MCCAL_OK);
  EXPECT_EQ(mccal_population_size(pop.get()), 3u);
  EXPECT_EQ(mccal_population_num_covariates(pop.get()), 2u);
  double gs[3], gr[3], gw[3], gc[6];
  size_t gi[3];
  ASSERT_EQ(mccal_population_get(pop.get(), gs, gr, gw, gi, gc), MCCAL_OK);
  EXPECT_EQ(gs[0], 0.1);
  EXPECT_EQ(gr[0], 0.0);
  EXPECT_EQ(gw[0], 3.0);
  EXPECT_EQ(gi[0], 1u);
  EXPECT_EQ(gc[0], 10.0);
  EXPECT_EQ(gc[1], 100.0);
  EXPECT_EQ(gc[5], 300.0);
}

TEST(CApi, ErrorsCarryCodesAndMessages) {
  const double s[] = {0.5};
  const double bad_r[] = {0.5};
  const double zero_w[] = {0.0};
  mccal_population* pop = nullptr;
  EXPECT_EQ(mccal_population_create(1, s, bad_r, nullptr, 0, nullptr, nullptr,
                                    MCCAL_MODE_BERNOULLI, &pop),
            MCCAL_ERR_INVALID_RESPONSE);
  EXPECT_EQ(pop, nullptr);
  EXPECT_NE(std::strstr(mccal_last_error(), "0 or 1"), nullptr);
  const double r[] = {1.0};
  EXPECT_EQ(mccal_population_create(1, s, r, zero_w, 0, nullptr, nullptr,
                                    MCCAL_MODE_BERNOULLI, &pop),
            MCCAL_ERR_NONPOSITIVE_WEIGHT);
  const double big[] = {1.5};
  EXPECT_EQ(mccal_population_create(1, big, r, nullptr, 0, nullptr, nullptr,
                                    MCCAL_MODE_BERNOULLI, &pop),
            MCCAL_ERR_SCORE_OUT_OF_RANGE);
  EXPECT_STREQ(mccal_status_name(MCCAL_ERR_SCORE_OUT_OF_RANGE),
               "score out of range");
  EXPECT_EQ(mccal_population_create(1, s, r, nullptr, 0, nullptr, nullptr,
                                    MCCAL_MODE_BERNOULLI, nullptr),
            MCCAL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, WeightingAndCurve) {
  const double s[] = {0.1, 0.5};
  const double r[] = {1, 0};
  Population pop, weighted;
  ASSERT_EQ(mccal_population_create(2, s, r, nullptr, 0, nullptr, nullptr,
                                    MCCAL_MODE_BERNOULLI, pop.out()),
            MCCAL_OK);
  ASSERT_EQ(mccal_population_apply_weighting(
                pop.get(), MCCAL_WEIGHTING_PROPORTIONAL_CLAMPED, 0.2,
                weighted.out()),
            MCCAL_OK);
  double w[2];
  ASSERT_EQ(mccal_population_get(weighted.get(), nullptr, nullptr, w, nullptr,
                                 nullptr),
            MCCAL_OK);
  EXPECT_DOUBLE_EQ(w[0], 5.0);
  EXPECT_DOUBLE_EQ(w[1], 2.0);

  double c[3];
  ASSERT_EQ(mccal_population_cumulative_differences(weighted.get(), c),
            MCCAL_OK);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_NEAR(c[1], 0.9 * 5 / 7, 1e-15);
  EXPECT_NEAR(c[2], (0.9 * 5 - 0.5 * 2) / 7, 1e-15);
}

TEST(CApi, SyntheticReportMatchesOracle) {
  Population pop;
  ASSERT_EQ(mccal_synth_population(9, pop.out()), MCCAL_OK);
  mccal_subpops* subpops = nullptr;
  ASSERT_EQ(mccal_subpops_synthetic(pop.get(), 9, &subpops), MCCAL_OK);
  EXPECT_EQ(mccal_subpops_count(subpops), 4u);
  mccal_report* report = nullptr;
  ASSERT_EQ(mccal_report_compute(pop.get(), subpops, 2, &report), MCCAL_OK);

  mccal_synth_oracle oracle;
  std::vector<double> dk(4), sigma(5);
  ASSERT_EQ(mccal_synth_oracle_eval(9, &oracle, dk.data(), sigma.data()),
            MCCAL_OK);
  mccal_summary summary;
  ASSERT_EQ(mccal_report_summary(report, &summary), MCCAL_OK);
  EXPECT_NEAR(summary.multical / oracle.multical, 1.0, 1e-10);
  EXPECT_NEAR(summary.kuiper / oracle.d0, 1.0, 1e-10);
  EXPECT_EQ(summary.argmax_multical, oracle.argmax_k);
  ASSERT_EQ(mccal_report_count(report), 5u);
  for (size_t i = 0; i < 5; ++i) {
    mccal_subpop_metrics m;
    ASSERT_EQ(mccal_report_entry(report, i, &m), MCCAL_OK);
    EXPECT_NEAR(m.sigma / sigma[i], 1.0, 1e-10);
    if (i > 0) EXPECT_NEAR(m.kuiper / dk[i - 1], 1.0, 1e-10);
  }
  mccal_subpop_metrics m;
  EXPECT_EQ(mccal_report_entry(report, 5, &m), MCCAL_ERR_INVALID_ARGUMENT);
  mccal_report_free(report);
  mccal_subpops_free(subpops);

  EXPECT_EQ(mccal_synth_oracle_eval(4, &oracle, nullptr, nullptr),
            MCCAL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, GeneratedAndCustomSubpops) {
  const size_t n = 200;
  std::vector<double> s(n), r(n), cov(n);
  for (size_t i = 0; i < n; ++i) {
    s[i] = (i + 0.5) / n;
    r[i] = static_cast<double>(i % 3 == 0);
    cov[i] = static_cast<double>((i * 7) % n);
  }
  Population pop;
  ASSERT_EQ(mccal_population_create(n, s.data(), r.data(), nullptr, 1,
                                    cov.data(), nullptr, MCCAL_MODE_BERNOULLI,
                                    pop.out()),
            MCCAL_OK);
  mccal_subpops* gen = nullptr;
  ASSERT_EQ(mccal_subpops_generate(pop.get(), 20, 10, 5, 0, &gen), MCCAL_OK);
  ASSERT_EQ(mccal_subpops_count(gen), 20u);
  EXPECT_EQ(mccal_subpops_exhausted(gen), 0);
  EXPECT_GE(mccal_subpops_attempts(gen), 1u);
  for (size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(mccal_subpops_label(gen, i), i + 1);
    EXPECT_GE(mccal_subpops_size(gen, i), 10u);
    EXPECT_GE(mccal_subpops_depth(gen, i), 1u);
  }
  const char* names[] = {"age"};
  size_t needed = 0;
  ASSERT_EQ(mccal_subpops_describe(gen, 0, names, 1, nullptr, 0, &needed),
            MCCAL_OK);
  std::string text(needed + 1, '\0');
  ASSERT_EQ(mccal_subpops_describe(gen, 0, names, 1, text.data(), text.size(),
                                   &needed),
            MCCAL_OK);
  EXPECT_EQ(text.rfind("age ", 0), 0u);
  char tiny[4];
  ASSERT_EQ(mccal_subpops_describe(gen, 0, names, 1, tiny, sizeof tiny,
                                   &needed),
            MCCAL_OK);
  EXPECT_EQ(std::strlen(tiny), 3u);
  std::vector<size_t> idx(mccal_subpops_size(gen, 0));
  ASSERT_EQ(mccal_subpops_indices(gen, 0, idx.data()), MCCAL_OK);
  mccal_subpops_free(gen);

  mccal_subpops* custom = nullptr;
  ASSERT_EQ(mccal_subpops_create(pop.get(), &custom), MCCAL_OK);
  const size_t first[] = {0, 1, 2, 3, 4};
  const size_t unsorted[] = {3, 1};
  ASSERT_EQ(mccal_subpops_add(custom, first, 5), MCCAL_OK);
  EXPECT_EQ(mccal_subpops_add(custom, unsorted, 2), MCCAL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(mccal_subpops_add(custom, first, 0),
            MCCAL_ERR_EMPTY_SUBPOPULATION);
  EXPECT_EQ(mccal_subpops_count(custom), 1u);
  mccal_report* report = nullptr;
  ASSERT_EQ(mccal_report_compute(pop.get(), custom, 1, &report), MCCAL_OK);
  EXPECT_EQ(mccal_report_count(report), 2u);
  mccal_report_free(report);

  // Subpopulations of one population cannot be evaluated against another.
  Population other;
  ASSERT_EQ(mccal_population_create(n, s.data(), r.data(), nullptr, 1,
                                    cov.data(), nullptr, MCCAL_MODE_BERNOULLI,
                                    other.out()),
            MCCAL_OK);
  EXPECT_EQ(mccal_report_compute(other.get(), custom, 1, &report),
            MCCAL_ERR_INVALID_ARGUMENT);
  mccal_subpops_free(custom);
}

TEST(CApi, GeneratorErrors) {
  const double s[] = {0.1, 0.2};
  const double r[] = {0, 1};
  Population pop;
  ASSERT_EQ(mccal_population_create(2, s, r, nullptr, 0, nullptr, nullptr,
                                    MCCAL_MODE_BERNOULLI, pop.out()),
            MCCAL_OK);
  mccal_subpops* gen = nullptr;
  EXPECT_EQ(mccal_subpops_generate(pop.get(), 5, 1, 0, 0, &gen),
            MCCAL_ERR_NO_COVARIATES);
}

TEST(CApi, ScalarsAndAggregate) {
  double e = 0.0;
  ASSERT_EQ(mccal_expected_kuiper_null(1.0, &e), MCCAL_OK);
  EXPECT_EQ(e, mccal_null_expectation_factor());
  EXPECT_EQ(mccal_expected_kuiper_null(-1.0, &e), MCCAL_ERR_INVALID_ARGUMENT);
  const double v[] = {1, 2, 3};
  mccal_seed_aggregate agg;
  ASSERT_EQ(mccal_aggregate(v, 3, &agg), MCCAL_OK);
  EXPECT_DOUBLE_EQ(agg.mean, 2.0);
  EXPECT_NEAR(agg.twice_sem, 1.154700538, 1e-9);
  EXPECT_EQ(mccal_aggregate(v, 1, &agg), MCCAL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, AugmentLogistic) {
  const size_t n = 100;
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = -1.0 + 2.0 * (i + 0.5) / n;
    y[i] = x[i] > 0 ? 1.0 : 0.0;
  }
  size_t n_fit = 0;
  ASSERT_EQ(mccal_fitting_row_count(n, 0.5, &n_fit), MCCAL_OK);
  ASSERT_EQ(n_fit, 50u);
  std::vector<size_t> rows(n_fit);
  ASSERT_EQ(mccal_fitting_rows(n, 0.5, rows.data()), MCCAL_OK);
  EXPECT_EQ(rows[1], 2u);
  const std::vector<double> base_fit(n_fit, 0.5), base_eval(n, 0.5);
  std::vector<double> out(n);
  ASSERT_EQ(mccal_augment_logistic(n, 1, x.data(), y.data(), base_fit.data(),
                                   3, 0.5, n, x.data(), base_eval.data(),
                                   out.data()),
            MCCAL_OK);
  EXPECT_LT(out.front(), 0.5);
  EXPECT_GT(out.back(), 0.5);
  EXPECT_EQ(mccal_augment_logistic(n, 1, x.data(), y.data(), base_fit.data(),
                                   0, 0.5, n, x.data(), base_eval.data(),
                                   out.data()),
            MCCAL_ERR_INVALID_ARGUMENT);
}

}  // namespace
