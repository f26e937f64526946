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

#include "mccal/mccal.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/augment.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/subpops.hpp"
#include "core/synthetic.hpp"

struct mccal_population {
  std::shared_ptr<const mccal::Population> pop;
};

struct mccal_subpops {
  std::shared_ptr<const mccal::Population> pop;
  std::vector<mccal::GeneratedSubpop> items;
  std::size_t attempts = 0;
  bool exhausted = false;
};

struct mccal_report {
  std::shared_ptr<const mccal::Population> pop;
  mccal::MetricsReport report;
};

namespace {

thread_local std::string last_error;

mccal_status Record(mccal_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
mccal_status Guard(F&& body) {
  try {
    body();
    return MCCAL_OK;
  } catch (const mccal::Error& e) {
    return Record(static_cast<mccal_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Record(MCCAL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Record(MCCAL_ERR_INTERNAL, e.what());
  } catch (...) {
    return Record(MCCAL_ERR_INTERNAL, "unknown error");
  }
}

void Require(bool ok, const char* what) {
  if (!ok) mccal::Fail(mccal::ErrorCode::kInvalidArgument, what);
}

mccal::Mode ToMode(mccal_mode mode) {
  switch (mode) {
    case MCCAL_MODE_BERNOULLI:
      return mccal::Mode::kBernoulli;
    case MCCAL_MODE_REGRESSION:
      return mccal::Mode::kRegression;
  }
  mccal::Fail(mccal::ErrorCode::kInvalidArgument, "unknown mode");
}

mccal::WeightingKind ToWeighting(mccal_weighting kind) {
  switch (kind) {
    case MCCAL_WEIGHTING_UNIFORM:
      return mccal::WeightingKind::kUniform;
    case MCCAL_WEIGHTING_PROPORTIONAL:
      return mccal::WeightingKind::kProportional;
    case MCCAL_WEIGHTING_PROPORTIONAL_CLAMPED:
      return mccal::WeightingKind::kProportionalClamped;
    case MCCAL_WEIGHTING_PROPORTIONAL_SHIFTED:
      return mccal::WeightingKind::kProportionalShifted;
    case MCCAL_WEIGHTING_LOW_PREVALENCE:
      return mccal::WeightingKind::kLowPrevalence;
  }
  mccal::Fail(mccal::ErrorCode::kInvalidArgument, "unknown weighting scheme");
}

mccal_population* Wrap(mccal::Population pop) {
  return new mccal_population{
      std::make_shared<const mccal::Population>(std::move(pop))};
}

}  // namespace

extern "C" {

const char* mccal_last_error(void) { return last_error.c_str(); }

const char* mccal_status_name(mccal_status status) {
  switch (status) {
    case MCCAL_OK: return "ok";
    case MCCAL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MCCAL_ERR_NONPOSITIVE_WEIGHT: return "nonpositive weight";
    case MCCAL_ERR_SCORE_OUT_OF_RANGE: return "score out of range";
    case MCCAL_ERR_INVALID_RESPONSE: return "invalid response";
    case MCCAL_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case MCCAL_ERR_ZERO_SCORE: return "zero score";
    case MCCAL_ERR_NO_POSITIVES: return "no positive responses";
    case MCCAL_ERR_EMPTY_SUBPOPULATION: return "empty subpopulation";
    case MCCAL_ERR_WRONG_MODE: return "wrong mode";
    case MCCAL_ERR_INFINITE_RATIO: return "infinite signal-to-noise ratio";
    case MCCAL_ERR_NO_COVARIATES: return "no covariates";
    case MCCAL_ERR_ATTEMPTS_EXHAUSTED: return "attempts exhausted";
    case MCCAL_ERR_PREDICTOR_CONTRACT: return "predictor contract violation";
    case MCCAL_ERR_NON_FINITE: return "non-finite value";
    case MCCAL_ERR_IO: return "i/o error";
    case MCCAL_ERR_PARSE: return "parse error";
    case MCCAL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

double mccal_null_expectation_factor(void) {
  return mccal::kNullExpectationFactor;
}

mccal_status mccal_population_create(size_t n, const double* scores,
                                     const double* responses,
                                     const double* weights, size_t p,
                                     const double* covariates,
                                     const int* nominal, mccal_mode mode,
                                     mccal_population** out) {
  return Guard([&] {
    Require(out != nullptr, "null output handle");
    Require(n == 0 || (scores != nullptr && responses != nullptr),
            "null score or response array");
    Require(p == 0 || covariates != nullptr, "null covariate array");
    std::vector<mccal::Observation> raw(n);
    for (size_t i = 0; i < n; ++i) {
      raw[i] = {scores[i], responses[i], weights ? weights[i] : 1.0, i};
    }
    mccal::Matrix cov(n, p);
    if (p > 0) {
      cov = mccal::Matrix(n, p, std::vector<double>(covariates,
                                                    covariates + n * p));
    }
    std::vector<mccal::CovariateKind> kinds(p, mccal::CovariateKind::kOrdinal);
    if (nominal != nullptr) {
      for (size_t j = 0; j < p; ++j) {
        if (nominal[j] != 0) kinds[j] = mccal::CovariateKind::kNominal;
      }
    }
    *out = Wrap(mccal::BuildPopulation(raw, cov, kinds, ToMode(mode)));
  });
}

void mccal_population_free(mccal_population* pop) { delete pop; }

size_t mccal_population_size(const mccal_population* pop) {
  return pop ? pop->pop->size() : 0;
}

size_t mccal_population_num_covariates(const mccal_population* pop) {
  return pop ? pop->pop->num_covariates() : 0;
}

mccal_mode mccal_population_mode(const mccal_population* pop) {
  return pop && pop->pop->mode() == mccal::Mode::kRegression
             ? MCCAL_MODE_REGRESSION
             : MCCAL_MODE_BERNOULLI;
}

mccal_status mccal_population_get(const mccal_population* pop,
                                  double* scores, double* responses,
                                  double* weights, size_t* original_index,
                                  double* covariates) {
  return Guard([&] {
    Require(pop != nullptr, "null population");
    const mccal::Population& p = *pop->pop;
    if (scores) std::copy(p.scores().begin(), p.scores().end(), scores);
    if (responses) {
      std::copy(p.responses().begin(), p.responses().end(), responses);
    }
    if (weights) std::copy(p.weights().begin(), p.weights().end(), weights);
    if (original_index) {
      std::copy(p.original_indices().begin(), p.original_indices().end(),
                original_index);
    }
    if (covariates) {
      const auto d = p.covariates().data();
      std::copy(d.begin(), d.end(), covariates);
    }
  });
}

mccal_status mccal_population_apply_weighting(const mccal_population* pop,
                                              mccal_weighting kind,
                                              double rho,
                                              mccal_population** out) {
  return Guard([&] {
    Require(pop != nullptr && out != nullptr, "null handle");
    *out = Wrap(mccal::ApplyWeighting(*pop->pop, {ToWeighting(kind), rho}));
  });
}

mccal_status mccal_population_cumulative_differences(
    const mccal_population* pop, double* out) {
  return Guard([&] {
    Require(pop != nullptr && out != nullptr, "null handle");
    const auto c = mccal::CumulativeDifferences(
        mccal::SubpopulationView::Full(*pop->pop));
    std::copy(c.begin(), c.end(), out);
  });
}

mccal_status mccal_subpops_generate(const mccal_population* pop, size_t ell,
                                    size_t min_size, uint64_t seed,
                                    size_t max_attempts,
                                    mccal_subpops** out) {
  return Guard([&] {
    Require(pop != nullptr && out != nullptr, "null handle");
    mccal::GeneratorConfig cfg{ell, min_size, seed, max_attempts};
    auto result = mccal::GenerateSubpopulations(*pop->pop, cfg);
    *out = new mccal_subpops{pop->pop, std::move(result.subpops),
                             result.attempts, result.exhausted};
  });
}

mccal_status mccal_subpops_synthetic(const mccal_population* pop, long long q,
                                     mccal_subpops** out) {
  return Guard([&] {
    Require(pop != nullptr && out != nullptr, "null handle");
    const mccal::SyntheticSpec spec(q);
    auto s = std::make_unique<mccal_subpops>();
    s->pop = pop->pop;
    for (const auto& view : mccal::SynthSubpops(spec, *pop->pop)) {
      s->items.push_back({std::vector<size_t>(view.indices().begin(),
                                              view.indices().end()),
                          {},
                          view.label()});
    }
    *out = s.release();
  });
}

mccal_status mccal_subpops_create(const mccal_population* pop,
                                  mccal_subpops** out) {
  return Guard([&] {
    Require(pop != nullptr && out != nullptr, "null handle");
    *out = new mccal_subpops{pop->pop, {}, 0, false};
  });
}

mccal_status mccal_subpops_add(mccal_subpops* subpops, const size_t* indices,
                               size_t n) {
  return Guard([&] {
    Require(subpops != nullptr, "null handle");
    Require(n == 0 || indices != nullptr, "null index array");
    std::vector<size_t> idx(indices, indices + n);
    const size_t label = subpops->items.size() + 1;
    // Validates ordering, bounds and nonemptiness.
    mccal::SubpopulationView check(*subpops->pop, idx, label);
    subpops->items.push_back({std::move(idx), {}, label});
  });
}

void mccal_subpops_free(mccal_subpops* subpops) { delete subpops; }

size_t mccal_subpops_count(const mccal_subpops* subpops) {
  return subpops ? subpops->items.size() : 0;
}

size_t mccal_subpops_attempts(const mccal_subpops* subpops) {
  return subpops ? subpops->attempts : 0;
}

int mccal_subpops_exhausted(const mccal_subpops* subpops) {
  return subpops && subpops->exhausted ? 1 : 0;
}

size_t mccal_subpops_label(const mccal_subpops* subpops, size_t i) {
  return subpops && i < subpops->items.size() ? subpops->items[i].label : 0;
}

size_t mccal_subpops_size(const mccal_subpops* subpops, size_t i) {
  return subpops && i < subpops->items.size()
             ? subpops->items[i].indices.size()
             : 0;
}

size_t mccal_subpops_depth(const mccal_subpops* subpops, size_t i) {
  return subpops && i < subpops->items.size() ? subpops->items[i].path.size()
                                              : 0;
}

mccal_status mccal_subpops_indices(const mccal_subpops* subpops, size_t i,
                                   size_t* out) {
  return Guard([&] {
    Require(subpops != nullptr && out != nullptr, "null handle");
    Require(i < subpops->items.size(), "subpopulation position out of range");
    const auto& idx = subpops->items[i].indices;
    std::copy(idx.begin(), idx.end(), out);
  });
}

mccal_status mccal_subpops_describe(const mccal_subpops* subpops, size_t i,
                                    const char* const* names,
                                    size_t num_names, char* buf,
                                    size_t buflen, size_t* needed) {
  return Guard([&] {
    Require(subpops != nullptr, "null handle");
    Require(i < subpops->items.size(), "subpopulation position out of range");
    std::vector<std::string> owned;
    if (names != nullptr) owned.assign(names, names + num_names);
    const std::string text =
        mccal::DescribePath(subpops->items[i].path, owned);
    if (needed) *needed = text.size();
    if (buf != nullptr && buflen > 0) {
      const size_t n = std::min(text.size(), buflen - 1);
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

mccal_status mccal_report_compute(const mccal_population* pop,
                                  const mccal_subpops* subpops,
                                  unsigned threads, mccal_report** out) {
  return Guard([&] {
    Require(pop != nullptr && out != nullptr, "null handle");
    Require(subpops == nullptr || subpops->pop == pop->pop,
            "subpopulations belong to a different population");
    std::vector<mccal::GeneratedSubpop> none;
    const auto views = mccal::MakeViews(
        *pop->pop, subpops ? subpops->items : none);
    *out = new mccal_report{pop->pop, mccal::Multicalibration(views, threads)};
  });
}

void mccal_report_free(mccal_report* report) { delete report; }

mccal_status mccal_report_summary(const mccal_report* report,
                                  mccal_summary* out) {
  return Guard([&] {
    Require(report != nullptr && out != nullptr, "null handle");
    const auto& r = report->report;
    const auto& full = r.per_subpop.front();
    *out = {full.kuiper, full.sigma, r.multical, r.multi_ablate,
            r.argmax_multical, r.argmax_ablate, r.expectation_at_argmax};
  });
}

size_t mccal_report_count(const mccal_report* report) {
  return report ? report->report.per_subpop.size() : 0;
}

mccal_status mccal_report_entry(const mccal_report* report, size_t i,
                                mccal_subpop_metrics* out) {
  return Guard([&] {
    Require(report != nullptr && out != nullptr, "null handle");
    Require(i < report->report.per_subpop.size(), "entry out of range");
    const auto& m = report->report.per_subpop[i];
    *out = {m.label, m.size, m.total_weight, m.kuiper, m.sigma,
            m.expected_kuiper_null, m.normalized};
  });
}

mccal_status mccal_expected_kuiper_null(double sigma, double* out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    *out = mccal::ExpectedKuiperNull(sigma);
  });
}

mccal_status mccal_aggregate(const double* values, size_t n,
                             mccal_seed_aggregate* out) {
  return Guard([&] {
    Require(out != nullptr && (n == 0 || values != nullptr), "null pointer");
    const auto a = mccal::AggregateOverSeeds({values, n});
    *out = {a.mean, a.twice_sem, a.count};
  });
}

mccal_status mccal_synth_population(long long q, mccal_population** out) {
  return Guard([&] {
    Require(out != nullptr, "null output handle");
    *out = Wrap(mccal::SynthPopulation(mccal::SyntheticSpec(q)));
  });
}

mccal_status mccal_synth_oracle_eval(long long q, mccal_synth_oracle* out,
                                     double* dk, double* sigma) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    const mccal::SyntheticSpec spec(q);
    const auto o = mccal::Oracle(spec);
    *out = {spec.n0(), spec.ell(), o.d0, o.m, o.multi_ablate, o.argmax_k};
    if (dk) std::copy(o.dk.begin(), o.dk.end(), dk);
    if (sigma) std::copy(o.sigma.begin(), o.sigma.end(), sigma);
  });
}

mccal_status mccal_fitting_row_count(size_t n_train, double holdout_fraction,
                                     size_t* out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    *out = mccal::FittingRows(n_train, holdout_fraction).size();
  });
}

mccal_status mccal_fitting_rows(size_t n_train, double holdout_fraction,
                                size_t* out) {
  return Guard([&] {
    Require(out != nullptr, "null output");
    const auto rows = mccal::FittingRows(n_train, holdout_fraction);
    std::copy(rows.begin(), rows.end(), out);
  });
}

mccal_status mccal_augment_logistic(
    size_t n_train, size_t p, const double* train_covariates,
    const double* train_responses, const double* base_fit, size_t rounds,
    double holdout_fraction, size_t n_eval, const double* eval_covariates,
    const double* base_eval, double* out_eval) {
  return Guard([&] {
    Require(train_responses != nullptr && base_fit != nullptr &&
                base_eval != nullptr && out_eval != nullptr,
            "null array");
    Require(p == 0 || (train_covariates != nullptr &&
                       eval_covariates != nullptr),
            "null covariate array");
    const mccal::Matrix train(
        n_train, p,
        p ? std::vector<double>(train_covariates,
                                train_covariates + n_train * p)
          : std::vector<double>());
    const mccal::Matrix eval(
        n_eval, p,
        p ? std::vector<double>(eval_covariates, eval_covariates + n_eval * p)
          : std::vector<double>());
    const size_t n_fit =
        mccal::FittingRows(n_train, holdout_fraction).size();
    const auto fitter = mccal::ReferenceLogisticFitter();
    const mccal::AugmentConfig cfg{rounds, fitter.get(), holdout_fraction};
    const auto result = mccal::Augment(
        train, {train_responses, n_train}, {base_fit, n_fit}, cfg, eval,
        {base_eval, n_eval});
    std::copy(result.begin(), result.end(), out_eval);
  });
}

}  // extern "C"
