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

#ifndef MCCAL_TOOLS_CLI_COMMANDS_HPP_
#define MCCAL_TOOLS_CLI_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli/csv.hpp"
#include "mccal/mccal.h"
#include "json.hpp"

namespace mccal::cli {

struct InputSchema {
  std::string score_column = "score";
  std::string response_column = "response";
  std::optional<std::string> weight_column;
  std::vector<std::string> nominal_columns;
};

struct WeightingOption {
  mccal_weighting kind = MCCAL_WEIGHTING_UNIFORM;
  double rho = 0.0;
};

// Accepts uniform, proportional, proportional-clamped=RHO,
// proportional-shifted=RHO and low-prevalence.
WeightingOption ParseWeighting(const std::string& text);
std::string WeightingName(const WeightingOption& w);

mccal_mode ParseMode(const std::string& text);

// Population data pulled out of a CSV under a schema. Every column other
// than score, response and weight is a covariate.
struct LoadedInput {
  std::vector<double> scores;
  std::vector<double> responses;
  std::vector<double> weights;  // empty when no weight column
  std::vector<std::string> covariate_names;
  std::vector<int> nominal;
  std::vector<double> covariates;  // row-major
  std::size_t rows = 0;
};

LoadedInput LoadInput(const CsvTable& table, const InputSchema& schema,
                      bool require_responses = true);

struct MetricsOptions {
  std::string input_path;
  std::optional<std::string> output_path;  // stdout when unset
  InputSchema schema;
  std::string mode = "bernoulli";
  std::size_t ell = 1000;  // 0 disables the generator
  std::size_t min_size = 10;
  std::size_t max_attempts = 0;
  std::vector<std::uint64_t> seeds;  // defaults to {0}
  // Unset keeps the input weights (or uniform ones without a weight column).
  std::optional<WeightingOption> weighting;
  std::optional<std::string> curve_output;
  bool synthetic_subpops = false;
  unsigned threads = 1;
};

// Builds the report document; writes it (and the curve) when paths are set.
nlohmann::json RunMetrics(const MetricsOptions& options);

// Short text rendering of a report document.
std::string RenderSummary(const nlohmann::json& report);

struct SynthOptions {
  long long q = 3;
  std::string output_path;
  std::string oracle_path;
};

// Synthetic population CSV (score, response, weight, index) plus the oracle
// document.
void RunSynth(const SynthOptions& options);
CsvTable SynthTable(long long q);
nlohmann::json OracleDocument(long long q);

struct AugmentOptions {
  std::string train_path;
  std::string eval_path;
  std::string output_path;
  InputSchema schema;
  std::size_t rounds = 3;
  std::string output_column = "final_score";
};

struct AugmentSummary {
  std::vector<double> final_scores;
  std::optional<double> kuiper_before;
  std::optional<double> kuiper_after;
};

AugmentSummary RunAugment(const AugmentOptions& options);

}  // namespace mccal::cli

#endif  // MCCAL_TOOLS_CLI_COMMANDS_HPP_
