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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/capi.hpp"
#include "cli/commands.hpp"

namespace {

void AddSchemaFlags(CLI::App* cmd, mccal::cli::InputSchema& schema,
                    std::string& weight_col) {
  cmd->add_option("--score-col", schema.score_column, "Score column name")
      ->capture_default_str();
  cmd->add_option("--response-col", schema.response_column,
                  "Response column name")
      ->capture_default_str();
  cmd->add_option("--weight-col", weight_col,
                  "Weight column name (default: uniform weights)");
  cmd->add_option("--nominal", schema.nominal_columns,
                  "Covariate columns to treat as nominal (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mccal::cli;

  CLI::App app{"Calibration and multi-calibration metrics"};
  app.require_subcommand(1);

  MetricsOptions metrics;
  std::string metrics_weight_col;
  std::string output;
  std::string curve;
  std::string weighting;
  auto* m = app.add_subcommand("metrics", "Compute a metrics report from CSV");
  m->add_option("--input", metrics.input_path, "Input CSV")->required();
  m->add_option("--output", output, "Report path (default: stdout)");
  AddSchemaFlags(m, metrics.schema, metrics_weight_col);
  m->add_option("--mode", metrics.mode, "bernoulli or regression")
      ->capture_default_str();
  m->add_option("--ell", metrics.ell,
                "Number of subpopulations to generate (0 disables)")
      ->capture_default_str();
  m->add_option("--min-size", metrics.min_size, "Minimum subpopulation size")
      ->capture_default_str();
  m->add_option("--max-attempts", metrics.max_attempts,
                "Cap on generator path restarts (default 100 * ell)");
  m->add_option("--seed", metrics.seeds, "Generator seed (repeatable)");
  m->add_option("--weighting", weighting,
                "uniform | proportional | proportional-clamped=RHO | "
                "proportional-shifted=RHO | low-prevalence");
  m->add_option("--curve-out", curve,
                "Write the cumulative-difference curve as CSV");
  m->add_flag("--synthetic-subpops", metrics.synthetic_subpops,
              "Use the canonical subpopulations of a synthetic input");
  m->add_option("--threads", metrics.threads,
                "Threads for evaluating subpopulations")
      ->capture_default_str();

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Write the synthetic dataset and oracle");
  s->add_option("--q", synth.q, "Odd positive integer")->required();
  s->add_option("--output", synth.output_path, "Population CSV")->required();
  s->add_option("--oracle", synth.oracle_path, "Oracle document")->required();

  AugmentOptions augment;
  std::string augment_weight_col;
  auto* a = app.add_subcommand(
      "augment", "Refit logistic regression on covariates plus scores");
  a->add_option("--train", augment.train_path, "Training CSV")->required();
  a->add_option("--eval", augment.eval_path, "Evaluation CSV")->required();
  a->add_option("--output", augment.output_path, "Output CSV")->required();
  a->add_option("--rounds", augment.rounds, "Augmentation rounds")
      ->capture_default_str();
  AddSchemaFlags(a, augment.schema, augment_weight_col);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (m->parsed()) {
      if (!metrics_weight_col.empty()) {
        metrics.schema.weight_column = metrics_weight_col;
      }
      if (!output.empty()) metrics.output_path = output;
      if (!curve.empty()) metrics.curve_output = curve;
      if (!weighting.empty()) metrics.weighting = ParseWeighting(weighting);
      const auto doc = RunMetrics(metrics);
      if (metrics.output_path) {
        std::cout << RenderSummary(doc);
      } else {
        std::cout << doc.dump(2) << '\n';
      }
    } else if (s->parsed()) {
      RunSynth(synth);
    } else if (a->parsed()) {
      if (!augment_weight_col.empty()) {
        augment.schema.weight_column = augment_weight_col;
      }
      const auto summary = RunAugment(augment);
      if (summary.kuiper_before) {
        std::cout << "kuiper_before=" << FormatDouble(*summary.kuiper_before)
                  << " kuiper_after=" << FormatDouble(*summary.kuiper_after)
                  << '\n';
      } else {
        std::cout << "eval file has no response column; Kuiper summary "
                     "omitted\n";
      }
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
