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

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "cli/capi.hpp"

namespace mccal::cli {

using nlohmann::json;

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw CliError(kExitValidation, what);
}

std::vector<double> Gather(const std::vector<double>& v,
                           const std::vector<std::size_t>& rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(v[r]);
  return out;
}

PopulationHandle MakePopulation(const LoadedInput& in, mccal_mode mode) {
  mccal_population* raw = nullptr;
  Check(mccal_population_create(
      in.rows, in.scores.data(), in.responses.data(),
      in.weights.empty() ? nullptr : in.weights.data(),
      in.covariate_names.size(),
      in.covariates.empty() ? nullptr : in.covariates.data(),
      in.nominal.empty() ? nullptr : in.nominal.data(), mode, &raw));
  return PopulationHandle(raw);
}

std::string Describe(const mccal_subpops* subpops, std::size_t i,
                     const std::vector<const char*>& names) {
  std::size_t needed = 0;
  Check(mccal_subpops_describe(subpops, i, names.data(), names.size(),
                               nullptr, 0, &needed));
  std::string text(needed + 1, '\0');
  Check(mccal_subpops_describe(subpops, i, names.data(), names.size(),
                               text.data(), text.size(), &needed));
  text.resize(needed);
  return text;
}

// 1 - weighted fraction of correct classifications at threshold 0.5.
double ClassificationError(const mccal_population* pop) {
  const std::size_t n = mccal_population_size(pop);
  std::vector<double> s(n), r(n), w(n);
  Check(mccal_population_get(pop, s.data(), r.data(), w.data(), nullptr,
                             nullptr));
  double wrong = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double predicted = s[i] >= 0.5 ? 1.0 : 0.0;
    if (predicted != r[i]) wrong += w[i];
    total += w[i];
  }
  return wrong / total;
}

long long SyntheticQ(std::size_t n) {
  auto q = static_cast<long long>(std::floor(std::sqrt(static_cast<double>(n))));
  while (q > 0 && q * (q + 1) > static_cast<long long>(n)) --q;
  while ((q + 1) * (q + 2) <= static_cast<long long>(n)) ++q;
  if (q < 1 || q * (q + 1) != static_cast<long long>(n) || q % 2 == 0) {
    Invalid("--synthetic-subpops needs an input of q(q+1) rows with q odd");
  }
  return q;
}

json RunOne(const mccal_population* pop, std::uint64_t seed,
            const MetricsOptions& o, const std::vector<const char*>& names,
            long long synth_q) {
  SubpopsHandle subpops;
  mccal_subpops* raw = nullptr;
  if (synth_q > 0) {
    Check(mccal_subpops_synthetic(pop, synth_q, &raw));
    subpops.reset(raw);
  } else if (o.ell > 0) {
    Check(mccal_subpops_generate(pop, o.ell, o.min_size, seed, o.max_attempts,
                                 &raw));
    subpops.reset(raw);
  }

  mccal_report* rep_raw = nullptr;
  Check(mccal_report_compute(pop, subpops.get(), o.threads, &rep_raw));
  ReportHandle report(rep_raw);

  // Entry 0 is the full population; entry i > 0 is subpops position i - 1.
  std::vector<std::string> paths(mccal_report_count(report.get()));
  for (std::size_t i = 1; i < paths.size(); ++i) {
    if (synth_q > 0) {
      std::ostringstream os;
      os << "middle blocks k=" << i;
      paths[i] = os.str();
    } else {
      paths[i] = Describe(subpops.get(), i - 1, names);
    }
  }

  json run;
  run["seed"] = seed;
  if (subpops && synth_q == 0) {
    run["attempts"] = mccal_subpops_attempts(subpops.get());
    run["exhausted"] = mccal_subpops_exhausted(subpops.get()) != 0;
  }
  json records = json::array();
  std::vector<std::string> path_by_label(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    mccal_subpop_metrics m;
    Check(mccal_report_entry(report.get(), i, &m));
    records.push_back({{"label", m.label},
                       {"size", m.size},
                       {"total_weight", m.total_weight},
                       {"kuiper", m.kuiper},
                       {"sigma", m.sigma},
                       {"expected_kuiper_null", m.expected_kuiper_null},
                       {"normalized", m.normalized},
                       {"path", paths[i]}});
    if (m.label < path_by_label.size()) path_by_label[m.label] = paths[i];
  }
  run["subpopulations"] = std::move(records);

  mccal_summary s;
  Check(mccal_report_summary(report.get(), &s));
  json summary;
  if (mccal_population_mode(pop) == MCCAL_MODE_BERNOULLI) {
    summary["error"] = ClassificationError(pop);
  }
  summary["kuiper"] = s.kuiper;
  summary["multical"] = s.multical;
  summary["multi_ablate"] = s.multi_ablate;
  summary["expectation"] = s.expectation_at_argmax;
  summary["argmax_multical"] = s.argmax_multical;
  summary["argmax_ablate"] = s.argmax_ablate;
  summary["argmax_multical_path"] = path_by_label.at(s.argmax_multical);
  summary["argmax_ablate_path"] = path_by_label.at(s.argmax_ablate);
  run["summary"] = std::move(summary);
  return run;
}

void WriteCurve(const mccal_population* pop, const std::string& path) {
  const std::size_t n = mccal_population_size(pop);
  std::vector<double> c(n + 1), w(n);
  Check(mccal_population_cumulative_differences(pop, c.data()));
  Check(mccal_population_get(pop, nullptr, nullptr, w.data(), nullptr,
                             nullptr));
  double total = 0.0;
  for (double x : w) total += x;

  CsvTable curve;
  curve.header = {"weight_fraction", "cumulative_difference"};
  double partial = 0.0;
  curve.rows.push_back({FormatDouble(0.0), FormatDouble(c[0])});
  for (std::size_t i = 0; i < n; ++i) {
    partial += w[i];
    curve.rows.push_back({FormatDouble(partial / total), FormatDouble(c[i + 1])});
  }
  WriteCsv(path, curve);
}

}  // namespace

WeightingOption ParseWeighting(const std::string& text) {
  const auto eq = text.find('=');
  const std::string name = text.substr(0, eq);
  auto rho = [&] {
    if (eq == std::string::npos) Invalid("'" + name + "' needs =RHO");
    try {
      return ParseDouble(std::string_view(text).substr(eq + 1));
    } catch (const CliError&) {
      Invalid("bad RHO in '" + text + "'");
    }
  };
  auto plain = [&](mccal_weighting kind) {
    if (eq != std::string::npos) Invalid("'" + name + "' takes no parameter");
    return WeightingOption{kind, 0.0};
  };
  if (name == "uniform") return plain(MCCAL_WEIGHTING_UNIFORM);
  if (name == "proportional") return plain(MCCAL_WEIGHTING_PROPORTIONAL);
  if (name == "low-prevalence") return plain(MCCAL_WEIGHTING_LOW_PREVALENCE);
  if (name == "proportional-clamped") {
    return {MCCAL_WEIGHTING_PROPORTIONAL_CLAMPED, rho()};
  }
  if (name == "proportional-shifted") {
    return {MCCAL_WEIGHTING_PROPORTIONAL_SHIFTED, rho()};
  }
  Invalid("unknown weighting '" + text + "'");
}

std::string WeightingName(const WeightingOption& w) {
  switch (w.kind) {
    case MCCAL_WEIGHTING_UNIFORM: return "uniform";
    case MCCAL_WEIGHTING_PROPORTIONAL: return "proportional";
    case MCCAL_WEIGHTING_LOW_PREVALENCE: return "low-prevalence";
    case MCCAL_WEIGHTING_PROPORTIONAL_CLAMPED:
      return "proportional-clamped=" + FormatDouble(w.rho);
    case MCCAL_WEIGHTING_PROPORTIONAL_SHIFTED:
      return "proportional-shifted=" + FormatDouble(w.rho);
  }
  return "unknown";
}

mccal_mode ParseMode(const std::string& text) {
  if (text == "bernoulli") return MCCAL_MODE_BERNOULLI;
  if (text == "regression") return MCCAL_MODE_REGRESSION;
  Invalid("mode must be bernoulli or regression, got '" + text + "'");
}

LoadedInput LoadInput(const CsvTable& table, const InputSchema& schema,
                      bool require_responses) {
  LoadedInput in;
  in.rows = table.rows.size();
  const std::size_t score_col = table.Require(schema.score_column);
  std::optional<std::size_t> response_col =
      require_responses ? std::optional(table.Require(schema.response_column))
                        : table.Find(schema.response_column);
  std::optional<std::size_t> weight_col;
  if (schema.weight_column) weight_col = table.Require(*schema.weight_column);

  in.scores = table.NumericColumn(score_col);
  if (response_col) in.responses = table.NumericColumn(*response_col);
  if (weight_col) in.weights = table.NumericColumn(*weight_col);

  std::set<std::string> nominal(schema.nominal_columns.begin(),
                                schema.nominal_columns.end());
  std::vector<std::size_t> cov_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == score_col || c == response_col || c == weight_col) continue;
    cov_cols.push_back(c);
    in.covariate_names.push_back(table.header[c]);
    in.nominal.push_back(nominal.erase(table.header[c]) ? 1 : 0);
  }
  if (!nominal.empty()) {
    Invalid("nominal column '" + *nominal.begin() +
            "' is not a covariate column");
  }
  std::vector<std::vector<double>> columns;
  for (std::size_t c : cov_cols) columns.push_back(table.NumericColumn(c));
  in.covariates.reserve(in.rows * cov_cols.size());
  for (std::size_t r = 0; r < in.rows; ++r) {
    for (const auto& col : columns) in.covariates.push_back(col[r]);
  }
  return in;
}

json RunMetrics(const MetricsOptions& o) {
  const CsvTable table = ReadCsv(o.input_path);
  const LoadedInput input = LoadInput(table, o.schema);
  const mccal_mode mode = ParseMode(o.mode);
  PopulationHandle pop = MakePopulation(input, mode);
  if (o.weighting) {
    mccal_population* weighted = nullptr;
    Check(mccal_population_apply_weighting(pop.get(), o.weighting->kind,
                                           o.weighting->rho, &weighted));
    pop.reset(weighted);
  }

  std::vector<std::uint64_t> seeds = o.seeds;
  if (seeds.empty()) seeds.push_back(0);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  const long long synth_q = o.synthetic_subpops ? SyntheticQ(input.rows) : 0;
  std::vector<const char*> names;
  for (const auto& n : input.covariate_names) names.push_back(n.c_str());

  json doc;
  doc["mode"] = o.mode;
  doc["n0"] = mccal_population_size(pop.get());
  doc["ell"] = synth_q > 0 ? static_cast<std::size_t>((synth_q - 1) / 2) : o.ell;
  doc["min_size"] = o.min_size;
  doc["seeds"] = seeds;
  doc["weighting"] = o.weighting ? WeightingName(*o.weighting)
                     : input.weights.empty() ? "uniform"
                                             : "input";
  doc["subpopulation_source"] = synth_q > 0   ? "synthetic"
                                : o.ell > 0 ? "generated"
                                            : "none";
  json runs = json::array();
  for (std::uint64_t seed : seeds) {
    runs.push_back(RunOne(pop.get(), seed, o, names, synth_q));
  }

  if (seeds.size() >= 2) {
    json sweep;
    for (const char* key : {"multical", "multi_ablate", "expectation"}) {
      std::vector<double> values;
      for (const auto& run : runs) {
        values.push_back(run["summary"][key].get<double>());
      }
      mccal_seed_aggregate agg;
      Check(mccal_aggregate(values.data(), values.size(), &agg));
      sweep[key] = {{"mean", agg.mean}, {"twice_sem", agg.twice_sem},
                    {"count", agg.count}};
    }
    doc["seed_sweep"] = std::move(sweep);
  }
  doc["runs"] = std::move(runs);

  if (o.curve_output) WriteCurve(pop.get(), *o.curve_output);
  if (o.output_path) WriteText(*o.output_path, doc.dump(2) + "\n");
  return doc;
}

std::string RenderSummary(const json& doc) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "n0=" << doc["n0"] << " mode=" << doc["mode"].get<std::string>()
     << " weighting=" << doc["weighting"].get<std::string>() << '\n';
  for (const auto& run : doc["runs"]) {
    const auto& s = run["summary"];
    os << "seed " << run["seed"] << ":";
    if (s.contains("error")) os << " error=" << s["error"].get<double>();
    os << " kuiper=" << s["kuiper"].get<double>()
       << " multical=" << s["multical"].get<double>()
       << " multi_ablate=" << s["multi_ablate"].get<double>()
       << " expectation=" << s["expectation"].get<double>() << '\n';
    const std::string path = s["argmax_multical_path"].get<std::string>();
    os << "  argmax multical: k=" << s["argmax_multical"] << " ("
       << (path.empty() ? "full population" : path) << ")\n";
  }
  if (doc.contains("seed_sweep")) {
    for (const auto& [key, agg] : doc["seed_sweep"].items()) {
      os << key << ": " << agg["mean"].get<double>() << " +/- "
         << agg["twice_sem"].get<double>() << '\n';
    }
  }
  return os.str();
}

CsvTable SynthTable(long long q) {
  mccal_population* raw = nullptr;
  Check(mccal_synth_population(q, &raw));
  PopulationHandle pop(raw);
  const std::size_t n = mccal_population_size(pop.get());
  std::vector<double> s(n), r(n), w(n), cov(n);
  Check(mccal_population_get(pop.get(), s.data(), r.data(), w.data(), nullptr,
                             cov.data()));
  CsvTable table;
  table.header = {"score", "response", "weight", "index"};
  for (std::size_t i = 0; i < n; ++i) {
    table.rows.push_back({FormatDouble(s[i]), FormatDouble(r[i]),
                          FormatDouble(w[i]), FormatDouble(cov[i])});
    table.line_numbers.push_back(i + 2);
  }
  return table;
}

json OracleDocument(long long q) {
  mccal_synth_oracle o;
  Check(mccal_synth_oracle_eval(q, &o, nullptr, nullptr));
  std::vector<double> dk(o.ell), sigma(o.ell + 1);
  Check(mccal_synth_oracle_eval(q, &o, dk.data(), sigma.data()));
  return {{"q", q},
          {"n0", o.n0},
          {"ell", o.ell},
          {"kuiper", o.d0},
          {"dk", dk},
          {"sigma", sigma},
          {"multical", o.multical},
          {"multi_ablate", o.multi_ablate},
          {"argmax_multical", o.argmax_k}};
}

void RunSynth(const SynthOptions& o) {
  if (o.q < 1 || o.q % 2 == 0) Invalid("q must be odd");
  WriteCsv(o.output_path, SynthTable(o.q));
  WriteText(o.oracle_path, OracleDocument(o.q).dump(2) + "\n");
}

AugmentSummary RunAugment(const AugmentOptions& o) {
  if (o.rounds < 1) Invalid("rounds must be >= 1");
  const CsvTable train_table = ReadCsv(o.train_path);
  CsvTable eval_table = ReadCsv(o.eval_path);
  const LoadedInput train = LoadInput(train_table, o.schema);
  const LoadedInput eval = LoadInput(eval_table, o.schema, false);
  if (train.covariate_names != eval.covariate_names) {
    Invalid("train and eval files must have the same covariate columns");
  }
  if (eval_table.Find(o.output_column)) {
    Invalid("eval file already has a '" + o.output_column + "' column");
  }
  const double fraction = 0.5;
  std::size_t n_fit = 0;
  Check(mccal_fitting_row_count(train.rows, fraction, &n_fit));
  std::vector<std::size_t> fit_rows(n_fit);
  Check(mccal_fitting_rows(train.rows, fraction, fit_rows.data()));
  const std::vector<double> base_fit = Gather(train.scores, fit_rows);

  const std::size_t p = train.covariate_names.size();
  AugmentSummary summary;
  summary.final_scores.resize(eval.rows);
  Check(mccal_augment_logistic(
      train.rows, p, train.covariates.data(), train.responses.data(),
      base_fit.data(), o.rounds, fraction, eval.rows, eval.covariates.data(),
      eval.scores.data(), summary.final_scores.data()));

  eval_table.header.push_back(o.output_column);
  for (std::size_t r = 0; r < eval.rows; ++r) {
    eval_table.rows[r].push_back(FormatDouble(summary.final_scores[r]));
  }
  WriteCsv(o.output_path, eval_table);

  if (!eval.responses.empty() && eval.rows > 0) {
    const bool binary = std::all_of(
        eval.responses.begin(), eval.responses.end(),
        [](double v) { return v == 0.0 || v == 1.0; });
    const mccal_mode mode =
        binary ? MCCAL_MODE_BERNOULLI : MCCAL_MODE_REGRESSION;
    auto kuiper = [&](const std::vector<double>& scores) {
      LoadedInput in = eval;
      in.scores = scores;
      PopulationHandle pop = MakePopulation(in, mode);
      mccal_report* raw = nullptr;
      Check(mccal_report_compute(pop.get(), nullptr, 1, &raw));
      ReportHandle report(raw);
      mccal_summary s;
      Check(mccal_report_summary(report.get(), &s));
      return s.kuiper;
    };
    summary.kuiper_before = kuiper(eval.scores);
    summary.kuiper_after = kuiper(summary.final_scores);
  }
  return summary;
}

}  // namespace mccal::cli
