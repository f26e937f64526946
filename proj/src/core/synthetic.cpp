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

#include "core/synthetic.hpp"

#include <cmath>
#include <initializer_list>

#include "core/error.hpp"

namespace mccal {
namespace {

// Horner evaluation; coefficients from the highest power down.
double Horner(double x, std::initializer_list<double> coeffs) {
  double acc = 0.0;
  for (double c : coeffs) acc = acc * x + c;
  return acc;
}

// Radicand of sigma_k, grouped by powers of q with coefficients in k.
double SigmaRadicand(double q, double k) {
  const double k2 = k * k;
  const double k3 = k2 * k;
  return Horner(q, {2.0,
                    12.0,
                    -12.0 * k2 - 12.0 * k + 27.0,
                    8.0 * k3 - 36.0 * k2 - 42.0 * k + 29.0,
                    24.0 * k3 - 36.0 * k2 - 54.0 * k + 16.0,
                    24.0 * k3 - 12.0 * k2 - 32.0 * k + 4.0,
                    8.0 * k3 - 8.0 * k});
}

}  // namespace

SyntheticSpec::SyntheticSpec(long long q) : q_(q) {
  if (q < 1 || q % 2 == 0) Fail(ErrorCode::kInvalidArgument, "q must be odd");
}

Population SynthPopulation(const SyntheticSpec& spec) {
  const long long q = spec.q();
  const std::size_t n = spec.n0();
  const double denom = 2.0 * static_cast<double>((q + 1) * (q + 1));

  std::vector<Observation> raw(n);
  Matrix cov(n, 1);
  for (long long block = 1; block <= q; ++block) {
    for (long long t = 1; t <= q + 1; ++t) {
      const long long j = (block - 1) * (q + 1) + t;  // 1-based
      Observation& o = raw[static_cast<std::size_t>(j - 1)];
      o.score = static_cast<double>(2 * j + q) / denom;
      o.response = t <= block ? 1.0 : 0.0;
      o.weight = 1.0;
      cov(static_cast<std::size_t>(j - 1), 0) = static_cast<double>(j);
    }
  }
  const CovariateKind kind[] = {CovariateKind::kOrdinal};
  return BuildPopulation(raw, cov, kind, Mode::kBernoulli);
}

std::vector<SubpopulationView> SynthSubpops(const SyntheticSpec& spec,
                                            const Population& pop) {
  if (pop.size() != spec.n0()) {
    Fail(ErrorCode::kShapeMismatch,
         "population size does not match the synthetic spec");
  }
  const std::size_t block = static_cast<std::size_t>(spec.q() + 1);
  std::vector<SubpopulationView> views;
  for (std::size_t k = 1; k <= spec.ell(); ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t i = k * block; i < spec.n0() - k * block; ++i) {
      idx.push_back(i);
    }
    views.emplace_back(pop, std::move(idx), k);
  }
  return views;
}

SyntheticOracle Oracle(const SyntheticSpec& spec) {
  const double q = static_cast<double>(spec.q());
  const std::size_t ell = spec.ell();
  SyntheticOracle o;
  o.d0 = (2.0 * q + 3.0) / (8.0 * q * (q + 1.0));
  for (std::size_t k = 1; k <= ell; ++k) {
    const double kk = static_cast<double>(k);
    o.dk.push_back((2.0 * q + 3.0) / (8.0 * (q - 2.0 * kk) * (q + 1.0)));
  }
  for (std::size_t k = 0; k <= ell; ++k) {
    const double kk = static_cast<double>(k);
    o.sigma.push_back(std::sqrt(SigmaRadicand(q, kk)) /
                      ((q - 2.0 * kk) * std::pow(q + 1.0, 3) * std::sqrt(12.0)));
  }
  o.m = (2.0 * q + 3.0) / (8.0 * (q + 1.0)) *
        std::sqrt(Horner(q, {2.0, 12.0, 27.0, 29.0, 16.0, 4.0}) /
                  Horner(q, {3.0, 15.0, 29.0, 27.0, 13.0, 3.0, 0.0}));
  o.multi_ablate = (2.0 * q + 3.0) / (8.0 * (q + 1.0));
  o.argmax_k = ell;
  return o;
}

}  // namespace mccal
