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

#ifndef MCCAL_CORE_SYNTHETIC_HPP_
#define MCCAL_CORE_SYNTHETIC_HPP_

#include <cstddef>
#include <vector>

#include "core/dataset.hpp"
#include "core/metrics.hpp"

namespace mccal {

// Block-structured dataset with closed-form metrics, parameterized by an
// odd q >= 1: n0 = q(q+1) observations in q blocks of q+1, scores linear in
// the index, and ell = (q-1)/2 nested middle subpopulations.
class SyntheticSpec {
 public:
  explicit SyntheticSpec(long long q);

  long long q() const { return q_; }
  std::size_t n0() const { return static_cast<std::size_t>(q_ * (q_ + 1)); }
  std::size_t ell() const { return static_cast<std::size_t>((q_ - 1) / 2); }

 private:
  long long q_;
};

struct SyntheticOracle {
  double d0 = 0.0;
  std::vector<double> dk;     // k = 1..ell
  std::vector<double> sigma;  // k = 0..ell
  double m = 0.0;
  double multi_ablate = 0.0;
  std::size_t argmax_k = 0;
};

// Uniform weights, Bernoulli responses, one ordinal covariate equal to the
// 1-based index.
Population SynthPopulation(const SyntheticSpec& spec);

// The middle subpopulations k = 1..ell; empty for q = 1.
std::vector<SubpopulationView> SynthSubpops(const SyntheticSpec& spec,
                                            const Population& pop);

// Closed-form values for the synthetic dataset.
SyntheticOracle Oracle(const SyntheticSpec& spec);

}  // namespace mccal

#endif  // MCCAL_CORE_SYNTHETIC_HPP_
