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

#ifndef MCCAL_CORE_SUBPOPS_HPP_
#define MCCAL_CORE_SUBPOPS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/metrics.hpp"

namespace mccal {

enum class Direction { kBelow, kAtOrAbove };

struct SplitStep {
  std::size_t covariate = 0;
  // Median of the distinct values within the node. For nominal covariates
  // this is in rank space: each category is replaced by its position in
  // `nominal_order` before comparing.
  double threshold = 0.0;
  Direction direction = Direction::kBelow;
  // Category values in the random order drawn for this path. Empty for
  // ordinal covariates.
  std::vector<double> nominal_order;

  bool operator==(const SplitStep&) const = default;
};

struct GeneratedSubpop {
  std::vector<std::size_t> indices;  // strictly increasing, score order
  std::vector<SplitStep> path;       // root to this node
  std::size_t label = 0;             // 1-based; 0 is the full population
};

struct GeneratorConfig {
  std::size_t ell = 1000;
  std::size_t min_size = 10;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 0;  // 0 selects 100 * ell

  std::size_t EffectiveMaxAttempts() const {
    return max_attempts == 0 ? 100 * ell : max_attempts;
  }
};

struct GenerationResult {
  std::vector<GeneratedSubpop> subpops;
  std::size_t attempts = 0;  // root-to-leaf paths started
  bool exhausted = false;    // stopped on max_attempts with fewer than ell
};

// Random recursive median splits. Each path starts at the root with fresh
// random category orders for the nominal covariates, then repeatedly picks a
// covariate uniformly at random, splits the current node at the median of
// its distinct values, and keeps one side with probability 1/2. Every node
// along the path with at least min_size members is emitted unless the same
// split sequence was emitted before. A path ends when the child is smaller
// than min_size or the split leaves the node unchanged.
GenerationResult GenerateSubpopulations(const Population& pop,
                                        const GeneratorConfig& cfg);

// Rebuilds the member set for a split path.
std::vector<std::size_t> Materialize(const Population& pop,
                                     std::span<const SplitStep> path);

// Label 0 (full population) followed by one view per generated subpop.
std::vector<SubpopulationView> MakeViews(
    const Population& pop, std::span<const GeneratedSubpop> subpops);

// Human-readable path, e.g. "age < 41.5 & region in {3, 1}". `names` may be
// empty, in which case covariates are called x0, x1, ...
std::string DescribePath(std::span<const SplitStep> path,
                         std::span<const std::string> names = {});

}  // namespace mccal

#endif  // MCCAL_CORE_SUBPOPS_HPP_
