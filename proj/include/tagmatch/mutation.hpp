/*
 * Copyright 2026 The tagmatch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tagmatch/match_engine.hpp"
#include "tagmatch/rng.hpp"
#include "tagmatch/sampling.hpp"
#include "tagmatch/stats.hpp"
#include "tagmatch/tag.hpp"

namespace tagmatch {

/// Loose: target and secondary start poorly matched (d > 0.5).
/// Tight: they start closely matched (d < 0.01).
enum class Regime { Loose, Tight };

inline constexpr double kLooseThreshold = 0.5;
inline constexpr double kTightThreshold = 0.01;

std::string_view regime_name(Regime regime) noexcept;
std::optional<Regime> parse_regime(std::string_view name) noexcept;

/// Effect of one bit flip on the secondary tag of a (target, secondary) pair.
struct StepSample {
  Regime regime;
  Tag target;
  Tag secondary;  // before the flip
  std::size_t flipped_index;
  double pre_distance;   // d(target, secondary)
  double post_distance;  // d(target, secondary with flipped_index toggled)
  double perturbation;   // post_distance - pre_distance
};

struct MutationOptions {
  std::uint64_t max_attempts = kDefaultMaxAttempts;
  std::size_t jobs = 1;
};

/// Sample i draws from rng.child(i).
std::vector<StepSample> sample_single_step(const MatchEngine& engine, Regime regime,
                                           std::size_t count, const RngStream& rng,
                                           const MutationOptions& options = {});

/// Identical: the walker starts as a copy of the anchor.
/// SampledClose: the walker is rejection-sampled with d(anchor, walker) < 0.01.
enum class StartMode { Identical, SampledClose };

std::string_view start_mode_name(StartMode mode) noexcept;
std::optional<StartMode> parse_start_mode(std::string_view name) noexcept;

struct WalkTrace {
  StartMode start_mode;
  std::size_t walk_id = 0;
  /// d(anchor, walker) before any flip (index 0) and after each flip.
  std::vector<double> step_distances;
};

/// Applies `steps` uniformly random single-bit flips (positions may repeat)
/// to the walker, recording the distance to the fixed anchor after each.
WalkTrace mutational_walk(const MatchEngine& engine, std::size_t steps, StartMode start_mode,
                          RngStream& rng, std::uint64_t max_attempts = kDefaultMaxAttempts);

struct StepAggregate {
  std::size_t step = 0;
  double mean = 0.0;
  double sd = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct WalkEnsemble {
  std::vector<WalkTrace> traces;
  std::vector<StepAggregate> aggregates;  // one per step index, 0..steps
};

struct EnsembleOptions {
  std::uint64_t max_attempts = kDefaultMaxAttempts;
  std::size_t resamples = kDefaultBootstrapResamples;
  double alpha = kDefaultAlpha;
  std::size_t jobs = 1;
};

/// Walk i runs on rng.child(i); per-step bootstrap intervals use a separate
/// sub-stream, so the result depends only on `rng` and the arguments.
WalkEnsemble run_walk_ensemble(const MatchEngine& engine, std::size_t walks, std::size_t steps,
                               StartMode start_mode, const RngStream& rng,
                               const EnsembleOptions& options = {});

}  // namespace tagmatch
