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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tagmatch/match_engine.hpp"
#include "tagmatch/rng.hpp"
#include "tagmatch/sampling.hpp"
#include "tagmatch/tag.hpp"

namespace tagmatch {

/// One draw of a geometric statistic.
///
/// Constraint samples: `target` is R, `first`/`second` are S1/S2 in discovery
/// order and `attempts`/`second_attempts` count the draws each took.
/// Detour samples: `target`, `first`, `second` are A, B, C, `legs` holds
/// d(A,B), d(B,C), d(A,C) and both attempt counts are 1.
struct GeometrySample {
  Tag target;
  Tag first;
  std::optional<Tag> second;
  double statistic = 0.0;
  std::uint64_t attempts = 0;
  std::uint64_t second_attempts = 0;
  std::array<double, 3> legs{};
};

struct GeometryOptions {
  std::uint64_t max_attempts = kDefaultMaxAttempts;
  /// Report d(S2, S1) instead of d(S1, S2).
  bool swap_pair_order = false;
  std::size_t jobs = 1;
};

// Sample i draws from rng.child(i); results are ordered by sample index and
// independent of `jobs`.

/// d(S1, S2) for S1, S2 both within `radius` of a random target R.
std::vector<GeometrySample> sample_similarity_constraint(const MatchEngine& engine, double radius,
                                                         std::size_t count, const RngStream& rng,
                                                         const GeometryOptions& options = {});

/// d(S1, S2) for S1 within `inner_radius` of R and S2 at least `outer_radius`
/// from R.
std::vector<GeometrySample> sample_dissimilarity_constraint(const MatchEngine& engine,
                                                            double inner_radius,
                                                            double outer_radius, std::size_t count,
                                                            const RngStream& rng,
                                                            const GeometryOptions& options = {});

/// d(A,B) + d(B,C) - d(A,C) for independent random A, B, C.
std::vector<GeometrySample> sample_detour_difference(const MatchEngine& engine, std::size_t count,
                                                     const RngStream& rng,
                                                     const GeometryOptions& options = {});

/// Detour statistic of a fixed triple.
double detour_difference(const MatchEngine& engine, const Tag& a, const Tag& b, const Tag& c);

}  // namespace tagmatch
