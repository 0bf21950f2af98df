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

#include <cstdint>
#include <stdexcept>
#include <string>

#include "tagmatch/match_engine.hpp"
#include "tagmatch/rng.hpp"
#include "tagmatch/tag.hpp"

namespace tagmatch {

inline constexpr std::uint64_t kDefaultMaxAttempts = 10'000'000;

/// A rejection sampler ran out of draws for one constrained tag.
class SamplingBudgetExceeded : public std::runtime_error {
 public:
  SamplingBudgetExceeded(MetricKind metric, const std::string& constraint,
                         std::uint64_t max_attempts)
      : std::runtime_error("sampling budget of " + std::to_string(max_attempts) +
                           " draws exceeded for metric " + std::string(metric_name(metric)) +
                           " under constraint " + constraint),
        metric_(metric),
        constraint_(constraint) {}

  MetricKind metric() const noexcept { return metric_; }
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  MetricKind metric_;
  std::string constraint_;
};

struct SampledTag {
  Tag tag;
  double distance;        // engine.distance(reference, tag)
  std::uint64_t attempts;  // draws consumed, including the accepted one
};

/// Draws random tags until accept(distance(reference, candidate)) holds.
/// `constraint` describes the predicate for error messages, e.g. "d <= 0.01".
template <typename Accept>
SampledTag rejection_sample(const MatchEngine& engine, const Tag& reference, Accept&& accept,
                            const std::string& constraint, RngStream& rng,
                            std::uint64_t max_attempts) {
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    Tag candidate = new_random_tag(engine.width(), rng);
    const double d = engine.distance(reference, candidate);
    if (accept(d)) return {std::move(candidate), d, attempt};
  }
  throw SamplingBudgetExceeded(engine.metric(), constraint, max_attempts);
}

}  // namespace tagmatch
