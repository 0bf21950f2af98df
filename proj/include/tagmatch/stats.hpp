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
#include <span>
#include <utility>

#include "tagmatch/rng.hpp"

namespace tagmatch {

inline constexpr std::size_t kDefaultBootstrapResamples = 10'000;
inline constexpr double kDefaultAlpha = 0.05;

struct Interval {
  double lo;
  double hi;
};

/// Percentile bootstrap interval for the mean: the alpha/2 and 1 - alpha/2
/// quantiles (linear interpolation) of `resamples` resampled means.
Interval bootstrap_ci(std::span<const double> samples, std::size_t resamples, double alpha,
                      RngStream& rng);

/// One-sample Kolmogorov-Smirnov statistic against Uniform[0, 1].
double ks_uniform_statistic(std::span<const double> samples);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // population (divide by n)
  double min = 0.0;
  double max = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

Summary summarize(std::span<const double> samples, RngStream& rng,
                  std::size_t resamples = kDefaultBootstrapResamples,
                  double alpha = kDefaultAlpha);

/// Compensated (Neumaier) mean.
double mean_of(std::span<const double> samples);

}  // namespace tagmatch
