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

#include "tagmatch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tagmatch {

namespace {

class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Type-7 quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(position));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(below);
  return sorted[below] + fraction * (sorted[above] - sorted[below]);
}

void require_samples(std::span<const double> samples, const char* what) {
  if (samples.empty()) throw std::invalid_argument(std::string(what) + " needs samples");
}

}  // namespace

double mean_of(std::span<const double> samples) {
  require_samples(samples, "mean");
  CompensatedSum sum;
  for (const double x : samples) sum.add(x);
  return sum.value() / static_cast<double>(samples.size());
}

Interval bootstrap_ci(std::span<const double> samples, std::size_t resamples, double alpha,
                      RngStream& rng) {
  require_samples(samples, "bootstrap_ci");
  if (resamples == 0) throw std::invalid_argument("bootstrap_ci needs resamples >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");

  const std::size_t n = samples.size();
  std::vector<double> means(resamples);
  for (double& m : means) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += samples[rng.below(n)];
    m = total / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  // Clamp away summation rounding so the interval stays inside the data range.
  const auto [lowest, highest] = std::minmax_element(samples.begin(), samples.end());
  const auto clamp = [&](double x) { return std::clamp(x, *lowest, *highest); };
  return {clamp(quantile_sorted(means, alpha / 2)), clamp(quantile_sorted(means, 1 - alpha / 2))};
}

double ks_uniform_statistic(std::span<const double> samples) {
  require_samples(samples, "ks_uniform_statistic");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (const double x : sorted) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("ks_uniform_statistic expects values in [0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto rank = static_cast<double>(i);
    d = std::max({d, (rank + 1) / n - sorted[i], sorted[i] - rank / n});
  }
  return d;
}

Summary summarize(std::span<const double> samples, RngStream& rng, std::size_t resamples,
                  double alpha) {
  require_samples(samples, "summarize");
  Summary s;
  s.count = samples.size();
  s.mean = mean_of(samples);
  CompensatedSum squares;
  for (const double x : samples) squares.add((x - s.mean) * (x - s.mean));
  s.sd = std::sqrt(squares.value() / static_cast<double>(samples.size()));
  const auto [lowest, highest] = std::minmax_element(samples.begin(), samples.end());
  s.min = *lowest;
  s.max = *highest;
  // Rounding in the compensated mean can step a hair outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  const Interval ci = bootstrap_ci(samples, resamples, alpha, rng);
  s.ci_lo = ci.lo;
  s.ci_hi = ci.hi;
  return s;
}

}  // namespace tagmatch
