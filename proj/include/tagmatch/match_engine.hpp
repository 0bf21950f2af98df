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
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tagmatch/metrics.hpp"
#include "tagmatch/normalizer.hpp"
#include "tagmatch/tag.hpp"

namespace tagmatch {

/// Distance oracle shared by every analysis: a metric, a tag width and the
/// normalization table for that pair. Cheap to copy; the table is shared.
///
/// An engine built with raw() skips normalization and reports raw distances.
class MatchEngine {
 public:
  /// Throws std::invalid_argument if the table's metric or width disagree.
  MatchEngine(MetricKind metric, std::size_t width,
              std::shared_ptr<const NormalizationTable> table);
  MatchEngine(MetricKind metric, std::size_t width, NormalizationTable table);

  static MatchEngine raw(MetricKind metric, std::size_t width);

  MetricKind metric() const noexcept { return metric_; }
  std::size_t width() const noexcept { return width_; }
  bool normalized() const noexcept { return table_ != nullptr; }
  const NormalizationTable* table() const noexcept { return table_.get(); }

  /// Normalized distance from `query` to `operand`; argument order matters
  /// for the integer and hash metrics.
  double distance(const Tag& query, const Tag& operand) const;

 private:
  MatchEngine(MetricKind metric, std::size_t width);

  void require_width(const Tag& tag) const;

  MetricKind metric_;
  std::size_t width_;
  std::shared_ptr<const NormalizationTable> table_;
};

/// Indices of the `k` operands closest to `query`, ordered by ascending
/// distance with ties going to the lower index.
/// Throws std::invalid_argument for empty operands or k outside [1, size].
std::vector<std::size_t> best_k_matches(const MatchEngine& engine, const Tag& query,
                                        std::span<const Tag> operands, std::size_t k);

/// Writes the indices of the k smallest `distances` (ties to the lower
/// index), ordered by ascending distance, to the front of `out`.
void select_best_k(std::span<const double> distances, std::size_t k,
                   std::vector<std::pair<double, std::size_t>>& scratch,
                   std::span<std::size_t> out);

/// Allocation-free form of best_k_matches for hot loops: `scratch` is reused
/// between calls and the k winners are written to the front of `out`, which
/// must hold at least k elements.
void best_k_matches_into(const MatchEngine& engine, const Tag& query,
                         std::span<const Tag> operands, std::size_t k,
                         std::vector<std::pair<double, std::size_t>>& scratch,
                         std::span<std::size_t> out);

}  // namespace tagmatch
