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

#include "tagmatch/match_engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/container/small_vector.hpp>

namespace tagmatch {

MatchEngine::MatchEngine(MetricKind metric, std::size_t width) : metric_(metric), width_(width) {
  if (width == 0) throw std::invalid_argument("engine width must be positive");
}

MatchEngine::MatchEngine(MetricKind metric, std::size_t width,
                         std::shared_ptr<const NormalizationTable> table)
    : MatchEngine(metric, width) {
  if (!table) throw std::invalid_argument("normalized engine needs a table");
  if (table->metric() != metric || table->width() != width) {
    throw std::invalid_argument("table is for " + std::string(metric_name(table->metric())) +
                                "/" + std::to_string(table->width()) + ", engine wants " +
                                std::string(metric_name(metric)) + "/" + std::to_string(width));
  }
  table_ = std::move(table);
}

MatchEngine::MatchEngine(MetricKind metric, std::size_t width, NormalizationTable table)
    : MatchEngine(metric, width, std::make_shared<const NormalizationTable>(std::move(table))) {}

MatchEngine MatchEngine::raw(MetricKind metric, std::size_t width) {
  return MatchEngine(metric, width);
}

void MatchEngine::require_width(const Tag& tag) const {
  if (tag.width() != width_) {
    throw std::invalid_argument("engine expects " + std::to_string(width_) + "-bit tags, got " +
                                std::to_string(tag.width()));
  }
}

double MatchEngine::distance(const Tag& query, const Tag& operand) const {
  require_width(query);
  require_width(operand);
  const double raw = raw_distance(metric_, query, operand);
  return table_ ? table_->normalize(raw) : raw;
}

void select_best_k(std::span<const double> distances, std::size_t k,
                   std::vector<std::pair<double, std::size_t>>& scratch,
                   std::span<std::size_t> out) {
  if (distances.empty()) throw std::invalid_argument("best_k_matches needs operands");
  if (k == 0 || k > distances.size()) {
    throw std::invalid_argument("k must lie in [1, " + std::to_string(distances.size()) + "]");
  }
  if (out.size() < k) throw std::invalid_argument("output span shorter than k");
  scratch.clear();
  for (std::size_t i = 0; i < distances.size(); ++i) scratch.emplace_back(distances[i], i);
  // Pairs compare by distance, then by index.
  if (k == 1) {
    std::iter_swap(scratch.begin(), std::min_element(scratch.begin(), scratch.end()));
  } else {
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                      scratch.end());
  }
  for (std::size_t i = 0; i < k; ++i) out[i] = scratch[i].second;
}

void best_k_matches_into(const MatchEngine& engine, const Tag& query,
                         std::span<const Tag> operands, std::size_t k,
                         std::vector<std::pair<double, std::size_t>>& scratch,
                         std::span<std::size_t> out) {
  boost::container::small_vector<double, 32> distances;
  distances.reserve(operands.size());
  for (const Tag& operand : operands) distances.push_back(engine.distance(query, operand));
  select_best_k({distances.data(), distances.size()}, k, scratch, out);
}

std::vector<std::size_t> best_k_matches(const MatchEngine& engine, const Tag& query,
                                        std::span<const Tag> operands, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> scratch;
  scratch.reserve(operands.size());
  std::vector<std::size_t> best(k);
  best_k_matches_into(engine, query, operands, k, scratch, best);
  return best;
}

}  // namespace tagmatch
