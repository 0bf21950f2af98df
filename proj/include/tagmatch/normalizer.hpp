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
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagmatch/metrics.hpp"
#include "tagmatch/rng.hpp"

namespace tagmatch {

/// Malformed table file. what() names the offending field.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& field, const std::string& detail)
      : std::runtime_error("table format error in '" + field + "': " + detail), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnsupportedVersionError : public FormatError {
 public:
  explicit UnsupportedVersionError(int version)
      : FormatError("version", "unsupported table version " + std::to_string(version)),
        version_(version) {}
  int version() const noexcept { return version_; }

 private:
  int version_;
};

/// Empirical CDF of raw distances between random tag pairs.
///
/// `entries` holds the sorted sampled raw distances with the sentinels 0.0 at
/// the front and 1.0 at the back. Entry i carries percentile i / (L - 1).
class NormalizationTable {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr std::size_t kDefaultSampleCount = 10'000;

  /// Validates the invariants; throws std::invalid_argument on violation.
  NormalizationTable(MetricKind metric, std::size_t width, std::vector<double> entries,
                     std::uint64_t build_seed);

  MetricKind metric() const noexcept { return metric_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t sample_count() const noexcept { return entries_.size() - 2; }
  std::uint64_t build_seed() const noexcept { return build_seed_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  /// Percentile rank of `raw`: mean percentile of exact ties, otherwise linear
  /// interpolation between the neighbouring entries. Throws
  /// std::invalid_argument unless 0 <= raw <= 1.
  double normalize(double raw) const;

  friend bool operator==(const NormalizationTable& lhs, const NormalizationTable& rhs) {
    return lhs.metric_ == rhs.metric_ && lhs.width_ == rhs.width_ &&
           lhs.build_seed_ == rhs.build_seed_ && lhs.entries_ == rhs.entries_;
  }

 private:
  MetricKind metric_;
  std::size_t width_;
  std::uint64_t build_seed_;
  std::vector<double> entries_;
  // bucket_start_[b] = first entry index with value >= b / kBuckets, which
  // narrows each lookup to one bucket's worth of entries.
  static constexpr std::size_t kBuckets = 4096;
  std::vector<std::size_t> bucket_start_;
};

/// Draws `sample_count` random tag pairs from `rng` and tabulates their raw
/// distances. The table records rng.root_seed() as its build seed.
NormalizationTable build_table(MetricKind metric, std::size_t width, std::size_t sample_count,
                               RngStream& rng);

/// Stream used for the table of (metric, width) under `seed`, so that a
/// table is reproducible from its header alone.
RngStream table_stream(MetricKind metric, std::size_t width, std::uint64_t seed);

void write_table(const NormalizationTable& table, std::ostream& out);
NormalizationTable read_table(std::istream& in);

void save_table(const NormalizationTable& table, const std::filesystem::path& path);
NormalizationTable load_table(const std::filesystem::path& path);

}  // namespace tagmatch
