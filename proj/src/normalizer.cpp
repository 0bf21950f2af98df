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

#include "tagmatch/normalizer.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "tagmatch/format.hpp"
#include "tagmatch/tag.hpp"

namespace tagmatch {

NormalizationTable::NormalizationTable(MetricKind metric, std::size_t width,
                                       std::vector<double> entries, std::uint64_t build_seed)
    : metric_(metric), width_(width), build_seed_(build_seed), entries_(std::move(entries)) {
  if (width_ == 0) throw std::invalid_argument("table width must be positive");
  if (entries_.size() < 3) throw std::invalid_argument("table needs at least one sample");
  if (entries_.front() != 0.0 || entries_.back() != 1.0) {
    throw std::invalid_argument("table must start at 0.0 and end at 1.0");
  }
  if (!std::is_sorted(entries_.begin(), entries_.end())) {
    throw std::invalid_argument("table entries must be sorted");
  }
  bucket_start_.resize(kBuckets + 2);
  for (std::size_t b = 0; b <= kBuckets; ++b) {
    const double edge = static_cast<double>(b) / static_cast<double>(kBuckets);
    bucket_start_[b] = static_cast<std::size_t>(
        std::lower_bound(entries_.begin(), entries_.end(), edge) - entries_.begin());
  }
  bucket_start_[kBuckets + 1] = entries_.size();
}

double NormalizationTable::normalize(double raw) const {
  if (!(raw >= 0.0 && raw <= 1.0)) {
    throw std::invalid_argument("raw distance must lie in [0, 1], got " + std::to_string(raw));
  }
  const double last = static_cast<double>(entries_.size() - 1);
  // raw lies in [b / kBuckets, (b + 1) / kBuckets), so every entry equal to
  // it sits between the starts of buckets b and b + 1.
  const auto bucket = static_cast<std::size_t>(raw * static_cast<double>(kBuckets));
  const auto [lo, hi] =
      std::equal_range(entries_.begin() + static_cast<std::ptrdiff_t>(bucket_start_[bucket]),
                       entries_.begin() + static_cast<std::ptrdiff_t>(bucket_start_[bucket + 1]),
                       raw);
  if (lo != hi) {
    // Mean of the tied indices [lo, hi).
    const auto first = static_cast<double>(lo - entries_.begin());
    const auto final = static_cast<double>(hi - entries_.begin() - 1);
    return 0.5 * (first + final) / last;
  }
  // raw is strictly between entries[above - 1] and entries[above].
  const auto above = static_cast<std::size_t>(lo - entries_.begin());
  const double a = entries_[above - 1];
  const double b = entries_[above];
  const double fraction = (raw - a) / (b - a);
  return (static_cast<double>(above - 1) + fraction) / last;
}

NormalizationTable build_table(MetricKind metric, std::size_t width, std::size_t sample_count,
                               RngStream& rng) {
  if (sample_count == 0) throw std::invalid_argument("sample_count must be positive");
  std::vector<double> entries;
  entries.reserve(sample_count + 2);
  entries.push_back(0.0);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Tag t = new_random_tag(width, rng);
    const Tag u = new_random_tag(width, rng);
    entries.push_back(raw_distance(metric, t, u));
  }
  std::sort(entries.begin() + 1, entries.end());
  entries.push_back(1.0);
  return NormalizationTable(metric, width, std::move(entries), rng.root_seed());
}

RngStream table_stream(MetricKind metric, std::size_t width, std::uint64_t seed) {
  return derive_stream(seed, stream_key("normalize/" + std::string(metric_name(metric)) + "/" +
                                        std::to_string(width)));
}

void write_table(const NormalizationTable& table, std::ostream& out) {
  out << "version " << NormalizationTable::kFormatVersion << '\n'
      << "metric " << metric_name(table.metric()) << '\n'
      << "width " << table.width() << '\n'
      << "sample_count " << table.sample_count() << '\n'
      << "build_seed " << table.build_seed() << '\n';
  for (const double value : table.entries()) out << format_double(value) << '\n';
}

namespace {

std::string_view header_value(std::istream& in, std::string_view key, std::string& line) {
  if (!std::getline(in, line)) throw FormatError(std::string(key), "missing header line");
  const std::string_view view(line);
  if (view.size() <= key.size() || view.substr(0, key.size()) != key ||
      view[key.size()] != ' ') {
    throw FormatError(std::string(key), "expected '" + std::string(key) + " <value>', got '" +
                                            line + "'");
  }
  return view.substr(key.size() + 1);
}

template <typename Int>
Int parse_int_field(std::string_view text, std::string_view key) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError(std::string(key), "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

NormalizationTable read_table(std::istream& in) {
  std::string line;
  const int version = parse_int_field<int>(header_value(in, "version", line), "version");
  if (version != NormalizationTable::kFormatVersion) throw UnsupportedVersionError(version);

  const std::string metric_text(header_value(in, "metric", line));
  const auto metric = parse_metric(metric_text);
  if (!metric) throw FormatError("metric", "unknown metric '" + metric_text + "'");

  const auto width = parse_int_field<std::size_t>(header_value(in, "width", line), "width");
  if (width == 0) throw FormatError("width", "must be positive");
  const auto sample_count =
      parse_int_field<std::size_t>(header_value(in, "sample_count", line), "sample_count");
  if (sample_count == 0) throw FormatError("sample_count", "must be positive");
  const auto build_seed =
      parse_int_field<std::uint64_t>(header_value(in, "build_seed", line), "build_seed");

  std::vector<double> entries;
  entries.reserve(sample_count + 2);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw FormatError("entries", "line " + std::to_string(entries.size() + 1) +
                                       " is not a number: '" + line + "'");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw FormatError("entries", "value " + line + " outside [0, 1]");
    }
    if (!entries.empty() && value < entries.back()) {
      throw FormatError("entries", "values are not sorted at line " +
                                       std::to_string(entries.size() + 1));
    }
    entries.push_back(value);
  }
  if (entries.size() != sample_count + 2) {
    throw FormatError("entries", "expected " + std::to_string(sample_count + 2) +
                                     " values, found " + std::to_string(entries.size()));
  }
  if (entries.front() != 0.0) throw FormatError("entries", "first value must be 0.0");
  if (entries.back() != 1.0) throw FormatError("entries", "last value must be 1.0");
  return NormalizationTable(*metric, width, std::move(entries), build_seed);
}

void save_table(const NormalizationTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_table(table, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

NormalizationTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_table(in);
}

}  // namespace tagmatch
