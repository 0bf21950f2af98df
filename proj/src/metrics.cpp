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

#include "tagmatch/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tagmatch/sha1.hpp"

namespace tagmatch {

namespace {

void require_same_width(const Tag& t, const Tag& u) {
  if (t.width() != u.width()) {
    throw std::invalid_argument("tag width mismatch: " + std::to_string(t.width()) + " vs " +
                                std::to_string(u.width()));
  }
}

// Longest run of set bits among the low `width` bits of the concatenated words.
std::size_t longest_run_of_ones(std::span<const Tag::Word> words, std::size_t width) {
  if (width <= Tag::kWordBits) {
    Tag::Word x = words[0];
    std::size_t run = 0;
    while (x != 0) {
      x &= x << 1;
      ++run;
    }
    return run;
  }
  std::size_t best = 0;
  std::size_t current = 0;
  for (std::size_t i = 0; i < width; ++i) {
    if ((words[i / Tag::kWordBits] >> (i % Tag::kWordBits)) & 1U) {
      best = std::max(best, ++current);
    } else {
      current = 0;
    }
  }
  return best;
}

template <typename Op>
std::size_t streak_of(const Tag& t, const Tag& u, Op combine) {
  require_same_width(t, u);
  const auto tw = t.words();
  const auto uw = u.words();
  boost::container::small_vector<Tag::Word, 1> x(tw.size());
  for (std::size_t i = 0; i < tw.size(); ++i) x[i] = combine(tw[i], uw[i]);
  x.back() &= t.last_word_mask();
  return longest_run_of_ones({x.data(), x.size()}, t.width());
}

}  // namespace

std::string_view metric_name(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::Hamming:
      return "hamming";
    case MetricKind::Hash:
      return "hash";
    case MetricKind::Integer:
      return "integer";
    case MetricKind::BidirectionalInteger:
      return "integer-bi";
    case MetricKind::Streak:
      return "streak";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) noexcept {
  for (const MetricKind kind : kAllMetrics) {
    if (metric_name(kind) == name) return kind;
  }
  return std::nullopt;
}

double hamming_raw(const Tag& t, const Tag& u) {
  require_same_width(t, u);
  const auto tw = t.words();
  const auto uw = u.words();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < tw.size(); ++i) {
    mismatches += static_cast<std::size_t>(std::popcount(tw[i] ^ uw[i]));
  }
  return static_cast<double>(mismatches) / static_cast<double>(t.width());
}

double integer_raw(const Tag& t, const Tag& u) {
  require_same_width(t, u);
  const auto tw = t.words();
  const auto uw = u.words();
  const int width = static_cast<int>(t.width());
  if (tw.size() == 1) {
    const Tag::Word diff = (uw[0] - tw[0]) & t.last_word_mask();
    return std::ldexp(static_cast<double>(diff), -width);
  }
  // Multi-word modular subtraction u - t, least significant word first.
  double result = 0.0;
  Tag::Word borrow = 0;
  for (std::size_t i = 0; i < tw.size(); ++i) {
    Tag::Word diff = uw[i] - tw[i] - borrow;
    borrow = (uw[i] < tw[i] || (uw[i] == tw[i] && borrow)) ? 1 : 0;
    if (i + 1 == tw.size()) diff &= t.last_word_mask();
    result += std::ldexp(static_cast<double>(diff), static_cast<int>(64 * i) - width);
  }
  return std::min(result, 1.0);
}

double integer_bi_raw(const Tag& t, const Tag& u) {
  return std::min(integer_raw(t, u), integer_raw(u, t));
}

std::size_t longest_match_streak(const Tag& t, const Tag& u) {
  return streak_of(t, u, [](Tag::Word a, Tag::Word b) { return ~(a ^ b); });
}

std::size_t longest_mismatch_streak(const Tag& t, const Tag& u) {
  return streak_of(t, u, [](Tag::Word a, Tag::Word b) { return a ^ b; });
}

double streak_rarity(std::size_t k, std::size_t width) {
  if (k > width) {
    throw std::invalid_argument("streak length " + std::to_string(k) + " exceeds width " +
                                std::to_string(width));
  }
  return std::ldexp(static_cast<double>(width - k + 1), -static_cast<int>(k));
}

double streak_raw(const Tag& t, const Tag& u) {
  const std::size_t width = t.width();
  const double p_match = streak_rarity(longest_match_streak(t, u), width);
  const double p_mismatch = streak_rarity(longest_mismatch_streak(t, u), width);
  return std::clamp(p_match / (p_match + p_mismatch), 0.0, 1.0);
}

double hash_raw(const Tag& t, const Tag& u) {
  require_same_width(t, u);
  const std::size_t half = t.byte_count();
  boost::container::small_vector<std::uint8_t, 16> packed(2 * half);
  const std::span<std::uint8_t> buffer(packed.data(), packed.size());
  t.copy_bytes(buffer.first(half));
  u.copy_bytes(buffer.subspan(half));
  const Sha1Digest digest = sha1(buffer);
  std::uint64_t k = 0;
  for (int i = 0; i < 8; ++i) k = (k << 8) | digest[i];
  return static_cast<double>(k >> 11) * 0x1.0p-53;
}

double raw_distance(MetricKind kind, const Tag& t, const Tag& u) {
  switch (kind) {
    case MetricKind::Hamming:
      return hamming_raw(t, u);
    case MetricKind::Hash:
      return hash_raw(t, u);
    case MetricKind::Integer:
      return integer_raw(t, u);
    case MetricKind::BidirectionalInteger:
      return integer_bi_raw(t, u);
    case MetricKind::Streak:
      return streak_raw(t, u);
  }
  throw std::invalid_argument("unknown metric kind");
}

}  // namespace tagmatch
