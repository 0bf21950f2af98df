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
#include <optional>
#include <string_view>

#include "tagmatch/tag.hpp"

namespace tagmatch {

enum class MetricKind { Hamming, Hash, Integer, BidirectionalInteger, Streak };

inline constexpr std::array<MetricKind, 5> kAllMetrics{
    MetricKind::Hamming, MetricKind::Hash, MetricKind::Integer,
    MetricKind::BidirectionalInteger, MetricKind::Streak};

/// Canonical lowercase name: hamming, hash, integer, integer-bi, streak.
std::string_view metric_name(MetricKind kind) noexcept;
std::optional<MetricKind> parse_metric(std::string_view name) noexcept;

/// Whether d(t, u) = d(u, t) for every pair.
constexpr bool is_commutative(MetricKind kind) noexcept {
  return kind != MetricKind::Integer && kind != MetricKind::Hash;
}

// Every raw metric maps a same-width tag pair to [0, 1] and throws
// std::invalid_argument on a width mismatch.

/// Fraction of mismatching bit positions.
double hamming_raw(const Tag& t, const Tag& u);

/// Distance counting upward from t until u is reached, wrapping at 2^n:
/// ((f(u) - f(t)) mod 2^n) / 2^n. Not commutative.
double integer_raw(const Tag& t, const Tag& u);

/// min(integer_raw(t, u), integer_raw(u, t)); never exceeds 0.5.
double integer_bi_raw(const Tag& t, const Tag& u);

std::size_t longest_match_streak(const Tag& t, const Tag& u);
std::size_t longest_mismatch_streak(const Tag& t, const Tag& u);

/// (width - k + 1) / 2^k, unclamped. Throws std::invalid_argument if k > width.
double streak_rarity(std::size_t k, std::size_t width);

/// clamp(p(m) / (p(m) + p(n)), 0, 1) for longest matching streak m and longest
/// mismatching streak n, with p = streak_rarity. Identical tags sit near 0,
/// complementary tags near 1.
double streak_raw(const Tag& t, const Tag& u);

/// SHA-1 over the packed bytes of t followed by those of u. The first eight
/// digest bytes, read big-endian, give k; the result is the top 53 bits of k
/// scaled by 2^-53, i.e. floor(k / 2^11) / 2^53, which lies in [0, 1).
double hash_raw(const Tag& t, const Tag& u);

double raw_distance(MetricKind kind, const Tag& t, const Tag& u);

}  // namespace tagmatch
