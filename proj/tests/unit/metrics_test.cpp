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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tagmatch/rng.hpp"
#include "tagmatch/tag.hpp"

namespace tagmatch {
namespace {

std::vector<Tag> all_tags(std::size_t width) {
  std::vector<Tag> tags;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
    tags.push_back(Tag::from_unsigned(v, width));
  }
  return tags;
}

// Reference streak scan: walk every start position and extend the run.
std::size_t brute_longest_run(const std::vector<bool>& agree, bool want) {
  std::size_t best = 0;
  for (std::size_t start = 0; start < agree.size(); ++start) {
    std::size_t len = 0;
    while (start + len < agree.size() && agree[start + len] == want) ++len;
    best = std::max(best, len);
  }
  return best;
}

double brute_streak(const Tag& t, const Tag& u) {
  const std::size_t n = t.width();
  std::vector<bool> agree(n);
  for (std::size_t i = 0; i < n; ++i) agree[i] = t.bit(i) == u.bit(i);
  const auto rarity = [n](std::size_t k) {
    return static_cast<double>(n - k + 1) / std::ldexp(1.0, static_cast<int>(k));
  };
  const double pm = rarity(brute_longest_run(agree, true));
  const double pn = rarity(brute_longest_run(agree, false));
  return std::clamp(pm / (pm + pn), 0.0, 1.0);
}

TEST(MetricNameTest, RoundTripsAllNames) {
  for (const MetricKind kind : kAllMetrics) {
    EXPECT_EQ(parse_metric(metric_name(kind)), kind);
  }
  EXPECT_EQ(metric_name(MetricKind::BidirectionalInteger), "integer-bi");
  EXPECT_FALSE(parse_metric("Hamming").has_value());
  EXPECT_FALSE(parse_metric("bogus").has_value());
}

TEST(HammingTest, Examples) {
  const Tag zeros(32);
  EXPECT_EQ(hamming_raw(zeros, zeros), 0.0);
  EXPECT_EQ(hamming_raw(zeros, zeros.complement()), 1.0);
  EXPECT_EQ(hamming_raw(zeros, Tag::from_unsigned(0xFF00, 32)), 0.25);
  EXPECT_THROW(hamming_raw(Tag(32), Tag(16)), std::invalid_argument);
}

TEST(HammingTest, TriangleInequalityHoldsExhaustivelyAtWidthFour) {
  const auto tags = all_tags(4);
  for (const Tag& a : tags) {
    for (const Tag& b : tags) {
      for (const Tag& c : tags) {
        EXPECT_LE(hamming_raw(a, c), hamming_raw(a, b) + hamming_raw(b, c));
      }
    }
  }
}

TEST(IntegerTest, Examples) {
  const Tag three = Tag::from_unsigned(3, 4);
  const Tag five = Tag::from_unsigned(5, 4);
  EXPECT_EQ(integer_raw(three, five), 0.125);
  EXPECT_EQ(integer_raw(five, three), 0.875);
  EXPECT_EQ(integer_raw(five, five), 0.0);
  EXPECT_THROW(integer_raw(Tag(4), Tag(5)), std::invalid_argument);
}

TEST(IntegerTest, ComplementLawExhaustivelyAtWidthFour) {
  const auto tags = all_tags(4);
  for (const Tag& t : tags) {
    for (const Tag& u : tags) {
      if (t == u) continue;
      EXPECT_EQ(integer_raw(t, u) + integer_raw(u, t), 1.0);
    }
  }
}

TEST(IntegerTest, MultiWordMatchesModularOracle) {
  // Width 96: compare the three-word path against a bit-serial subtraction.
  RngStream rng(21, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Tag t = new_random_tag(96, rng);
    const Tag u = new_random_tag(96, rng);
    int borrow = 0;
    double expected = 0.0;
    for (std::size_t i = 0; i < 96; ++i) {
      int diff = static_cast<int>(u.bit(i)) - static_cast<int>(t.bit(i)) - borrow;
      borrow = diff < 0 ? 1 : 0;
      if (diff < 0) diff += 2;
      if (diff) expected += std::ldexp(1.0, static_cast<int>(i) - 96);
    }
    EXPECT_DOUBLE_EQ(integer_raw(t, u), expected);
  }
}

TEST(IntegerBiTest, Examples) {
  EXPECT_EQ(integer_bi_raw(Tag::from_unsigned(5, 4), Tag::from_unsigned(3, 4)), 0.125);
  EXPECT_EQ(integer_bi_raw(Tag(32), Tag::from_unsigned(std::uint64_t{1} << 31, 32)), 0.5);
  EXPECT_EQ(integer_bi_raw(Tag::from_unsigned(0xFFFFFFFFu, 32), Tag(32)), std::ldexp(1.0, -32));
}

TEST(IntegerBiTest, IsMinOfBothDirections) {
  const auto tags = all_tags(4);
  for (const Tag& t : tags) {
    for (const Tag& u : tags) {
      const double bi = integer_bi_raw(t, u);
      EXPECT_EQ(bi, std::min(integer_raw(t, u), integer_raw(u, t)));
      EXPECT_EQ(bi, integer_bi_raw(u, t));
      EXPECT_LE(bi, 0.5);
    }
  }
}

TEST(StreakTest, RunLengthExamples) {
  const Tag t = Tag::from_bits({1, 1, 0, 0});
  const Tag u = Tag::from_bits({1, 0, 1, 0});
  EXPECT_EQ(longest_match_streak(t, u), 1u);
  EXPECT_EQ(longest_mismatch_streak(t, u), 2u);

  const Tag zeros(32);
  EXPECT_EQ(longest_match_streak(zeros, zeros), 32u);
  EXPECT_EQ(longest_match_streak(zeros, zeros.complement()), 0u);
  EXPECT_EQ(longest_mismatch_streak(zeros, zeros), 0u);
  EXPECT_EQ(longest_mismatch_streak(zeros, zeros.complement()), 32u);
}

TEST(StreakTest, RarityExamples) {
  EXPECT_EQ(streak_rarity(0, 32), 33.0);
  EXPECT_EQ(streak_rarity(32, 32), std::ldexp(1.0, -32));
  EXPECT_EQ(streak_rarity(1, 4), 2.0);
  EXPECT_THROW(streak_rarity(5, 4), std::invalid_argument);
}

TEST(StreakTest, DistanceExamples) {
  const Tag t(4);
  EXPECT_NEAR(streak_raw(t, t), 1.0 / 81.0, 1e-15);
  EXPECT_NEAR(streak_raw(t, t.complement()), 80.0 / 81.0, 1e-15);
  EXPECT_NEAR(streak_raw(Tag::from_bits({1, 1, 0, 0}), Tag::from_bits({1, 0, 1, 0})),
              2.0 / 2.75, 1e-15);
}

TEST(StreakTest, MatchesBruteForceOnAllWidthEightPairs) {
  const auto tags = all_tags(8);
  for (const Tag& t : tags) {
    for (const Tag& u : tags) {
      ASSERT_EQ(streak_raw(t, u), brute_streak(t, u));
    }
  }
}

TEST(StreakTest, MultiWordRunsCrossWordBoundaries) {
  RngStream rng(4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const Tag t = new_random_tag(150, rng);
    Tag u = new_random_tag(150, rng);
    // Force a long run straddling bit 64.
    for (std::size_t i = 50; i < 80; ++i) u.set_bit(i, t.bit(i) != (trial % 2 == 0));
    EXPECT_EQ(streak_raw(t, u), brute_streak(t, u));
  }
}

TEST(HashTest, FrozenValues) {
  // Reference values computed with an independent SHA-1 implementation.
  struct Case {
    std::uint64_t t, u;
    std::size_t width;
    double expected;
  };
  const Case cases[] = {
      {0, 0, 32, 0.023410817450974286},
      {1, 0, 32, 0.2408541968213671},
      {0, 1, 32, 0.9361894221072113},
      {0xDEADBEEF, 0x12345678, 32, 0.1965229646368858},
      {5, 3, 4, 0.7017253756066419},
      {3, 5, 4, 0.05972101870355817},
      {0x0123456789ABCDEF, 0xFEDCBA9876543210, 64, 0.632420118893883},
      {0x1FF, 0x0AB, 9, 0.37865413481284627},
  };
  for (const Case& c : cases) {
    EXPECT_EQ(hash_raw(Tag::from_unsigned(c.t, c.width), Tag::from_unsigned(c.u, c.width)),
              c.expected)
        << c.t << " " << c.u << " width " << c.width;
  }
}

TEST(HashTest, DeterministicAndBelowOne) {
  RngStream rng(6, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Tag t = new_random_tag(32, rng);
    const Tag u = new_random_tag(32, rng);
    const double d = hash_raw(t, u);
    EXPECT_EQ(d, hash_raw(t, u));
    EXPECT_GE(d, 0.0);
    EXPECT_LT(d, 1.0);
  }
}

TEST(RawDistanceTest, RangeAndIdentityExhaustivelyAtWidthFour) {
  const auto tags = all_tags(4);
  for (const MetricKind kind : kAllMetrics) {
    for (const Tag& t : tags) {
      for (const Tag& u : tags) {
        const double d = raw_distance(kind, t, u);
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, 1.0);
        if (is_commutative(kind)) EXPECT_EQ(d, raw_distance(kind, u, t));
      }
      if (kind == MetricKind::Hamming || kind == MetricKind::Integer ||
          kind == MetricKind::BidirectionalInteger) {
        EXPECT_EQ(raw_distance(kind, t, t), 0.0);
      }
    }
    EXPECT_THROW(raw_distance(kind, Tag(4), Tag(8)), std::invalid_argument);
  }
}

TEST(RawDistanceTest, StreakIdentityIsItsMinimum) {
  // Streak never reaches exactly 0 (p'(n) > 0), but t = u is the global
  // minimum over all partners.
  const auto tags = all_tags(6);
  for (const Tag& t : tags) {
    const double self = streak_raw(t, t);
    for (const Tag& u : tags) EXPECT_LE(self, streak_raw(t, u));
  }
}

}  // namespace
}  // namespace tagmatch
