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
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "tagmatch/rng.hpp"

namespace tagmatch {

/// Fixed-width bitstring tag.
///
/// Bit 0 is the least-significant position, so the tag reads as the unsigned
/// integer sum(bit_i * 2^i). Bits are stored in 64-bit words, least
/// significant word first; the unused high bits of the last word are always
/// zero. Tags of up to 64 bits live inline without heap allocation.
class Tag {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  /// All-zero tag of `width` bits. Throws std::invalid_argument for width 0.
  explicit Tag(std::size_t width);

  /// Bits listed from index 0 upward, e.g. {1, 0, 1, 0} reads as 5.
  static Tag from_bits(std::initializer_list<int> bits);
  static Tag from_bits(std::span<const std::uint8_t> bits);
  static Tag from_unsigned(std::uint64_t value, std::size_t width);
  /// Inverse of to_hex().
  static Tag from_hex(std::string_view hex, std::size_t width);

  std::size_t width() const noexcept { return width_; }
  bool bit(std::size_t index) const;
  void set_bit(std::size_t index, bool value);
  void flip(std::size_t index);

  Tag complement() const;
  std::size_t popcount() const noexcept;

  std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }
  /// Mask of the valid bits of the last word.
  Word last_word_mask() const noexcept;

  /// Packed little-endian bytes: byte 0 holds bits 0-7 with bit 0 as its
  /// LSB; a partial final byte is zero-padded in its high bits.
  std::vector<std::uint8_t> to_bytes() const;
  std::size_t byte_count() const noexcept { return (width_ + 7) / 8; }
  /// Writes byte_count() packed bytes to the front of `out`.
  void copy_bytes(std::span<std::uint8_t> out) const;
  /// Lowercase hex of to_bytes(), byte 0 first.
  std::string to_hex() const;

  friend bool operator==(const Tag& lhs, const Tag& rhs) = default;

 private:
  friend Tag new_random_tag(std::size_t width, RngStream& rng);

  std::size_t width_;
  boost::container::small_vector<Word, 1> words_;
};

Tag new_random_tag(std::size_t width, RngStream& rng);

/// Copy of `tag` with bit `index` toggled. Throws std::out_of_range.
Tag flip_bit(const Tag& tag, std::size_t index);

/// Toggles every bit independently with probability `rate`.
/// Throws std::invalid_argument unless 0 <= rate <= 1.
Tag mutate_per_bit(const Tag& tag, double rate, RngStream& rng);

/// Toggles every bit of every tag in `tags` independently with probability
/// `rate`, treating the tags as one concatenated bit sequence. Returns the
/// number of flipped bits. When `touched` is given, the index of the tag
/// hit by each flip is appended to it (repeats possible).
std::size_t mutate_per_bit_inplace(std::span<Tag> tags, double rate, RngStream& rng,
                                   std::vector<std::size_t>* touched = nullptr);

/// sum(bit_i * 2^i). Throws std::invalid_argument when width > 64.
std::uint64_t as_unsigned(const Tag& tag);

}  // namespace tagmatch
