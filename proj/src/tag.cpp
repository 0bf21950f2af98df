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

#include "tagmatch/tag.hpp"

#include <bit>
#include <limits>
#include <random>
#include <stdexcept>

namespace tagmatch {

namespace {

std::size_t word_count(std::size_t width) { return (width + Tag::kWordBits - 1) / Tag::kWordBits; }

int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

Tag::Tag(std::size_t width) : width_(width) {
  if (width == 0) throw std::invalid_argument("tag width must be positive");
  words_.assign(word_count(width), Word{0});
}

Tag Tag::from_bits(std::initializer_list<int> bits) {
  Tag tag(bits.size());
  std::size_t i = 0;
  for (const int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("tag bits must be 0 or 1");
    tag.set_bit(i++, b == 1);
  }
  return tag;
}

Tag Tag::from_bits(std::span<const std::uint8_t> bits) {
  Tag tag(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw std::invalid_argument("tag bits must be 0 or 1");
    tag.set_bit(i, bits[i] == 1);
  }
  return tag;
}

Tag Tag::from_unsigned(std::uint64_t value, std::size_t width) {
  Tag tag(width);
  if (width < kWordBits && (value >> width) != 0) {
    throw std::invalid_argument("value does not fit in " + std::to_string(width) + " bits");
  }
  tag.words_[0] = value;
  return tag;
}

Tag Tag::from_hex(std::string_view hex, std::size_t width) {
  Tag tag(width);
  const std::size_t bytes = (width + 7) / 8;
  if (hex.size() != 2 * bytes) {
    throw std::invalid_argument("hex tag of width " + std::to_string(width) + " needs " +
                                std::to_string(2 * bytes) + " digits");
  }
  for (std::size_t byte = 0; byte < bytes; ++byte) {
    const int hi = hex_value(hex[2 * byte]);
    const int lo = hex_value(hex[2 * byte + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit in tag");
    const auto value = static_cast<Word>((hi << 4) | lo);
    tag.words_[byte / 8] |= value << (8 * (byte % 8));
  }
  if ((tag.words_.back() & ~tag.last_word_mask()) != 0) {
    throw std::invalid_argument("hex tag sets bits beyond its width");
  }
  return tag;
}

bool Tag::bit(std::size_t index) const {
  if (index >= width_) throw std::out_of_range("bit index out of range");
  return ((words_[index / kWordBits] >> (index % kWordBits)) & 1U) != 0;
}

void Tag::set_bit(std::size_t index, bool value) {
  if (index >= width_) throw std::out_of_range("bit index out of range");
  const Word mask = Word{1} << (index % kWordBits);
  if (value) {
    words_[index / kWordBits] |= mask;
  } else {
    words_[index / kWordBits] &= ~mask;
  }
}

void Tag::flip(std::size_t index) {
  if (index >= width_) throw std::out_of_range("bit index out of range");
  words_[index / kWordBits] ^= Word{1} << (index % kWordBits);
}

Tag Tag::complement() const {
  Tag out(*this);
  for (auto& w : out.words_) w = ~w;
  out.words_.back() &= last_word_mask();
  return out;
}

std::size_t Tag::popcount() const noexcept {
  std::size_t total = 0;
  for (const Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

Tag::Word Tag::last_word_mask() const noexcept {
  const std::size_t rem = width_ % kWordBits;
  return rem == 0 ? ~Word{0} : (Word{1} << rem) - 1;
}

void Tag::copy_bytes(std::span<std::uint8_t> out) const {
  const std::size_t bytes = byte_count();
  if (out.size() < bytes) throw std::invalid_argument("byte buffer too small for tag");
  for (std::size_t byte = 0; byte < bytes; ++byte) {
    out[byte] = static_cast<std::uint8_t>(words_[byte / 8] >> (8 * (byte % 8)));
  }
}

std::vector<std::uint8_t> Tag::to_bytes() const {
  std::vector<std::uint8_t> out(byte_count());
  copy_bytes(out);
  return out;
}

std::string Tag::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (const std::uint8_t byte : to_bytes()) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

Tag new_random_tag(std::size_t width, RngStream& rng) {
  Tag tag(width);
  for (auto& w : tag.words_) w = rng();
  tag.words_.back() &= tag.last_word_mask();
  return tag;
}

Tag flip_bit(const Tag& tag, std::size_t index) {
  Tag out(tag);
  out.flip(index);
  return out;
}

std::size_t mutate_per_bit_inplace(std::span<Tag> tags, double rate, RngStream& rng,
                                   std::vector<std::size_t>* touched) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("mutation rate must lie in [0, 1]");
  }
  std::size_t total_bits = 0;
  for (const Tag& t : tags) total_bits += t.width();
  if (rate == 0.0 || total_bits == 0) return 0;
  if (rate == 1.0) {
    for (std::size_t i = 0; i < tags.size(); ++i) {
      tags[i] = tags[i].complement();
      if (touched) touched->push_back(i);
    }
    return total_bits;
  }
  // Gaps between successive flipped positions are geometric, which is
  // equivalent to one Bernoulli(rate) trial per bit.
  std::geometric_distribution<std::uint64_t> gap(rate);
  std::size_t flipped = 0;
  std::size_t tag_index = 0;
  std::size_t tag_offset = 0;  // global position of tags[tag_index] bit 0
  std::uint64_t position = gap(rng);
  while (position < total_bits) {
    while (position >= tag_offset + tags[tag_index].width()) {
      tag_offset += tags[tag_index].width();
      ++tag_index;
    }
    tags[tag_index].flip(static_cast<std::size_t>(position - tag_offset));
    if (touched) touched->push_back(tag_index);
    ++flipped;
    const std::uint64_t step = gap(rng);
    if (step >= total_bits) break;
    position += step + 1;
  }
  return flipped;
}

Tag mutate_per_bit(const Tag& tag, double rate, RngStream& rng) {
  Tag out(tag);
  mutate_per_bit_inplace(std::span<Tag>(&out, 1), rate, rng);
  return out;
}

std::uint64_t as_unsigned(const Tag& tag) {
  if (tag.width() > Tag::kWordBits) {
    throw std::invalid_argument("as_unsigned supports widths up to 64 bits");
  }
  return tag.words()[0];
}

}  // namespace tagmatch
