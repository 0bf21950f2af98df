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

#include "tagmatch/rng.hpp"

#include <string_view>

namespace tagmatch {

namespace {

__extension__ using uint128 = unsigned __int128;

std::mt19937_64 seeded_engine(std::uint64_t root_seed, std::uint64_t stream_id) {
  const std::uint64_t a = splitmix64(root_seed);
  const std::uint64_t b = splitmix64(stream_id ^ 0xD1B54A32D192ED03ULL);
  const std::uint64_t c = splitmix64(a ^ b);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, std::uint64_t stream_id)
    : root_seed_(root_seed), stream_id_(stream_id), engine_(seeded_engine(root_seed, stream_id)) {}

RngStream RngStream::child(std::uint64_t index) const {
  const std::uint64_t id = splitmix64(stream_id_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  return RngStream(root_seed_, id);
}

std::size_t RngStream::below(std::size_t n) {
  // Lemire's multiply-and-reject; unbiased.
  const auto bound = static_cast<std::uint64_t>(n);
  auto product = static_cast<uint128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<uint128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::size_t>(product >> 64);
}

RngStream derive_stream(std::uint64_t root_seed, std::uint64_t stream_id) {
  return RngStream(root_seed, stream_id);
}

std::uint64_t stream_key(std::string_view label) noexcept {
  // FNV-1a, then mixed.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ULL;
  }
  return splitmix64(h);
}

}  // namespace tagmatch
