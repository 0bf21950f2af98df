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

#include "tagmatch/sha1.hpp"

#include <bit>
#include <cstring>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define TAGMATCH_SHA1_X86 1
#include <cpuid.h>
#include <immintrin.h>
#endif

namespace tagmatch {

namespace {

using State = std::array<std::uint32_t, 5>;

inline std::uint32_t load_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void compress(State& h, const std::uint8_t* block) {
  std::uint32_t w[80];
  for (int i = 0; i < 16; ++i) w[i] = load_be32(block + 4 * i);
  for (int i = 16; i < 80; ++i) w[i] = std::rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

  std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
  const auto round = [&](std::uint32_t f, std::uint32_t k, std::uint32_t wi) {
    const std::uint32_t temp = std::rotl(a, 5) + f + e + k + wi;
    e = d;
    d = c;
    c = std::rotl(b, 30);
    b = a;
    a = temp;
  };
  for (int i = 0; i < 20; ++i) round(d ^ (b & (c ^ d)), 0x5A827999U, w[i]);
  for (int i = 20; i < 40; ++i) round(b ^ c ^ d, 0x6ED9EBA1U, w[i]);
  for (int i = 40; i < 60; ++i) round((b & c) | (d & (b | c)), 0x8F1BBCDCU, w[i]);
  for (int i = 60; i < 80; ++i) round(b ^ c ^ d, 0xCA62C1D6U, w[i]);

  h[0] += a;
  h[1] += b;
  h[2] += c;
  h[3] += d;
  h[4] += e;
}

#if TAGMATCH_SHA1_X86

// Four rounds with a compile-time round function selector.
__attribute__((target("sha,sse4.1"))) inline __m128i four_rounds(__m128i abcd, __m128i e,
                                                                 int group) {
  switch (group / 5) {
    case 0:
      return _mm_sha1rnds4_epu32(abcd, e, 0);
    case 1:
      return _mm_sha1rnds4_epu32(abcd, e, 1);
    case 2:
      return _mm_sha1rnds4_epu32(abcd, e, 2);
    default:
      return _mm_sha1rnds4_epu32(abcd, e, 3);
  }
}

__attribute__((target("sha,sse4.1"))) void compress_shani(State& h, const std::uint8_t* block) {
  const __m128i byte_swap = _mm_set_epi64x(0x0001020304050607LL, 0x08090a0b0c0d0e0fLL);
  __m128i abcd = _mm_shuffle_epi32(_mm_loadu_si128(reinterpret_cast<const __m128i*>(h.data())),
                                   0x1B);
  const __m128i abcd_saved = abcd;
  const __m128i e_saved = _mm_set_epi32(static_cast<int>(h[4]), 0, 0, 0);

  // Message schedule, four words per group.
  __m128i msg[20];
  for (int g = 0; g < 4; ++g) {
    msg[g] = _mm_shuffle_epi8(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(block + 16 * g)), byte_swap);
  }
  for (int g = 4; g < 20; ++g) {
    msg[g] = _mm_sha1msg2_epu32(
        _mm_xor_si128(_mm_sha1msg1_epu32(msg[g - 4], msg[g - 3]), msg[g - 2]), msg[g - 1]);
  }

  __m128i e = _mm_add_epi32(e_saved, msg[0]);
  __m128i previous = abcd;
  abcd = four_rounds(abcd, e, 0);
  for (int g = 1; g < 20; ++g) {
    e = _mm_sha1nexte_epu32(previous, msg[g]);
    previous = abcd;
    abcd = four_rounds(abcd, e, g);
  }
  e = _mm_sha1nexte_epu32(previous, e_saved);
  abcd = _mm_add_epi32(abcd, abcd_saved);

  _mm_storeu_si128(reinterpret_cast<__m128i*>(h.data()), _mm_shuffle_epi32(abcd, 0x1B));
  h[4] = static_cast<std::uint32_t>(_mm_extract_epi32(e, 3));
}

bool cpu_has_sha_extensions() noexcept {
  unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return false;
  const bool ssse3 = (ecx & (1U << 9)) != 0;
  const bool sse41 = (ecx & (1U << 19)) != 0;
  if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
  const bool sha = (ebx & (1U << 29)) != 0;
  return ssse3 && sse41 && sha;
}

#endif

using CompressFn = void (*)(State&, const std::uint8_t*);

CompressFn select_compress() noexcept {
#if TAGMATCH_SHA1_X86
  if (cpu_has_sha_extensions()) return compress_shani;
#endif
  return compress;
}

const CompressFn kCompress = select_compress();

Sha1Digest digest_with(std::span<const std::uint8_t> data, CompressFn compress_block) {
  State h{0x67452301U, 0xEFCDAB89U, 0x98BADCFEU, 0x10325476U, 0xC3D2E1F0U};

  std::size_t offset = 0;
  for (; offset + 64 <= data.size(); offset += 64) compress_block(h, data.data() + offset);

  // Final one or two blocks: remainder, 0x80, zero fill, 64-bit bit length.
  std::array<std::uint8_t, 128> tail{};
  const std::size_t rem = data.size() - offset;
  if (rem > 0) std::memcpy(tail.data(), data.data() + offset, rem);
  tail[rem] = 0x80;
  const std::size_t tail_len = rem + 9 <= 64 ? 64 : 128;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(data.size()) * 8;
  for (int i = 0; i < 8; ++i) {
    tail[tail_len - 1 - i] = static_cast<std::uint8_t>(bit_len >> (8 * i));
  }
  compress_block(h, tail.data());
  if (tail_len == 128) compress_block(h, tail.data() + 64);

  Sha1Digest digest{};
  for (int i = 0; i < 5; ++i) {
    digest[4 * i] = static_cast<std::uint8_t>(h[i] >> 24);
    digest[4 * i + 1] = static_cast<std::uint8_t>(h[i] >> 16);
    digest[4 * i + 2] = static_cast<std::uint8_t>(h[i] >> 8);
    digest[4 * i + 3] = static_cast<std::uint8_t>(h[i]);
  }
  return digest;
}

}  // namespace

Sha1Digest sha1(std::span<const std::uint8_t> data) { return digest_with(data, kCompress); }

namespace detail {

Sha1Digest sha1_portable(std::span<const std::uint8_t> data) { return digest_with(data, compress); }

bool sha1_accelerated() noexcept { return kCompress != &compress; }

}  // namespace detail

}  // namespace tagmatch
