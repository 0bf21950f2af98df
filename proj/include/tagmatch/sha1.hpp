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
#include <cstdint>
#include <span>

namespace tagmatch {

using Sha1Digest = std::array<std::uint8_t, 20>;

/// FIPS 180-4 SHA-1 of a byte sequence. Uses the x86 SHA extensions when the
/// CPU has them.
Sha1Digest sha1(std::span<const std::uint8_t> data);

namespace detail {

/// Scalar implementation, always available.
Sha1Digest sha1_portable(std::span<const std::uint8_t> data);
/// Whether sha1() dispatches to the SHA-extension kernel on this machine.
bool sha1_accelerated() noexcept;

}  // namespace detail

}  // namespace tagmatch
