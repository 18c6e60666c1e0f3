// Copyright 2026 The tsqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Authenticated symmetric scheme used behind Seal/Open.
//
// Not a vetted cipher. Keystream and tag are both built from SipHash-2-4 as
// a keyed PRF. Keystream and tag subkeys are derived from the full 32-byte
// key; the 128-bit tag is two 64-bit PRF outputs under distinct domain bytes.
// Encrypt-then-MAC over IV || ciphertext.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tsqp::toy_cipher {

using Key = std::array<std::uint8_t, 32>;
using Iv = std::array<std::uint8_t, 16>;

std::uint64_t SipHash24(std::span<const std::uint8_t, 16> key,
                        std::span<const std::uint8_t> message) noexcept;

/// IV || ciphertext || tag.
std::vector<std::uint8_t> Encrypt(const Key& key, const Iv& iv,
                                  std::span<const std::uint8_t> plaintext);

/// Plaintext, or nullopt if the blob is too short or the tag does not verify.
std::optional<std::vector<std::uint8_t>> Decrypt(
    const Key& key, std::span<const std::uint8_t> sealed);

}  // namespace tsqp::toy_cipher
