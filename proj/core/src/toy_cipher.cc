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

#include "toy_cipher.h"

#include <algorithm>

namespace tsqp::toy_cipher {
namespace {

constexpr std::size_t kTagSize = 16;

constexpr std::uint64_t Rotl(std::uint64_t x, int b) noexcept {
  return (x << b) | (x >> (64 - b));
}

std::uint64_t LoadLe64(const std::uint8_t* p) noexcept {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void SipRound(std::uint64_t& v0, std::uint64_t& v1, std::uint64_t& v2,
              std::uint64_t& v3) noexcept {
  v0 += v1;
  v1 = Rotl(v1, 13);
  v1 ^= v0;
  v0 = Rotl(v0, 32);
  v2 += v3;
  v3 = Rotl(v3, 16);
  v3 ^= v2;
  v0 += v3;
  v3 = Rotl(v3, 21);
  v3 ^= v0;
  v2 += v1;
  v1 = Rotl(v1, 17);
  v1 ^= v2;
  v2 = Rotl(v2, 32);
}

using SubKey = std::array<std::uint8_t, 16>;

// Both subkeys depend on all 32 key bytes.
SubKey DeriveSubKey(const Key& key, std::uint8_t label) noexcept {
  std::array<std::uint8_t, 18> msg{};
  msg[0] = label;
  std::copy(key.begin() + 16, key.end(), msg.begin() + 2);
  SubKey out{};
  for (std::uint8_t half = 0; half < 2; ++half) {
    msg[1] = half;
    const std::uint64_t h =
        SipHash24(std::span<const std::uint8_t, 16>(key.data(), 16), msg);
    for (int i = 0; i < 8; ++i) {
      out[static_cast<std::size_t>(half * 8 + i)] = static_cast<std::uint8_t>(h >> (8 * i));
    }
  }
  return out;
}

SubKey EncKey(const Key& key) noexcept { return DeriveSubKey(key, 0xE0); }
SubKey MacKey(const Key& key) noexcept { return DeriveSubKey(key, 0xA0); }

std::array<std::uint8_t, kTagSize> ComputeTag(
    const Key& key, std::span<const std::uint8_t> authenticated) {
  std::vector<std::uint8_t> msg;
  msg.reserve(authenticated.size() + 1);
  msg.push_back(0);
  msg.insert(msg.end(), authenticated.begin(), authenticated.end());
  std::array<std::uint8_t, kTagSize> tag{};
  const SubKey mac_key = MacKey(key);
  for (std::uint8_t domain = 0; domain < 2; ++domain) {
    msg[0] = static_cast<std::uint8_t>(0xF0 | domain);
    const std::uint64_t h = SipHash24(mac_key, msg);
    for (int i = 0; i < 8; ++i) {
      tag[static_cast<std::size_t>(domain * 8 + i)] =
          static_cast<std::uint8_t>(h >> (8 * i));
    }
  }
  return tag;
}

void XorKeystream(const Key& key, const Iv& iv,
                  std::span<std::uint8_t> data) {
  const SubKey enc_key = EncKey(key);
  std::array<std::uint8_t, 24> block{};
  std::copy(iv.begin(), iv.end(), block.begin());
  for (std::size_t offset = 0; offset < data.size(); offset += 8) {
    const std::uint64_t counter = offset / 8;
    for (int i = 0; i < 8; ++i) {
      block[16 + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(counter >> (8 * i));
    }
    const std::uint64_t ks = SipHash24(enc_key, block);
    for (std::size_t i = 0; i < 8 && offset + i < data.size(); ++i) {
      data[offset + i] ^= static_cast<std::uint8_t>(ks >> (8 * i));
    }
  }
}

}  // namespace

std::uint64_t SipHash24(std::span<const std::uint8_t, 16> key,
                        std::span<const std::uint8_t> message) noexcept {
  const std::uint64_t k0 = LoadLe64(key.data());
  const std::uint64_t k1 = LoadLe64(key.data() + 8);
  std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
  std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
  std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
  std::uint64_t v3 = 0x7465646279746573ULL ^ k1;

  const std::size_t len = message.size();
  const std::size_t full = len - (len % 8);
  for (std::size_t i = 0; i < full; i += 8) {
    const std::uint64_t m = LoadLe64(message.data() + i);
    v3 ^= m;
    SipRound(v0, v1, v2, v3);
    SipRound(v0, v1, v2, v3);
    v0 ^= m;
  }
  std::uint64_t last = static_cast<std::uint64_t>(len & 0xff) << 56;
  for (std::size_t i = 0; i < len % 8; ++i) {
    last |= static_cast<std::uint64_t>(message[full + i]) << (8 * i);
  }
  v3 ^= last;
  SipRound(v0, v1, v2, v3);
  SipRound(v0, v1, v2, v3);
  v0 ^= last;
  v2 ^= 0xff;
  for (int i = 0; i < 4; ++i) SipRound(v0, v1, v2, v3);
  return v0 ^ v1 ^ v2 ^ v3;
}

std::vector<std::uint8_t> Encrypt(const Key& key, const Iv& iv,
                                  std::span<const std::uint8_t> plaintext) {
  std::vector<std::uint8_t> out(iv.begin(), iv.end());
  out.insert(out.end(), plaintext.begin(), plaintext.end());
  XorKeystream(key, iv, std::span(out).subspan(iv.size()));
  const auto tag = ComputeTag(key, out);
  out.insert(out.end(), tag.begin(), tag.end());
  return out;
}

std::optional<std::vector<std::uint8_t>> Decrypt(
    const Key& key, std::span<const std::uint8_t> sealed) {
  Iv iv{};
  if (sealed.size() < iv.size() + kTagSize) return std::nullopt;
  const auto body = sealed.first(sealed.size() - kTagSize);
  const auto tag = sealed.last(kTagSize);
  const auto expected = ComputeTag(key, body);
  // Constant-time compare.
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < kTagSize; ++i) diff |= tag[i] ^ expected[i];
  if (diff != 0) return std::nullopt;

  std::copy_n(body.begin(), iv.size(), iv.begin());
  std::vector<std::uint8_t> plain(body.begin() + static_cast<std::ptrdiff_t>(iv.size()),
                                  body.end());
  XorKeystream(key, iv, plain);
  return plain;
}

}  // namespace tsqp::toy_cipher
