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

#include "tsqp/encoding.h"

#include <limits>

namespace tsqp {
namespace {

void AppendUint(BitString& out, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back((value >> i) & 1U);
}

std::uint64_t ReadUint(const BitString& bits, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v = (v << 1) | static_cast<std::uint64_t>(bits[offset + i]);
  }
  return v;
}

}  // namespace

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw std::invalid_argument("bit value out of range");
  }
}

BitString BitString::FromString(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument(std::string("not a bit: '") + ch + "'");
    }
    bits.push_back(ch == '1' ? 1 : 0);
  }
  return BitString(std::move(bits));
}

BitString BitString::FromBytes(std::span<const std::uint8_t> bytes) {
  BitString out;
  out.bits_.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes) AppendUint(out, byte, 8);
  return out;
}

BitString BitString::Random(std::size_t length, Rng& rng) {
  BitString out;
  out.bits_.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(rng() & 1U);
  return out;
}

void BitString::Append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::Complement() const {
  BitString out = *this;
  for (auto& b : out.bits_) b ^= 1U;
  return out;
}

std::string BitString::ToString() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<std::uint8_t> BitString::ToBytes() const {
  if (bits_.size() % 8 != 0) {
    throw FramingError("bit string length is not a whole number of bytes");
  }
  std::vector<std::uint8_t> out(bits_.size() / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | (bits_[i] << (7 - i % 8)));
  }
  return out;
}

RedundancyFactor::RedundancyFactor(unsigned r) : r_(r) {
  if (r == 0 || r % 2 == 0 || r > 255) {
    throw std::invalid_argument("redundancy must be an odd value in [1, 255], got " +
                                std::to_string(r));
  }
}

std::vector<QubitState> EncodeQ(const BitString& bits, RedundancyFactor r) {
  std::vector<QubitState> out;
  out.reserve(bits.size() * r.value());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out.insert(out.end(), r.value(), QubitState::Basis(bits[i]));
  }
  return out;
}

BitString DecodeQ(std::span<const QubitState> qubits, RedundancyFactor r,
                  Rng& rng) {
  const std::size_t group = r.value();
  if (qubits.size() % group != 0) {
    throw FramingError(std::to_string(qubits.size()) +
                       " qubits do not split into groups of " +
                       std::to_string(group));
  }
  BitString out;
  for (std::size_t i = 0; i < qubits.size(); i += group) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < group; ++j) {
      ones += static_cast<std::size_t>(Measure(qubits[i + j], rng).bit);
    }
    out.push_back(2 * ones > group ? 1 : 0);
  }
  return out;
}

QubitFrame Frame(const BitString& auth_bits,
                 std::vector<QubitState> payload_qubits, RedundancyFactor r) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (auth_bits.size() > kMax || payload_qubits.size() > kMax ||
      auth_bits.size() * r.value() < auth_bits.size()) {
    throw FramingError("segment length overflows its 32-bit header field");
  }
  BitString header;
  AppendUint(header, auth_bits.size(), 32);
  AppendUint(header, payload_qubits.size(), 32);
  AppendUint(header, r.value(), 8);

  QubitFrame frame;
  frame.header = EncodeQ(header, RedundancyFactor(kHeaderRedundancy));
  frame.auth = EncodeQ(auth_bits, r);
  frame.payload = std::move(payload_qubits);
  return frame;
}

FrameHeader DecodeHeader(std::span<const QubitState> header, Rng& rng) {
  if (header.size() != kHeaderQubits) {
    throw FramingError("frame header has " + std::to_string(header.size()) +
                       " qubits, expected " + std::to_string(kHeaderQubits));
  }
  const BitString bits = DecodeQ(header, RedundancyFactor(kHeaderRedundancy), rng);
  FrameHeader h;
  h.auth_bits = static_cast<std::uint32_t>(ReadUint(bits, 0, 32));
  h.payload_qubits = static_cast<std::uint32_t>(ReadUint(bits, 32, 32));
  h.redundancy = static_cast<std::uint8_t>(ReadUint(bits, 64, 8));
  if (h.redundancy == 0 || h.redundancy % 2 == 0) {
    throw FramingError("frame header carries invalid redundancy " +
                       std::to_string(h.redundancy));
  }
  return h;
}

DeframedMessage Deframe(const QubitFrame& frame, Rng& rng) {
  const FrameHeader h = DecodeHeader(frame.header, rng);
  const RedundancyFactor r(h.redundancy);
  if (static_cast<std::uint64_t>(h.auth_bits) * r.value() != frame.auth.size()) {
    throw FramingError("auth segment length disagrees with frame header");
  }
  if (h.payload_qubits != frame.payload.size()) {
    throw FramingError("payload segment length disagrees with frame header");
  }
  return {DecodeQ(frame.auth, r, rng), frame.payload};
}

}  // namespace tsqp
