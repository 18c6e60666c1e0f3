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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tsqp/quantum.h"
#include "tsqp/rng.h"

namespace tsqp {

class FramingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered sequence of classical bits.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters. Throws std::invalid_argument on
  /// any other character.
  static BitString FromString(std::string_view text);
  /// Most significant bit of each byte first.
  static BitString FromBytes(std::span<const std::uint8_t> bytes);
  static BitString Random(std::size_t length, Rng& rng);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  void push_back(int bit) { bits_.push_back(bit ? 1 : 0); }
  void Append(const BitString& other);

  BitString Complement() const;

  std::string ToString() const;
  /// Throws FramingError unless size() is a multiple of 8.
  std::vector<std::uint8_t> ToBytes() const;

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Photons per classical bit. Odd so that majority decoding never ties.
class RedundancyFactor {
 public:
  /// Throws std::invalid_argument unless r is odd and in [1, 255] (the frame
  /// header stores it in 8 bits).
  explicit RedundancyFactor(unsigned r);

  unsigned value() const noexcept { return r_; }

  friend bool operator==(RedundancyFactor, RedundancyFactor) = default;

 private:
  unsigned r_;
};

inline constexpr unsigned kHeaderRedundancy = 3;
inline constexpr unsigned kDefaultAuthRedundancy = 3;
inline constexpr unsigned kDefaultPayloadRedundancy = 1;
/// 32-bit auth length + 32-bit payload length + 8-bit redundancy.
inline constexpr std::size_t kHeaderBits = 72;
inline constexpr std::size_t kHeaderQubits = kHeaderBits * kHeaderRedundancy;

/// Q(.): each bit becomes r copies of the basis state |bit>.
std::vector<QubitState> EncodeQ(const BitString& bits, RedundancyFactor r);

/// Q^-1(.): measures each group of r qubits and takes the majority. Throws
/// FramingError if the count is not a multiple of r.
BitString DecodeQ(std::span<const QubitState> qubits, RedundancyFactor r,
                  Rng& rng);

/// One message on the channel: self-describing header, basis-encoded auth
/// segment, and the payload qubits carrying the protected message.
struct QubitFrame {
  std::vector<QubitState> header;
  std::vector<QubitState> auth;
  std::vector<QubitState> payload;

  friend bool operator==(const QubitFrame&, const QubitFrame&) = default;
};

struct FrameHeader {
  std::uint32_t auth_bits = 0;
  std::uint32_t payload_qubits = 0;
  std::uint8_t redundancy = 1;
};

struct DeframedMessage {
  BitString auth;
  std::vector<QubitState> payload;
};

/// Auth bits are encoded at redundancy r; payload qubits are carried as-is.
/// Throws FramingError if a length does not fit its 32-bit field.
QubitFrame Frame(const BitString& auth_bits,
                 std::vector<QubitState> payload_qubits, RedundancyFactor r);

/// Majority-decodes the header (fixed redundancy 3). Throws FramingError on
/// a wrong header size or an invalid redundancy field.
FrameHeader DecodeHeader(std::span<const QubitState> header, Rng& rng);

/// Measures the header and auth segments; payload qubits are returned
/// untouched. Throws FramingError when the header disagrees with the
/// segment lengths.
DeframedMessage Deframe(const QubitFrame& frame, Rng& rng);

}  // namespace tsqp
