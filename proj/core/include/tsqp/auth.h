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

/**
 * @file
 * Classical authentication layer of the KDC-aided exchange.
 *
 * Message shapes (E_K[.] is Seal under key K):
 *
 *   1. A -> B    ID_A || N_a
 *   2. B -> KDC  ID_B || N_b || E_Kb[ID_A || N_a || T_b]
 *   3. KDC -> A  E_Ka[ID_B || N_a || K_s || T_b] || E_Kb[ID_A || K_s || T_b] || N_b
 *   4. A -> B    E_Kb[ID_A || K_s || T_b] || E_Ks[N_b]
 *
 * Every message is prefixed with a one-byte kind so that a state machine can
 * tell an out-of-order delivery from a forgery. Sealed blobs are
 * length-prefixed (u16, big-endian).
 */

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "tsqp/encoding.h"
#include "tsqp/rng.h"

namespace tsqp {

/// Closed set of reasons a protocol run can stop.
enum class AbortReason {
  kBadFrame,
  kUnknownParty,
  kBadTicketReq,
  kBadPackage,
  kPeerMismatch,
  kReplayOrForgery,
  kBadTicket,
  kBadConfirm,
  kReplay,
  kStaleTimestamp,
  kNonCommutingKeys,
  kPhaseViolation,
};

inline constexpr std::array<AbortReason, 12> kAllAbortReasons = {
    AbortReason::kBadFrame,        AbortReason::kUnknownParty,
    AbortReason::kBadTicketReq,    AbortReason::kBadPackage,
    AbortReason::kPeerMismatch,    AbortReason::kReplayOrForgery,
    AbortReason::kBadTicket,       AbortReason::kBadConfirm,
    AbortReason::kReplay,          AbortReason::kStaleTimestamp,
    AbortReason::kNonCommutingKeys, AbortReason::kPhaseViolation,
};

std::string_view ToString(AbortReason reason) noexcept;
std::optional<AbortReason> ParseAbortReason(std::string_view name) noexcept;

class ProtocolAbort : public std::runtime_error {
 public:
  ProtocolAbort(AbortReason reason, const std::string& detail);
  AbortReason reason() const noexcept { return reason_; }

 private:
  AbortReason reason_;
};

class MalformedRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-width byte string with a tag type so that keys, nonces and IDs do
/// not convert into each other.
template <std::size_t N, typename Tag>
class FixedBytes {
 public:
  static constexpr std::size_t kSize = N;

  FixedBytes() noexcept { bytes_.fill(0); }
  explicit FixedBytes(const std::array<std::uint8_t, N>& bytes) noexcept
      : bytes_(bytes) {}

  static FixedBytes Random(Rng& rng) {
    FixedBytes out;
    FillRandom(rng, out.bytes_);
    return out;
  }

  /// Throws MalformedRecord if the span has the wrong length.
  static FixedBytes FromSpan(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != N) {
      throw MalformedRecord("expected " + std::to_string(N) + " bytes, got " +
                            std::to_string(bytes.size()));
    }
    FixedBytes out;
    std::copy(bytes.begin(), bytes.end(), out.bytes_.begin());
    return out;
  }

  std::span<const std::uint8_t, N> bytes() const noexcept { return bytes_; }
  std::string Hex() const;

  friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
  friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;

 private:
  std::array<std::uint8_t, N> bytes_;
};

std::string HexEncode(std::span<const std::uint8_t> bytes);

template <std::size_t N, typename Tag>
std::string FixedBytes<N, Tag>::Hex() const {
  return HexEncode(bytes_);
}

struct FixedBytesHash {
  template <std::size_t N, typename Tag>
  std::size_t operator()(const FixedBytes<N, Tag>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : v.bytes()) h = (h ^ b) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }
};

struct PartyIdTag {};
struct NonceTag {};
struct SessionKeyTag {};
struct MasterKeyTag {};

/// 8-byte principal identifier. Never all-zero.
class PartyId : public FixedBytes<8, PartyIdTag> {
 public:
  using FixedBytes::FixedBytes;
  /// Throws std::invalid_argument for zero.
  static PartyId FromNumber(std::uint64_t value);
  static PartyId FromSpan(std::span<const std::uint8_t> bytes);
};

using Nonce = FixedBytes<16, NonceTag>;
using SessionKey = FixedBytes<32, SessionKeyTag>;
using MasterKey = FixedBytes<32, MasterKeyTag>;

/// Milliseconds on a party's local clock.
using Timestamp = std::uint64_t;

struct Msg1 {
  PartyId id_a;
  Nonce n_a;
  friend bool operator==(const Msg1&, const Msg1&) = default;
};
struct TicketReq {
  PartyId id_a;
  Nonce n_a;
  Timestamp t_b = 0;
  friend bool operator==(const TicketReq&, const TicketReq&) = default;
};
struct PackageA {
  PartyId id_b;
  Nonce n_a;
  SessionKey k_s;
  Timestamp t_b = 0;
  friend bool operator==(const PackageA&, const PackageA&) = default;
};
struct TicketB {
  PartyId id_a;
  SessionKey k_s;
  Timestamp t_b = 0;
  friend bool operator==(const TicketB&, const TicketB&) = default;
};
struct Confirm {
  Nonce n_b;
  friend bool operator==(const Confirm&, const Confirm&) = default;
};

using AuthRecord = std::variant<Msg1, TicketReq, PackageA, TicketB, Confirm>;

/// Canonical layout: variant tag (1..5), then fields in declaration order at
/// fixed widths; timestamps are big-endian.
std::vector<std::uint8_t> Serialize(const AuthRecord& record);
/// Throws MalformedRecord on an unknown tag or wrong length.
AuthRecord Parse(std::span<const std::uint8_t> bytes);

/// 16-byte random IV, ciphertext, 16-byte integrity tag.
struct SealedRecord {
  std::vector<std::uint8_t> bytes;

  static constexpr std::size_t kIvSize = 16;
  static constexpr std::size_t kTagSize = 16;

  friend bool operator==(const SealedRecord&, const SealedRecord&) = default;
};

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SealedRecord Seal(const MasterKey& key, const AuthRecord& record, Rng& rng);
SealedRecord Seal(const SessionKey& key, const AuthRecord& record, Rng& rng);
/// Throws IntegrityError on a tag mismatch and MalformedRecord if the
/// authenticated plaintext does not parse.
AuthRecord Open(const MasterKey& key, const SealedRecord& sealed);
AuthRecord Open(const SessionKey& key, const SealedRecord& sealed);

/// Leading byte of every message's auth bits.
enum class MessageKind : std::uint8_t {
  kMsg1 = 0xA1,
  kMsg2 = 0xA2,
  kMsg3 = 0xA3,
  kMsg4 = 0xA4,
};

/// Field-level view of each message as it appears on the channel. Sealed
/// parts stay opaque.
struct Msg2Wire {
  PartyId id_b;
  Nonce n_b;
  SealedRecord ticket_req;
};
struct Msg3Wire {
  SealedRecord package_a;
  SealedRecord ticket_b;
  Nonce n_b;
};
struct Msg4Wire {
  SealedRecord ticket_b;
  SealedRecord confirm;
};

using WireMessage = std::variant<Msg1, Msg2Wire, Msg3Wire, Msg4Wire>;

BitString EncodeWire(const WireMessage& message);
/// Throws MalformedRecord if the bits are not a well-formed message.
WireMessage DecodeWire(const BitString& bits);
/// Kind byte of the bits, if there is one.
std::optional<MessageKind> PeekKind(const BitString& bits) noexcept;

/// Reads a party's local clock in milliseconds.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp Now() const = 0;
};

/// Nonces a single party has issued; regenerates on the (negligible) chance
/// of a repeat so a party never reuses one within a run.
class NonceSource {
 public:
  explicit NonceSource(std::uint64_t seed) : rng_(seed) {}
  Nonce Next();
  std::size_t issued() const noexcept { return issued_.size(); }

 private:
  Rng rng_;
  std::unordered_set<Nonce, FixedBytesHash> issued_;
};

/// Bob's record of consumed N_b values, kept for the whole run.
class ReplayCache {
 public:
  bool Seen(const Nonce& n_b) const { return consumed_.contains(n_b); }
  void Consume(const Nonce& n_b, const SessionKey& k_s);
  std::size_t size() const noexcept { return consumed_.size(); }

 private:
  std::unordered_map<Nonce, SessionKey, FixedBytesHash> consumed_;
};

struct KeyTableEntry {
  PartyId id;
  MasterKey key;
};

/// The KDC's master-key table.
class KeyTable {
 public:
  void Register(const PartyId& id, const MasterKey& key);
  const MasterKey* Find(const PartyId& id) const;

 private:
  std::vector<KeyTableEntry> entries_;
};

BitString BuildMsg1(const PartyId& id_a, const Nonce& n_a);

/// The TicketReq timestamp is read from Bob's clock.
BitString BuildMsg2(const PartyId& id_b, const Nonce& n_b, const MasterKey& k_b,
                    const PartyId& id_a, const Nonce& n_a, const Clock& clock_b,
                    Rng& rng);

struct KdcOutput {
  BitString msg3;
  PartyId id_a;
  PartyId id_b;
};

/// Opens TicketReq with Bob's master key and issues a fresh session key.
/// Throws ProtocolAbort(kUnknownParty | kBadTicketReq | kBadFrame).
KdcOutput KdcProcessMsg2(const BitString& msg2, const KeyTable& keys, Rng& rng);

struct AliceMsg3Result {
  BitString msg4;
  SessionKey k_s;
};

/// Checks that PackageA returns Alice's nonce and names the intended peer,
/// then forwards TicketB with E_Ks[N_b].
/// Throws ProtocolAbort(kBadPackage | kReplayOrForgery | kPeerMismatch |
/// kBadFrame).
AliceMsg3Result AliceProcessMsg3(const BitString& msg3, const MasterKey& k_a,
                                 const Nonce& expected_n_a,
                                 const PartyId& expected_peer, Rng& rng);

struct BobSessionView {
  PartyId expected_peer;
  Nonce n_b;
};

/// Validates TicketB freshness on Bob's own clock and the confirmation of
/// this session's N_b, then records N_b as consumed.
/// Throws ProtocolAbort(kBadTicket | kStaleTimestamp | kBadConfirm |
/// kReplay | kBadFrame).
SessionKey BobProcessMsg4(const BitString& msg4, const MasterKey& k_b,
                          const Clock& clock_b, std::uint64_t window_ms,
                          const BobSessionView& session, ReplayCache& seen);

}  // namespace tsqp
