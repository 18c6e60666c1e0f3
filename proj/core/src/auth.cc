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

#include "tsqp/auth.h"

#include "toy_cipher.h"

namespace tsqp {
namespace {

constexpr std::uint8_t kTagMsg1 = 1;
constexpr std::uint8_t kTagTicketReq = 2;
constexpr std::uint8_t kTagPackageA = 3;
constexpr std::uint8_t kTagTicketB = 4;
constexpr std::uint8_t kTagConfirm = 5;

class Writer {
 public:
  void Byte(std::uint8_t b) { out_.push_back(b); }
  void Bytes(std::span<const std::uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  void U64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void Blob(const SealedRecord& sealed) {
    if (sealed.bytes.size() > 0xffff) throw MalformedRecord("sealed blob too long");
    out_.push_back(static_cast<std::uint8_t>(sealed.bytes.size() >> 8));
    out_.push_back(static_cast<std::uint8_t>(sealed.bytes.size()));
    Bytes(sealed.bytes);
  }
  std::vector<std::uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> Bytes(std::size_t n) {
    if (in_.size() - pos_ < n) throw MalformedRecord("record truncated");
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t Byte() { return Bytes(1)[0]; }
  std::uint64_t U64() {
    std::uint64_t v = 0;
    for (auto b : Bytes(8)) v = (v << 8) | b;
    return v;
  }
  template <typename T>
  T Fixed() {
    return T::FromSpan(Bytes(T::kSize));
  }
  SealedRecord Blob() {
    const auto len = Bytes(2);
    const std::size_t n = (static_cast<std::size_t>(len[0]) << 8) | len[1];
    const auto body = Bytes(n);
    return SealedRecord{{body.begin(), body.end()}};
  }
  void ExpectEnd() const {
    if (pos_ != in_.size()) throw MalformedRecord("trailing bytes after record");
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

toy_cipher::Key ToCipherKey(std::span<const std::uint8_t, 32> key) {
  toy_cipher::Key k{};
  std::copy(key.begin(), key.end(), k.begin());
  return k;
}

SealedRecord SealWith(std::span<const std::uint8_t, 32> key,
                      const AuthRecord& record, Rng& rng) {
  toy_cipher::Iv iv{};
  FillRandom(rng, iv);
  const auto plain = Serialize(record);
  return SealedRecord{toy_cipher::Encrypt(ToCipherKey(key), iv, plain)};
}

AuthRecord OpenWith(std::span<const std::uint8_t, 32> key,
                    const SealedRecord& sealed) {
  auto plain = toy_cipher::Decrypt(ToCipherKey(key), sealed.bytes);
  if (!plain) throw IntegrityError("integrity tag mismatch");
  return Parse(*plain);
}

template <typename T>
const T& Expect(const AuthRecord& record, AbortReason reason) {
  if (const T* p = std::get_if<T>(&record)) return *p;
  throw ProtocolAbort(reason, "sealed record has the wrong type");
}

// Opens a sealed record, mapping every failure onto a single abort reason.
template <typename T, typename Key>
T OpenAs(const Key& key, const SealedRecord& sealed, AbortReason reason) {
  try {
    return Expect<T>(Open(key, sealed), reason);
  } catch (const IntegrityError& e) {
    throw ProtocolAbort(reason, e.what());
  } catch (const MalformedRecord& e) {
    throw ProtocolAbort(reason, e.what());
  }
}

template <typename Wire>
Wire DecodeAs(const BitString& bits) {
  WireMessage message;
  try {
    message = DecodeWire(bits);
  } catch (const MalformedRecord& e) {
    throw ProtocolAbort(AbortReason::kBadFrame, e.what());
  } catch (const FramingError& e) {
    throw ProtocolAbort(AbortReason::kBadFrame, e.what());
  }
  if (auto* w = std::get_if<Wire>(&message)) return std::move(*w);
  throw ProtocolAbort(AbortReason::kPhaseViolation,
                      "message kind does not match the expected step");
}

}  // namespace

std::string_view ToString(AbortReason reason) noexcept {
  switch (reason) {
    case AbortReason::kBadFrame: return "BadFrame";
    case AbortReason::kUnknownParty: return "UnknownParty";
    case AbortReason::kBadTicketReq: return "BadTicketReq";
    case AbortReason::kBadPackage: return "BadPackage";
    case AbortReason::kPeerMismatch: return "PeerMismatch";
    case AbortReason::kReplayOrForgery: return "ReplayOrForgery";
    case AbortReason::kBadTicket: return "BadTicket";
    case AbortReason::kBadConfirm: return "BadConfirm";
    case AbortReason::kReplay: return "Replay";
    case AbortReason::kStaleTimestamp: return "StaleTimestamp";
    case AbortReason::kNonCommutingKeys: return "NonCommutingKeys";
    case AbortReason::kPhaseViolation: return "PhaseViolation";
  }
  return "Unknown";
}

std::optional<AbortReason> ParseAbortReason(std::string_view name) noexcept {
  for (AbortReason r : kAllAbortReasons) {
    if (ToString(r) == name) return r;
  }
  return std::nullopt;
}

ProtocolAbort::ProtocolAbort(AbortReason reason, const std::string& detail)
    : std::runtime_error(std::string(ToString(reason)) + ": " + detail),
      reason_(reason) {}

std::string HexEncode(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

PartyId PartyId::FromNumber(std::uint64_t value) {
  if (value == 0) throw std::invalid_argument("party id must be nonzero");
  std::array<std::uint8_t, 8> bytes{};
  for (int i = 0; i < 8; ++i) {
    bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value >> (8 * (7 - i)));
  }
  return PartyId(bytes);
}

PartyId PartyId::FromSpan(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSize) {
    throw MalformedRecord("expected 8 bytes, got " + std::to_string(bytes.size()));
  }
  std::array<std::uint8_t, kSize> raw{};
  std::copy(bytes.begin(), bytes.end(), raw.begin());
  PartyId id(raw);
  if (id == PartyId()) throw MalformedRecord("party id is zero");
  return id;
}

std::vector<std::uint8_t> Serialize(const AuthRecord& record) {
  Writer w;
  std::visit(
      [&w](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Msg1>) {
          w.Byte(kTagMsg1);
          w.Bytes(r.id_a.bytes());
          w.Bytes(r.n_a.bytes());
        } else if constexpr (std::is_same_v<T, TicketReq>) {
          w.Byte(kTagTicketReq);
          w.Bytes(r.id_a.bytes());
          w.Bytes(r.n_a.bytes());
          w.U64(r.t_b);
        } else if constexpr (std::is_same_v<T, PackageA>) {
          w.Byte(kTagPackageA);
          w.Bytes(r.id_b.bytes());
          w.Bytes(r.n_a.bytes());
          w.Bytes(r.k_s.bytes());
          w.U64(r.t_b);
        } else if constexpr (std::is_same_v<T, TicketB>) {
          w.Byte(kTagTicketB);
          w.Bytes(r.id_a.bytes());
          w.Bytes(r.k_s.bytes());
          w.U64(r.t_b);
        } else {
          w.Byte(kTagConfirm);
          w.Bytes(r.n_b.bytes());
        }
      },
      record);
  return w.Take();
}

AuthRecord Parse(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  AuthRecord out;
  switch (r.Byte()) {
    case kTagMsg1: {
      Msg1 m;
      m.id_a = r.Fixed<PartyId>();
      m.n_a = r.Fixed<Nonce>();
      out = m;
      break;
    }
    case kTagTicketReq: {
      TicketReq m;
      m.id_a = r.Fixed<PartyId>();
      m.n_a = r.Fixed<Nonce>();
      m.t_b = r.U64();
      out = m;
      break;
    }
    case kTagPackageA: {
      PackageA m;
      m.id_b = r.Fixed<PartyId>();
      m.n_a = r.Fixed<Nonce>();
      m.k_s = r.Fixed<SessionKey>();
      m.t_b = r.U64();
      out = m;
      break;
    }
    case kTagTicketB: {
      TicketB m;
      m.id_a = r.Fixed<PartyId>();
      m.k_s = r.Fixed<SessionKey>();
      m.t_b = r.U64();
      out = m;
      break;
    }
    case kTagConfirm: {
      Confirm m;
      m.n_b = r.Fixed<Nonce>();
      out = m;
      break;
    }
    default:
      throw MalformedRecord("unknown record tag");
  }
  r.ExpectEnd();
  return out;
}

SealedRecord Seal(const MasterKey& key, const AuthRecord& record, Rng& rng) {
  return SealWith(key.bytes(), record, rng);
}

SealedRecord Seal(const SessionKey& key, const AuthRecord& record, Rng& rng) {
  return SealWith(key.bytes(), record, rng);
}

AuthRecord Open(const MasterKey& key, const SealedRecord& sealed) {
  return OpenWith(key.bytes(), sealed);
}

AuthRecord Open(const SessionKey& key, const SealedRecord& sealed) {
  return OpenWith(key.bytes(), sealed);
}

BitString EncodeWire(const WireMessage& message) {
  Writer w;
  std::visit(
      [&w](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Msg1>) {
          w.Byte(static_cast<std::uint8_t>(MessageKind::kMsg1));
          w.Bytes(Serialize(m));
        } else if constexpr (std::is_same_v<T, Msg2Wire>) {
          w.Byte(static_cast<std::uint8_t>(MessageKind::kMsg2));
          w.Bytes(m.id_b.bytes());
          w.Bytes(m.n_b.bytes());
          w.Blob(m.ticket_req);
        } else if constexpr (std::is_same_v<T, Msg3Wire>) {
          w.Byte(static_cast<std::uint8_t>(MessageKind::kMsg3));
          w.Blob(m.package_a);
          w.Blob(m.ticket_b);
          w.Bytes(m.n_b.bytes());
        } else {
          w.Byte(static_cast<std::uint8_t>(MessageKind::kMsg4));
          w.Blob(m.ticket_b);
          w.Blob(m.confirm);
        }
      },
      message);
  return BitString::FromBytes(w.Take());
}

WireMessage DecodeWire(const BitString& bits) {
  const auto bytes = bits.ToBytes();
  Reader r(bytes);
  WireMessage out;
  switch (static_cast<MessageKind>(r.Byte())) {
    case MessageKind::kMsg1: {
      const auto rest = r.Bytes(1 + PartyId::kSize + Nonce::kSize);
      const AuthRecord rec = Parse(rest);
      const auto* m = std::get_if<Msg1>(&rec);
      if (!m) throw MalformedRecord("message 1 does not carry a Msg1 record");
      out = *m;
      break;
    }
    case MessageKind::kMsg2: {
      Msg2Wire m;
      m.id_b = r.Fixed<PartyId>();
      m.n_b = r.Fixed<Nonce>();
      m.ticket_req = r.Blob();
      out = std::move(m);
      break;
    }
    case MessageKind::kMsg3: {
      Msg3Wire m;
      m.package_a = r.Blob();
      m.ticket_b = r.Blob();
      m.n_b = r.Fixed<Nonce>();
      out = std::move(m);
      break;
    }
    case MessageKind::kMsg4: {
      Msg4Wire m;
      m.ticket_b = r.Blob();
      m.confirm = r.Blob();
      out = std::move(m);
      break;
    }
    default:
      throw MalformedRecord("unknown message kind");
  }
  r.ExpectEnd();
  return out;
}

std::optional<MessageKind> PeekKind(const BitString& bits) noexcept {
  if (bits.size() < 8) return std::nullopt;
  std::uint8_t b = 0;
  for (std::size_t i = 0; i < 8; ++i) b = static_cast<std::uint8_t>((b << 1) | bits[i]);
  switch (static_cast<MessageKind>(b)) {
    case MessageKind::kMsg1:
    case MessageKind::kMsg2:
    case MessageKind::kMsg3:
    case MessageKind::kMsg4:
      return static_cast<MessageKind>(b);
  }
  return std::nullopt;
}

Nonce NonceSource::Next() {
  for (;;) {
    Nonce n = Nonce::Random(rng_);
    if (issued_.insert(n).second) return n;
  }
}

void ReplayCache::Consume(const Nonce& n_b, const SessionKey& k_s) {
  consumed_.emplace(n_b, k_s);
}

void KeyTable::Register(const PartyId& id, const MasterKey& key) {
  for (auto& e : entries_) {
    if (e.id == id) {
      e.key = key;
      return;
    }
  }
  entries_.push_back({id, key});
}

const MasterKey* KeyTable::Find(const PartyId& id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e.key;
  }
  return nullptr;
}

BitString BuildMsg1(const PartyId& id_a, const Nonce& n_a) {
  return EncodeWire(Msg1{id_a, n_a});
}

BitString BuildMsg2(const PartyId& id_b, const Nonce& n_b, const MasterKey& k_b,
                    const PartyId& id_a, const Nonce& n_a, const Clock& clock_b,
                    Rng& rng) {
  const TicketReq req{id_a, n_a, clock_b.Now()};
  return EncodeWire(Msg2Wire{id_b, n_b, Seal(k_b, req, rng)});
}

KdcOutput KdcProcessMsg2(const BitString& msg2, const KeyTable& keys, Rng& rng) {
  const auto wire = DecodeAs<Msg2Wire>(msg2);
  const MasterKey* k_b = keys.Find(wire.id_b);
  if (!k_b) throw ProtocolAbort(AbortReason::kUnknownParty, "requester not registered");
  const auto req = OpenAs<TicketReq>(*k_b, wire.ticket_req, AbortReason::kBadTicketReq);
  const MasterKey* k_a = keys.Find(req.id_a);
  if (!k_a) throw ProtocolAbort(AbortReason::kUnknownParty, "initiator not registered");

  const SessionKey k_s = SessionKey::Random(rng);
  Msg3Wire out;
  out.package_a = Seal(*k_a, PackageA{wire.id_b, req.n_a, k_s, req.t_b}, rng);
  out.ticket_b = Seal(*k_b, TicketB{req.id_a, k_s, req.t_b}, rng);
  out.n_b = wire.n_b;
  return {EncodeWire(out), req.id_a, wire.id_b};
}

AliceMsg3Result AliceProcessMsg3(const BitString& msg3, const MasterKey& k_a,
                                 const Nonce& expected_n_a,
                                 const PartyId& expected_peer, Rng& rng) {
  const auto wire = DecodeAs<Msg3Wire>(msg3);
  const auto pkg = OpenAs<PackageA>(k_a, wire.package_a, AbortReason::kBadPackage);
  if (pkg.n_a != expected_n_a) {
    throw ProtocolAbort(AbortReason::kReplayOrForgery,
                        "package does not return this session's nonce");
  }
  if (pkg.id_b != expected_peer) {
    throw ProtocolAbort(AbortReason::kPeerMismatch, "package names another peer");
  }
  Msg4Wire out;
  out.ticket_b = wire.ticket_b;
  out.confirm = Seal(pkg.k_s, Confirm{wire.n_b}, rng);
  return {EncodeWire(out), pkg.k_s};
}

SessionKey BobProcessMsg4(const BitString& msg4, const MasterKey& k_b,
                          const Clock& clock_b, std::uint64_t window_ms,
                          const BobSessionView& session, ReplayCache& seen) {
  const auto wire = DecodeAs<Msg4Wire>(msg4);
  const auto ticket = OpenAs<TicketB>(k_b, wire.ticket_b, AbortReason::kBadTicket);
  if (ticket.id_a != session.expected_peer) {
    throw ProtocolAbort(AbortReason::kBadTicket, "ticket issued for another initiator");
  }
  const Timestamp now = clock_b.Now();
  const Timestamp age = now >= ticket.t_b ? now - ticket.t_b : ticket.t_b - now;
  if (age > window_ms) {
    throw ProtocolAbort(AbortReason::kStaleTimestamp,
                        "ticket is " + std::to_string(age) + " ms old");
  }
  const auto confirm = OpenAs<Confirm>(ticket.k_s, wire.confirm, AbortReason::kBadConfirm);
  if (confirm.n_b != session.n_b || seen.Seen(confirm.n_b)) {
    throw ProtocolAbort(AbortReason::kReplay, "confirmation is not for this session");
  }
  seen.Consume(confirm.n_b, ticket.k_s);
  return ticket.k_s;
}

}  // namespace tsqp
