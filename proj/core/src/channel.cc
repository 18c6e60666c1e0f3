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

#include "tsqp/channel.h"

#include <stdexcept>
#include <string>

namespace tsqp {

std::string_view ToString(Role role) noexcept {
  switch (role) {
    case Role::kAlice: return "A";
    case Role::kBob: return "B";
    case Role::kKdc: return "KDC";
    case Role::kEve: return "Eve";
  }
  return "?";
}

std::string_view ToString(AdversaryKind kind) noexcept {
  switch (kind) {
    case AdversaryKind::kNone: return "none";
    case AdversaryKind::kInterceptResend: return "eavesdrop";
    case AdversaryKind::kMitm: return "mitm";
    case AdversaryKind::kReplay: return "replay";
    case AdversaryKind::kSuppressReplay: return "suppress";
  }
  return "?";
}

void Validate(const ChannelConfig& cfg) {
  if (!(cfg.flip_noise_p >= 0.0 && cfg.flip_noise_p <= 1.0)) {
    throw std::invalid_argument("flip noise probability must lie in [0, 1]");
  }
  if (cfg.target_hop < 1 || cfg.target_hop > 4) {
    throw std::invalid_argument("target hop must be in [1, 4]");
  }
}

const TapEntry* TapLog::FindHop(int hop) const noexcept {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->hop == hop) return &*it;
  }
  return nullptr;
}

InterceptResult InterceptResend(const QubitFrame& frame, Rng& rng) {
  InterceptResult out{frame, {}};
  for (auto& q : out.frame.payload) {
    const MeasurementOutcome m = Measure(q, rng);
    out.observed.push_back(m.bit);
    q = m.collapsed;
  }
  return out;
}

QubitFrame ApplyFlipNoise(const QubitFrame& frame, double p, Rng& rng) {
  QubitFrame out = frame;
  if (p <= 0.0) return out;
  auto flip = [&](std::vector<QubitState>& segment) {
    for (auto& q : segment) {
      if (UniformUnit(rng) < p) q = FlipBit(q);
    }
  };
  flip(out.header);
  flip(out.auth);
  flip(out.payload);
  return out;
}

QberReport EstimateQber(const BitString& sent, const BitString& received) {
  if (sent.size() != received.size()) {
    throw std::invalid_argument("cannot compare bit strings of lengths " +
                                std::to_string(sent.size()) + " and " +
                                std::to_string(received.size()));
  }
  QberReport r;
  r.compared = sent.size();
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if (sent[i] != received[i]) ++r.mismatches;
  }
  r.rate = r.compared == 0 ? 0.0
                           : static_cast<double>(r.mismatches) /
                                 static_cast<double>(r.compared);
  return r;
}

Channel::Channel(ChannelConfig cfg, SimulatedTime& time,
                 const TapLog* recording)
    : cfg_(cfg), time_(&time), recording_(recording), rng_(cfg.seed) {
  Validate(cfg_);
}

Envelope Channel::Transmit(Envelope sent) {
  TapEntry entry;
  entry.hop = sent.hop;
  entry.from = sent.from;
  entry.to = sent.to;
  entry.sent_at_ms = time_->now();

  Envelope out = std::move(sent);
  out.frame = ApplyFlipNoise(out.frame, cfg_.flip_noise_p, rng_);

  const bool targeted = out.hop == cfg_.target_hop;
  switch (cfg_.adversary) {
    case AdversaryKind::kInterceptResend:
      if (targeted) {
        auto attacked = InterceptResend(out.frame, rng_);
        out.frame = std::move(attacked.frame);
        entry.eve_payload_bits = std::move(attacked.observed);
      }
      break;
    case AdversaryKind::kSuppressReplay:
      if (targeted) time_->Advance(cfg_.delay_ms);
      break;
    case AdversaryKind::kReplay:
      if (targeted && recording_ != nullptr) {
        if (const TapEntry* old = recording_->FindHop(out.hop)) {
          out.frame = old->delivered;
          entry.substituted = true;
        }
      }
      break;
    case AdversaryKind::kNone:
    case AdversaryKind::kMitm:
      break;
  }

  time_->Advance(kHopLatencyMs);
  entry.delivered_at_ms = time_->now();
  entry.delivered = out.frame;
  tap_.Record(std::move(entry));
  return out;
}

TapLog Channel::TakeTap() noexcept {
  TapLog out = std::move(tap_);
  tap_.Clear();
  return out;
}

}  // namespace tsqp
