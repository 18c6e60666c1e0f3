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

#include "runner.h"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace tsqp::cli {
namespace {

using Json = nlohmann::ordered_json;

enum TrialStream : std::uint64_t {
  kPayloadStream = 0x50,
  kChannelStream,
  kNetworkStream,
  kRecordedStream,
  kEveStream,
};

SessionConfig MakeSession(const RunConfig& cfg, std::uint64_t trial_seed) {
  SessionConfig s;
  if (cfg.bits.empty()) {
    Rng rng(DeriveSeed(trial_seed, {kPayloadStream}));
    s.payload = BitString::Random(cfg.length, rng);
  } else {
    s.payload = BitString::FromString(cfg.bits);
  }
  s.payload_redundancy = RedundancyFactor(cfg.redundancy);
  s.auth_redundancy = RedundancyFactor(cfg.auth_redundancy);
  s.key_policy.mode = cfg.policy;
  s.window_ms = cfg.window_ms;
  s.seed = trial_seed;
  s.authenticate = cfg.auth;
  return s;
}

// Majority vote over Eve's raw readings, r per logical bit.
BitString MajorityOf(const BitString& raw, unsigned r) {
  BitString out;
  for (std::size_t g = 0; g + r <= raw.size(); g += r) {
    unsigned ones = 0;
    for (unsigned k = 0; k < r; ++k) ones += static_cast<unsigned>(raw[g + k]);
    out.push_back(2 * ones > r);
  }
  return out;
}

void FillFromSession(TrialRecord& rec, SessionResult result) {
  rec.hops = std::move(result.hops);
  rec.qber = result.qber;
  if (const auto* a = result.aborted()) {
    rec.abort = *a;
  } else {
    rec.recovered = std::get<Recovered>(result.outcome).bits;
  }
}

std::string Bits(const BitString& b) { return b.ToString(); }

Json AuthJson(const std::optional<BitString>& bits) {
  if (!bits) return Json{{"kind", "unreadable"}};
  if (bits->empty()) return nullptr;
  WireMessage wire;
  try {
    wire = DecodeWire(*bits);
  } catch (const MalformedRecord&) {
    Json j{{"kind", "malformed"}, {"bits", bits->size()}};
    if (bits->size() % 8 == 0) j["hex"] = HexEncode(bits->ToBytes());
    return j;
  }
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Msg1>) {
          return Json{{"kind", "msg1"}, {"id_a", m.id_a.Hex()}, {"n_a", m.n_a.Hex()}};
        } else if constexpr (std::is_same_v<T, Msg2Wire>) {
          return Json{{"kind", "msg2"},
                      {"id_b", m.id_b.Hex()},
                      {"n_b", m.n_b.Hex()},
                      {"ticket_req", HexEncode(m.ticket_req.bytes)}};
        } else if constexpr (std::is_same_v<T, Msg3Wire>) {
          return Json{{"kind", "msg3"},
                      {"package_a", HexEncode(m.package_a.bytes)},
                      {"ticket_b", HexEncode(m.ticket_b.bytes)},
                      {"n_b", m.n_b.Hex()}};
        } else {
          return Json{{"kind", "msg4"},
                      {"ticket_b", HexEncode(m.ticket_b.bytes)},
                      {"confirm", HexEncode(m.confirm.bytes)}};
        }
      },
      wire);
}

Json AbortJson(const Aborted& a) {
  return Json{{"reason", std::string(ToString(a.reason))},
              {"step", a.step},
              {"at", std::string(ToString(a.at))},
              {"detail", a.detail}};
}

Json AmplitudesJson(const std::vector<QubitState>& reg) {
  Json out = Json::array();
  for (const auto& q : reg) {
    out.push_back(Json::array({q.alpha().real(), q.alpha().imag(), q.beta().real(),
                               q.beta().imag()}));
  }
  return out;
}

std::string MitmLabel(const HopRecord& h) {
  if (h.from == Role::kEve) return "Eve's frame";
  switch (h.hop) {
    case 1: return "U_A(X)";
    case 2: return "U_B U_E(X')";
    case 3: return "U_B U_E(X')";
    default: return "U_A^dagger U_E U_A(X) = U_E(X)";
  }
}

}  // namespace

void Validate(const RunConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
  if (cfg.jobs == 0) throw ConfigError("jobs must be at least 1");
  try {
    RedundancyFactor{cfg.redundancy};
    RedundancyFactor{cfg.auth_redundancy};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.bits.empty()) {
    if (cfg.length == 0) throw ConfigError("length must be at least 1");
  } else {
    try {
      BitString::FromString(cfg.bits);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (!(cfg.noise >= 0.0 && cfg.noise <= 1.0)) {
    throw ConfigError("noise must be a probability in [0, 1]");
  }
  if (cfg.target_hop < 0 || cfg.target_hop > 4) {
    throw ConfigError("target hop must be in [1, 4]");
  }
  if (cfg.adversary == AdversaryKind::kMitm && cfg.noise > 0.0) {
    throw ConfigError("noise is not modelled under --adversary mitm");
  }
  if (cfg.adversary == AdversaryKind::kReplay && cfg.target_hop != 0 && cfg.target_hop < 3) {
    throw ConfigError("replay targets hop 3 or 4");
  }
  if (cfg.delay_ms && cfg.adversary != AdversaryKind::kSuppressReplay) {
    throw ConfigError("delay only applies to --adversary suppress");
  }
}

int EffectiveTargetHop(const RunConfig& cfg) {
  if (cfg.target_hop != 0) return cfg.target_hop;
  switch (cfg.adversary) {
    case AdversaryKind::kReplay:
    case AdversaryKind::kSuppressReplay:
      return 4;
    default:
      return 1;
  }
}

TrialRecord RunTrial(const RunConfig& cfg, std::size_t trial) {
  const std::uint64_t trial_seed = DeriveSeed(cfg.seed, {trial});
  const SessionConfig session = MakeSession(cfg, trial_seed);
  const RunOptions options{cfg.dump_amplitudes};
  TrialRecord rec;
  rec.trial = trial;
  rec.payload = session.payload;

  switch (cfg.adversary) {
    case AdversaryKind::kMitm: {
      MitmOutcome m = MitmAttack(session, DeriveSeed(trial_seed, {kEveStream}));
      rec.hops = m.hops;
      rec.eve_recovered = m.eve_recovered;
      rec.abort = m.alice_side_abort ? m.alice_side_abort : m.bob_side_abort;
      rec.mitm = std::move(m);
      break;
    }
    case AdversaryKind::kReplay: {
      Network net(NetworkConfig{DeriveSeed(trial_seed, {kNetworkStream})});
      SessionConfig earlier = session;
      earlier.seed = DeriveSeed(trial_seed, {kRecordedStream});
      const RecordedSession recorded = RecordSession(earlier, net);
      FillFromSession(rec, ReplayAttack(recorded.tap, EffectiveTargetHop(cfg), session,
                                        net, options));
      break;
    }
    default: {
      ChannelConfig ch;
      ch.adversary = cfg.adversary;
      ch.flip_noise_p = cfg.noise;
      ch.seed = DeriveSeed(trial_seed, {kChannelStream});
      ch.target_hop = EffectiveTargetHop(cfg);
      ch.delay_ms = cfg.delay_ms.value_or(cfg.window_ms);
      FillFromSession(rec, RunSession(session, ch, options));
      for (const auto& h : rec.hops) {
        if (h.eve_payload_bits &&
            MajorityOf(*h.eve_payload_bits, cfg.redundancy) == rec.payload) {
          rec.eve_recovered = true;
        }
      }
      break;
    }
  }
  return rec;
}

std::vector<TrialRecord> RunTrials(const RunConfig& cfg) {
  Validate(cfg);
  std::vector<TrialRecord> out(cfg.trials);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(cfg.jobs, cfg.trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) out[t] = RunTrial(cfg, t);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < cfg.trials && !failed; t = next++) {
        try {
          out[t] = RunTrial(cfg, t);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string PayloadLabel(int hop) {
  switch (hop) {
    case 1: return "U_A(X)";
    case 2: return "U_B U_A(X)";
    case 3: return "U_B U_A(X)";
    case 4: return "U_A^dagger U_B U_A(X) = U_B(X)";
    default: return "?";
  }
}

void WriteTrace(const RunConfig& cfg, const std::vector<TrialRecord>& trials,
                std::ostream& out) {
  const bool mitm = cfg.adversary == AdversaryKind::kMitm;
  for (const auto& t : trials) {
    for (std::size_t i = 0; i < t.hops.size(); ++i) {
      const HopRecord& h = t.hops[i];
      Json ev;
      ev["schema"] = kTraceSchema;
      ev["event"] = "hop";
      ev["trial"] = t.trial;
      ev["hop"] = h.hop;
      ev["from"] = std::string(ToString(h.from));
      ev["to"] = std::string(ToString(h.to));
      ev["sender_clock_ms"] = h.sender_clock_ms;
      ev["sent_at_ms"] = h.sent_at_ms;
      ev["delivered_at_ms"] = h.delivered_at_ms;
      ev["auth"] = AuthJson(h.auth_bits);
      Json payload{{"qubits", h.payload_qubits},
                   {"state", h.substituted ? std::string("replayed frame")
                                           : mitm ? MitmLabel(h) : PayloadLabel(h.hop)}};
      if (h.payload_delivered) payload["amplitudes"] = AmplitudesJson(*h.payload_delivered);
      ev["payload"] = std::move(payload);
      ev["substituted"] = h.substituted;
      if (h.eve_payload_bits) ev["eve_observed"] = Bits(*h.eve_payload_bits);
      const bool last = i + 1 == t.hops.size();
      if (!mitm && last && t.abort && t.abort->step == h.hop) {
        ev["abort"] = AbortJson(*t.abort);
      }
      out << ev.dump() << '\n';
    }

    Json done;
    done["schema"] = kTraceSchema;
    done["event"] = "outcome";
    done["trial"] = t.trial;
    done["adversary"] = std::string(ToString(cfg.adversary));
    done["auth"] = cfg.auth;
    done["x"] = Bits(t.payload);
    if (t.recovered) {
      done["result"] = "recovered";
      done["bits"] = Bits(*t.recovered);
    } else if (t.abort) {
      done["result"] = "aborted";
      done["abort"] = AbortJson(*t.abort);
    } else {
      done["result"] = "completed";
    }
    if (t.qber) {
      done["qber"] = Json{{"compared", t.qber->compared},
                          {"mismatches", t.qber->mismatches},
                          {"rate", t.qber->rate}};
    }
    done["eve_recovered"] = t.eve_recovered;
    if (t.mitm) {
      const MitmOutcome& m = *t.mitm;
      done["alice_side_abort"] = m.alice_side_abort ? AbortJson(*m.alice_side_abort) : Json();
      done["bob_side_abort"] = m.bob_side_abort ? AbortJson(*m.bob_side_abort) : Json();
      done["bob_accepted_impostor"] = m.bob_accepted_impostor;
      if (m.eve_bits) done["eve_bits"] = Bits(*m.eve_bits);
    }
    out << done.dump() << '\n';
  }
}

Json BuildReport(const RunConfig& cfg, const std::vector<TrialRecord>& trials) {
  std::size_t recovered = 0, exact = 0, eve = 0;
  std::map<std::string, std::size_t> histogram;
  std::vector<double> rates;
  for (const auto& t : trials) {
    if (t.recovered) {
      ++recovered;
      if (*t.recovered == t.payload) ++exact;
    }
    if (t.abort) ++histogram[std::string(ToString(t.abort->reason))];
    if (t.qber) rates.push_back(t.qber->rate);
    if (t.eve_recovered) ++eve;
  }
  double mean = 0.0, var = 0.0;
  for (double r : rates) mean += r;
  if (!rates.empty()) mean /= static_cast<double>(rates.size());
  for (double r : rates) var += (r - mean) * (r - mean);
  if (!rates.empty()) var /= static_cast<double>(rates.size());

  Json report;
  report["schema"] = kReportSchema;
  report["config"] = Json{{"trials", cfg.trials},
                          {"seed", cfg.seed},
                          {"adversary", std::string(ToString(cfg.adversary))},
                          {"noise", cfg.noise},
                          {"redundancy", cfg.redundancy},
                          {"auth_redundancy", cfg.auth_redundancy},
                          {"bits", cfg.bits},
                          {"length", cfg.length},
                          {"window_ms", cfg.window_ms},
                          {"policy", cfg.policy == KeyMode::kRotationsOnly ? "rotations" : "mixed"},
                          {"auth", cfg.auth},
                          {"target_hop", EffectiveTargetHop(cfg)}};
  report["trials"] = trials.size();
  report["recovered"] = recovered;
  report["recovered_exact"] = exact;
  std::size_t aborted = 0;
  Json hist = Json::object();
  for (const auto& [reason, count] : histogram) {
    hist[reason] = count;
    aborted += count;
  }
  report["aborted"] = aborted;
  report["abort_histogram"] = std::move(hist);
  report["qber"] = Json{{"samples", rates.size()}, {"mean", mean}, {"stddev", std::sqrt(var)}};
  report["eve_recoveries"] = eve;
  report["insecure"] = !cfg.auth;
  return report;
}

}  // namespace tsqp::cli
