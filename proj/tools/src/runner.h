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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsqp/attacks.h"
#include "tsqp/channel.h"
#include "tsqp/parties.h"

namespace tsqp::cli {

inline constexpr const char* kTraceSchema = "tsqp.trace/1";
inline constexpr const char* kReportSchema = "tsqp.report/1";

/// Raised for any configuration the runner refuses before starting.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  AdversaryKind adversary = AdversaryKind::kNone;
  double noise = 0.0;
  unsigned redundancy = kDefaultPayloadRedundancy;
  unsigned auth_redundancy = kDefaultAuthRedundancy;
  // Fixed message; when empty each trial draws `length` random bits.
  std::string bits;
  std::size_t length = 16;
  std::uint64_t window_ms = kDefaultWindowMs;
  KeyMode policy = KeyMode::kRotationsOnly;
  bool auth = true;
  bool dump_amplitudes = false;
  // 0 picks the adversary's default hop.
  int target_hop = 0;
  // Unset means one full window.
  std::optional<std::uint64_t> delay_ms;
  unsigned jobs = 1;
};

// Throws ConfigError.
void Validate(const RunConfig& cfg);

// Hop the adversary acts on when the config leaves it at 0.
int EffectiveTargetHop(const RunConfig& cfg);

struct TrialRecord {
  std::size_t trial = 0;
  BitString payload;
  std::vector<HopRecord> hops;
  std::optional<BitString> recovered;
  std::optional<Aborted> abort;
  std::optional<QberReport> qber;
  bool eve_recovered = false;
  // Impersonation runs only.
  std::optional<MitmOutcome> mitm;
};

TrialRecord RunTrial(const RunConfig& cfg, std::size_t trial);

// Trials run on cfg.jobs threads; the result is ordered by trial index.
std::vector<TrialRecord> RunTrials(const RunConfig& cfg);

// One JSON object per hop, then one outcome object, per trial.
void WriteTrace(const RunConfig& cfg, const std::vector<TrialRecord>& trials,
                std::ostream& out);

nlohmann::ordered_json BuildReport(const RunConfig& cfg,
                                   const std::vector<TrialRecord>& trials);

// Symbolic payload content of an honest hop, e.g. "U_B U_A(X)".
std::string PayloadLabel(int hop);

}  // namespace tsqp::cli
