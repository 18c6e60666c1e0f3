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

#include "tsqp/auth.h"

namespace tsqp {

/// Global simulated time in milliseconds. Only the channel advances it.
class SimulatedTime {
 public:
  explicit SimulatedTime(Timestamp start_ms = 0) noexcept : now_(start_ms) {}

  Timestamp now() const noexcept { return now_; }
  void Advance(std::uint64_t ms) noexcept { now_ += ms; }

 private:
  Timestamp now_;
};

/// A party's wall clock: simulated time plus a fixed skew. Skews are
/// independent per party; no synchronization is assumed between them.
class LocalClock final : public Clock {
 public:
  LocalClock(const SimulatedTime& time, std::int64_t skew_ms) noexcept
      : time_(&time), skew_ms_(skew_ms) {}

  Timestamp Now() const override {
    return static_cast<Timestamp>(static_cast<std::int64_t>(time_->now()) +
                                  skew_ms_);
  }

  std::int64_t skew_ms() const noexcept { return skew_ms_; }

 private:
  const SimulatedTime* time_;
  std::int64_t skew_ms_;
};

}  // namespace tsqp
