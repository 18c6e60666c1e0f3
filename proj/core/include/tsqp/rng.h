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
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace tsqp {

// The engine is fully specified by the standard, so sequences are identical
// across toolchains. Distributions are not, which is why the helpers below
// avoid std::uniform_*_distribution.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a list of labels
// (trial index, role, ...).
std::uint64_t DeriveSeed(std::uint64_t base,
                         std::initializer_list<std::uint64_t> labels) noexcept;

// Uniform double in [0, 1) with 53 bits of precision.
double UniformUnit(Rng& rng) noexcept;

// Uniform integer in [0, bound). bound must be nonzero.
std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound) noexcept;

void FillRandom(Rng& rng, std::span<std::uint8_t> out) noexcept;

}  // namespace tsqp
