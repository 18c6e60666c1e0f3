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

#include "tsqp/rng.h"

namespace tsqp {

std::uint64_t DeriveSeed(std::uint64_t base,
                         std::initializer_list<std::uint64_t> labels) noexcept {
  std::uint64_t h = Mix64(base);
  for (std::uint64_t label : labels) {
    h = Mix64(h ^ Mix64(label + 0x632be59bd9b4e019ULL));
  }
  return h;
}

double UniformUnit(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound) noexcept {
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = Rng::max() - (Rng::max() % bound);
  std::uint64_t v = 0;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

void FillRandom(Rng& rng, std::span<std::uint8_t> out) noexcept {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = rng();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
}

}  // namespace tsqp
