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

#include "tsqp/quantum.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tsqp {
namespace {

bool IsFinite(const Amplitude& z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Box-Muller on our own uniform source so results do not depend on the
// standard library's normal_distribution.
double StandardNormal(Rng& rng) {
  double u1 = UniformUnit(rng);
  while (u1 <= 0.0) u1 = UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

QubitState::QubitState(Amplitude alpha, Amplitude beta)
    : alpha_(alpha), beta_(beta) {
  if (!IsFinite(alpha) || !IsFinite(beta)) {
    throw QuantumError("qubit amplitude is not finite");
  }
  const double norm = Norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw QuantumError("qubit state is not normalized (norm " +
                       std::to_string(norm) + ")");
  }
}

QubitState QubitState::One() noexcept {
  return QubitState(Amplitude{0.0}, Amplitude{1.0}, Unchecked{});
}

QubitState QubitState::Basis(int bit) noexcept {
  return bit == 0 ? Zero() : One();
}

double QubitState::Norm() const noexcept {
  return std::sqrt(std::norm(alpha_) + std::norm(beta_));
}

Unitary2::Unitary2(Amplitude a, Amplitude b, Amplitude c, Amplitude d)
    : m_{a, b, c, d} {
  for (const auto& z : m_) {
    if (!IsFinite(z)) throw QuantumError("unitary entry is not finite");
  }
  const Unitary2 product = Compose(Dagger(*this), *this);
  if (MaxAbsDiff(product, Identity()) > kNormTolerance) {
    throw QuantumError("matrix is not unitary");
  }
}

Unitary2 Unitary2::PauliX() noexcept {
  return {0.0, 1.0, 1.0, 0.0, Unchecked{}};
}

Unitary2 Unitary2::PauliY() noexcept {
  return {0.0, Amplitude{0.0, -1.0}, Amplitude{0.0, 1.0}, 0.0, Unchecked{}};
}

Unitary2 Unitary2::PauliZ() noexcept {
  return {1.0, 0.0, 0.0, -1.0, Unchecked{}};
}

Unitary2 Unitary2::Rotation(double theta) {
  if (!std::isfinite(theta)) throw QuantumError("rotation angle is not finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, -s, s, c, Unchecked{}};
}

QubitState Renormalized(Amplitude alpha, Amplitude beta) {
  if (!IsFinite(alpha) || !IsFinite(beta)) {
    throw QuantumError("qubit amplitude is not finite");
  }
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (norm == 0.0) throw QuantumError("zero vector cannot be normalized");
  if (norm == 1.0) return QubitState(alpha, beta, QubitState::Unchecked{});
  return QubitState(alpha / norm, beta / norm, QubitState::Unchecked{});
}

QubitState Apply(const Unitary2& u, const QubitState& s) {
  return Renormalized(u.a() * s.alpha() + u.b() * s.beta(),
                      u.c() * s.alpha() + u.d() * s.beta());
}

QubitState FlipBit(const QubitState& s) noexcept {
  return QubitState(s.beta(), s.alpha(), QubitState::Unchecked{});
}

MeasurementOutcome Measure(const QubitState& s, Rng& rng) noexcept {
  const double p0 = s.ProbabilityZero();
  const int bit = UniformUnit(rng) < p0 ? 0 : 1;
  return {bit, QubitState::Basis(bit)};
}

Amplitude InnerProduct(const QubitState& s1, const QubitState& s2) noexcept {
  return std::conj(s1.alpha()) * s2.alpha() + std::conj(s1.beta()) * s2.beta();
}

Unitary2 Dagger(const Unitary2& u) noexcept {
  return {std::conj(u.a()), std::conj(u.c()), std::conj(u.b()),
          std::conj(u.d()), Unitary2::Unchecked{}};
}

Unitary2 Compose(const Unitary2& u, const Unitary2& v) noexcept {
  return {u.a() * v.a() + u.b() * v.c(), u.a() * v.b() + u.b() * v.d(),
          u.c() * v.a() + u.d() * v.c(), u.c() * v.b() + u.d() * v.d(),
          Unitary2::Unchecked{}};
}

double MaxAbsDiff(const Unitary2& u, const Unitary2& v) noexcept {
  double worst = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      worst = std::max(worst, std::abs(u(r, c) - v(r, c)));
    }
  }
  return worst;
}

Unitary2 RandomUnitary(Rng& rng) {
  // Haar measure via a global phase times an SU(2) element built from a
  // uniformly random unit quaternion.
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : q) {
      x = StandardNormal(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& x : q) x /= norm;
  const Amplitude p = Amplitude{q[0], q[1]};
  const Amplitude r = Amplitude{q[2], q[3]};
  const Amplitude phase =
      std::polar(1.0, 2.0 * std::numbers::pi * UniformUnit(rng));
  return Unitary2(phase * p, -phase * std::conj(r), phase * r,
                  phase * std::conj(p));
}

QubitState RandomState(Rng& rng) {
  double x[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : x) {
      v = StandardNormal(rng);
      norm += v * v;
    }
  } while (norm == 0.0);
  return Renormalized(Amplitude{x[0], x[1]}, Amplitude{x[2], x[3]});
}

}  // namespace tsqp
