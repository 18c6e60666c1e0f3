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
 * Single-qubit state vectors and 2x2 unitaries.
 *
 * Every transform used by the protocol is a tensor product of 2x2 factors,
 * so an n-qubit register evolves as n independent qubits. This header holds
 * the per-qubit math; see transforms.h for the n-slot algebra.
 */

#include <array>
#include <complex>
#include <stdexcept>

#include "tsqp/rng.h"

namespace tsqp {

using Amplitude = std::complex<double>;

/// Tolerance for normalization and unitarity checks.
inline constexpr double kNormTolerance = 1e-9;

class QuantumError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Normalized state alpha|0> + beta|1>.
class QubitState {
 public:
  /// |0>
  QubitState() noexcept = default;

  /// Throws QuantumError if an amplitude is not finite or the norm differs
  /// from one by more than kNormTolerance.
  QubitState(Amplitude alpha, Amplitude beta);

  static QubitState Zero() noexcept { return {}; }
  static QubitState One() noexcept;
  static QubitState Basis(int bit) noexcept;

  const Amplitude& alpha() const noexcept { return alpha_; }
  const Amplitude& beta() const noexcept { return beta_; }

  double Norm() const noexcept;

  /// Probability of reading 0 in the computational basis.
  double ProbabilityZero() const noexcept { return std::norm(alpha_); }

  /// Bitwise comparison of amplitudes.
  friend bool operator==(const QubitState&, const QubitState&) = default;

 private:
  struct Unchecked {};
  QubitState(Amplitude alpha, Amplitude beta, Unchecked) noexcept
      : alpha_(alpha), beta_(beta) {}

  friend QubitState Renormalized(Amplitude, Amplitude);
  friend QubitState FlipBit(const QubitState&) noexcept;

  Amplitude alpha_{1.0, 0.0};
  Amplitude beta_{0.0, 0.0};
};

/// Row-major 2x2 unitary [[a, b], [c, d]].
class Unitary2 {
 public:
  /// Identity.
  Unitary2() noexcept = default;

  /// Throws QuantumError unless U^dagger U = I entrywise within
  /// kNormTolerance and all entries are finite.
  Unitary2(Amplitude a, Amplitude b, Amplitude c, Amplitude d);

  static Unitary2 Identity() noexcept { return {}; }
  static Unitary2 PauliX() noexcept;
  static Unitary2 PauliY() noexcept;
  static Unitary2 PauliZ() noexcept;
  /// [[cos t, -sin t], [sin t, cos t]]
  static Unitary2 Rotation(double theta);

  const Amplitude& a() const noexcept { return m_[0]; }
  const Amplitude& b() const noexcept { return m_[1]; }
  const Amplitude& c() const noexcept { return m_[2]; }
  const Amplitude& d() const noexcept { return m_[3]; }

  /// Entry at (row, col).
  const Amplitude& operator()(int row, int col) const noexcept {
    return m_[static_cast<std::size_t>(2 * row + col)];
  }

  friend bool operator==(const Unitary2&, const Unitary2&) = default;

 private:
  struct Unchecked {};
  Unitary2(Amplitude a, Amplitude b, Amplitude c, Amplitude d,
           Unchecked) noexcept
      : m_{a, b, c, d} {}

  friend Unitary2 Dagger(const Unitary2&) noexcept;
  friend Unitary2 Compose(const Unitary2&, const Unitary2&) noexcept;

  std::array<Amplitude, 4> m_{Amplitude{1.0}, Amplitude{0.0}, Amplitude{0.0},
                              Amplitude{1.0}};
};

struct MeasurementOutcome {
  int bit = 0;
  QubitState collapsed;
};

/// Rescales (alpha, beta) to unit norm. Throws QuantumError on a zero or
/// non-finite vector.
QubitState Renormalized(Amplitude alpha, Amplitude beta);

/// u * s, renormalized to absorb rounding drift.
QubitState Apply(const Unitary2& u, const QubitState& s);

/// Pauli-X without renormalization; exact on amplitudes.
QubitState FlipBit(const QubitState& s) noexcept;

/// Computational-basis measurement; bit 0 with probability |alpha|^2.
MeasurementOutcome Measure(const QubitState& s, Rng& rng) noexcept;

/// <s1|s2>, conjugate-linear in s1.
Amplitude InnerProduct(const QubitState& s1, const QubitState& s2) noexcept;

/// Conjugate transpose.
Unitary2 Dagger(const Unitary2& u) noexcept;

/// Matrix product u * v (apply v first).
Unitary2 Compose(const Unitary2& u, const Unitary2& v) noexcept;

/// Largest entrywise |u - v|.
double MaxAbsDiff(const Unitary2& u, const Unitary2& v) noexcept;

/// Haar-random unitary and state, for property tests and benchmarks.
Unitary2 RandomUnitary(Rng& rng);
QubitState RandomState(Rng& rng);

}  // namespace tsqp
