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
#include <span>
#include <stdexcept>
#include <vector>

#include "tsqp/quantum.h"
#include "tsqp/rng.h"

namespace tsqp {

/// Entrywise tolerance for commutator checks.
inline constexpr double kCommuteTolerance = 1e-12;

/// Largest register the dense oracle will materialize (2^10 amplitudes).
inline constexpr std::size_t kMaxDenseQubits = 10;

class TransformError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One 2x2 factor of a separable transform.
class SlotFactor {
 public:
  enum class Kind { kIdentity, kRotation, kPauliX, kPauliY, kPauliZ };

  SlotFactor() noexcept = default;

  static SlotFactor Identity() noexcept { return {}; }
  /// theta is reduced into [0, 2*pi). Throws TransformError if not finite.
  static SlotFactor Rotation(double theta);
  static SlotFactor PauliX() noexcept { return SlotFactor(Kind::kPauliX, 0.0); }
  static SlotFactor PauliY() noexcept { return SlotFactor(Kind::kPauliY, 0.0); }
  static SlotFactor PauliZ() noexcept { return SlotFactor(Kind::kPauliZ, 0.0); }

  Kind kind() const noexcept { return kind_; }
  /// Rotation angle; zero for the other kinds.
  double theta() const noexcept { return theta_; }

  Unitary2 AsUnitary() const;

  /// Inverse factor. Rotations negate their angle; Paulis are self-inverse.
  SlotFactor Adjoint() const;

  friend bool operator==(const SlotFactor&, const SlotFactor&) = default;

 private:
  SlotFactor(Kind kind, double theta) noexcept : kind_(kind), theta_(theta) {}

  Kind kind_ = Kind::kIdentity;
  double theta_ = 0.0;
};

/// Tensor product of n slot factors; slot 0 is the leftmost factor and acts
/// on qubit 0. This is a party's secret key for the three-pass exchange.
class SeparableTransform {
 public:
  /// Throws TransformError if factors is empty.
  explicit SeparableTransform(std::vector<SlotFactor> factors);

  std::size_t size() const noexcept { return factors_.size(); }
  const SlotFactor& operator[](std::size_t i) const { return factors_[i]; }
  std::span<const SlotFactor> factors() const noexcept { return factors_; }

  /// Slotwise adjoint, i.e. the inverse of the full 2^n transform.
  SeparableTransform Adjoint() const;

  friend bool operator==(const SeparableTransform&,
                         const SeparableTransform&) = default;

 private:
  std::vector<SlotFactor> factors_;
};

enum class KeyMode {
  /// Uniform rotation angles in [0, 2*pi); any two keys commute.
  kRotationsOnly,
  /// Uniform choice among rotation, identity and the three Paulis. Keys may
  /// fail to commute and must pass ValidateCommuting before use.
  kMixedValidated,
};

struct KeyPolicy {
  KeyMode mode = KeyMode::kRotationsOnly;
};

/// u * v for the two slot unitaries.
Unitary2 Compose(const SlotFactor& a, const SlotFactor& b);

bool Commutes(const SlotFactor& a, const SlotFactor& b);

/// True iff every slot pair commutes, which is sufficient for the tensor
/// products to commute. Throws TransformError on a length mismatch.
bool ValidateCommuting(const SeparableTransform& a,
                       const SeparableTransform& b);

/// Throws TransformError if n == 0.
SeparableTransform GenerateKey(std::size_t n, KeyPolicy policy, Rng& rng);

/// Applies slot i to qubit i. Throws TransformError on a length mismatch.
std::vector<QubitState> ApplySeparable(const SeparableTransform& t,
                                       std::span<const QubitState> reg);

/// Dense square complex matrix, row-major. Test oracle only.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  Amplitude& operator()(std::size_t r, std::size_t c) {
    return data_[r * dim_ + c];
  }
  const Amplitude& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }

  friend DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);
  std::vector<Amplitude> operator*(std::span<const Amplitude> v) const;

  double MaxAbsDiff(const DenseMatrix& other) const;

 private:
  std::size_t dim_;
  std::vector<Amplitude> data_;
};

/// Kronecker product lhs (x) rhs.
DenseMatrix Kron(const DenseMatrix& lhs, const DenseMatrix& rhs);

/// Left-to-right tensor product of the slot unitaries. Throws TransformError
/// if the transform has more than kMaxDenseQubits slots.
DenseMatrix Dense(const SeparableTransform& t);

/// Amplitudes of the product state q0 (x) q1 (x) ... with qubit 0 as the most
/// significant index bit. Throws TransformError beyond kMaxDenseQubits.
std::vector<Amplitude> ProductState(std::span<const QubitState> reg);

}  // namespace tsqp
