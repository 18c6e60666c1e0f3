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

#include "tsqp/transforms.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tsqp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ReduceAngle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

DenseMatrix ToDense(const Unitary2& u) {
  DenseMatrix m(2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = u(r, c);
    }
  }
  return m;
}

}  // namespace

SlotFactor SlotFactor::Rotation(double theta) {
  if (!std::isfinite(theta)) {
    throw TransformError("rotation angle is not finite");
  }
  return SlotFactor(Kind::kRotation, ReduceAngle(theta));
}

Unitary2 SlotFactor::AsUnitary() const {
  switch (kind_) {
    case Kind::kIdentity:
      return Unitary2::Identity();
    case Kind::kRotation:
      return Unitary2::Rotation(theta_);
    case Kind::kPauliX:
      return Unitary2::PauliX();
    case Kind::kPauliY:
      return Unitary2::PauliY();
    case Kind::kPauliZ:
      return Unitary2::PauliZ();
  }
  return Unitary2::Identity();
}

SlotFactor SlotFactor::Adjoint() const {
  if (kind_ == Kind::kRotation) return Rotation(-theta_);
  return *this;
}

SeparableTransform::SeparableTransform(std::vector<SlotFactor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw TransformError("separable transform needs at least one slot");
  }
}

SeparableTransform SeparableTransform::Adjoint() const {
  std::vector<SlotFactor> inv;
  inv.reserve(factors_.size());
  for (const auto& f : factors_) inv.push_back(f.Adjoint());
  return SeparableTransform(std::move(inv));
}

Unitary2 Compose(const SlotFactor& a, const SlotFactor& b) {
  return Compose(a.AsUnitary(), b.AsUnitary());
}

bool Commutes(const SlotFactor& a, const SlotFactor& b) {
  return MaxAbsDiff(Compose(a, b), Compose(b, a)) <= kCommuteTolerance;
}

bool ValidateCommuting(const SeparableTransform& a,
                       const SeparableTransform& b) {
  if (a.size() != b.size()) {
    throw TransformError("incompatible keys: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + " slots");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!Commutes(a[i], b[i])) return false;
  }
  return true;
}

SeparableTransform GenerateKey(std::size_t n, KeyPolicy policy, Rng& rng) {
  if (n == 0) throw TransformError("key length must be at least one qubit");
  std::vector<SlotFactor> factors;
  factors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (policy.mode == KeyMode::kRotationsOnly) {
      factors.push_back(SlotFactor::Rotation(kTwoPi * UniformUnit(rng)));
      continue;
    }
    switch (UniformIndex(rng, 5)) {
      case 0:
        factors.push_back(SlotFactor::Rotation(kTwoPi * UniformUnit(rng)));
        break;
      case 1:
        factors.push_back(SlotFactor::Identity());
        break;
      case 2:
        factors.push_back(SlotFactor::PauliX());
        break;
      case 3:
        factors.push_back(SlotFactor::PauliY());
        break;
      default:
        factors.push_back(SlotFactor::PauliZ());
        break;
    }
  }
  return SeparableTransform(std::move(factors));
}

std::vector<QubitState> ApplySeparable(const SeparableTransform& t,
                                       std::span<const QubitState> reg) {
  if (t.size() != reg.size()) {
    throw TransformError("transform has " + std::to_string(t.size()) +
                         " slots but register has " +
                         std::to_string(reg.size()) + " qubits");
  }
  std::vector<QubitState> out;
  out.reserve(reg.size());
  for (std::size_t i = 0; i < reg.size(); ++i) {
    out.push_back(Apply(t[i].AsUnitary(), reg[i]));
  }
  return out;
}

DenseMatrix::DenseMatrix(std::size_t dim)
    : dim_(dim), data_(dim * dim, Amplitude{0.0}) {}

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.dim_ != rhs.dim_) throw TransformError("dimension mismatch");
  const std::size_t n = lhs.dim_;
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Amplitude a = lhs(i, k);
      if (a == Amplitude{0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

std::vector<Amplitude> DenseMatrix::operator*(
    std::span<const Amplitude> v) const {
  if (v.size() != dim_) throw TransformError("dimension mismatch");
  std::vector<Amplitude> out(dim_, Amplitude{0.0});
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

double DenseMatrix::MaxAbsDiff(const DenseMatrix& other) const {
  if (dim_ != other.dim_) throw TransformError("dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  }
  return worst;
}

DenseMatrix Kron(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  const std::size_t m = lhs.dim();
  const std::size_t n = rhs.dim();
  DenseMatrix out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          out(i * n + k, j * n + l) = lhs(i, j) * rhs(k, l);
        }
      }
    }
  }
  return out;
}

DenseMatrix Dense(const SeparableTransform& t) {
  if (t.size() > kMaxDenseQubits) {
    throw TransformError("dense oracle limited to " +
                         std::to_string(kMaxDenseQubits) + " qubits");
  }
  DenseMatrix out = ToDense(t[0].AsUnitary());
  for (std::size_t i = 1; i < t.size(); ++i) {
    out = Kron(out, ToDense(t[i].AsUnitary()));
  }
  return out;
}

std::vector<Amplitude> ProductState(std::span<const QubitState> reg) {
  if (reg.size() > kMaxDenseQubits) {
    throw TransformError("dense oracle limited to " +
                         std::to_string(kMaxDenseQubits) + " qubits");
  }
  std::vector<Amplitude> out{Amplitude{1.0}};
  for (const auto& q : reg) {
    std::vector<Amplitude> next;
    next.reserve(out.size() * 2);
    for (const auto& amp : out) {
      next.push_back(amp * q.alpha());
      next.push_back(amp * q.beta());
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace tsqp
