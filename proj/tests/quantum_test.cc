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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

namespace tsqp {
namespace {

constexpr double kPi = std::numbers::pi;

// Independent 2x2 matrix-vector product on plain arrays.
std::array<Amplitude, 2> MatVec(const Unitary2& u, Amplitude x0, Amplitude x1) {
  return {u(0, 0) * x0 + u(0, 1) * x1, u(1, 0) * x0 + u(1, 1) * x1};
}

TEST(QuantumTest, ApplyIdentityRotationLeavesZero) {
  const QubitState out = Apply(Unitary2::Rotation(0.0), QubitState::Zero());
  EXPECT_EQ(out, QubitState::Zero());
}

TEST(QuantumTest, PauliXFlipsBasis) {
  EXPECT_EQ(Apply(Unitary2::PauliX(), QubitState::Zero()), QubitState::One());
  EXPECT_EQ(Apply(Unitary2::PauliX(), QubitState::One()), QubitState::Zero());
}

TEST(QuantumTest, QuarterRotationMatchesDirectProduct) {
  const Unitary2 r = Unitary2::Rotation(kPi / 4);
  const auto expected = MatVec(r, 1.0, 0.0);
  const QubitState out = Apply(r, QubitState::Zero());
  EXPECT_NEAR(std::abs(out.alpha() - expected[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out.beta() - expected[1]), 0.0, 1e-12);
  EXPECT_NEAR(out.alpha().real(), 0.70710678118654752, 1e-12);
  EXPECT_NEAR(out.beta().real(), 0.70710678118654752, 1e-12);
}

TEST(QuantumTest, RejectsUnnormalizedAndNonFiniteStates) {
  EXPECT_THROW(QubitState(1.0, 1.0), QuantumError);
  EXPECT_THROW(QubitState(std::nan(""), 0.0), QuantumError);
  EXPECT_NO_THROW(QubitState(std::sqrt(0.5), Amplitude(0.0, std::sqrt(0.5))));
}

TEST(QuantumTest, RejectsNonUnitaryMatrix) {
  EXPECT_THROW(Unitary2(1.0, 1.0, 0.0, 1.0), QuantumError);
  EXPECT_THROW(Unitary2(2.0, 0.0, 0.0, 0.5), QuantumError);
  EXPECT_THROW(Unitary2::Rotation(INFINITY), QuantumError);
}

TEST(QuantumTest, MeasureBasisStatesIsDeterministic) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(Measure(QubitState::Zero(), rng).bit, 0);
    EXPECT_EQ(Measure(QubitState::One(), rng).bit, 1);
  }
}

TEST(QuantumTest, MeasureFollowsBornRule) {
  // cos^2(pi/4) = 0.5 exactly.
  const QubitState s = Apply(Unitary2::Rotation(kPi / 4), QubitState::Zero());
  Rng rng(20240601);
  int zeros = 0;
  constexpr int kTrials = 10000;
  for (int i = 0; i < kTrials; ++i) zeros += Measure(s, rng).bit == 0;
  const double freq = static_cast<double>(zeros) / kTrials;
  EXPECT_GE(freq, 0.48);
  EXPECT_LE(freq, 0.52);
}

TEST(QuantumTest, CollapsedStateRemeasuresToSameBit) {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const QubitState s = RandomState(rng);
    const MeasurementOutcome first = Measure(s, rng);
    EXPECT_EQ(first.collapsed, QubitState::Basis(first.bit));
    for (int k = 0; k < 3; ++k) EXPECT_EQ(Measure(first.collapsed, rng).bit, first.bit);
  }
}

TEST(QuantumTest, MeasurementSequenceIsSeedDeterministic) {
  Rng a(99), b(99), src(5);
  for (int i = 0; i < 500; ++i) {
    const QubitState s = RandomState(src);
    EXPECT_EQ(Measure(s, a).bit, Measure(s, b).bit);
  }
}

TEST(QuantumTest, InnerProductBasics) {
  EXPECT_EQ(InnerProduct(QubitState::Zero(), QubitState::Zero()), Amplitude(1.0));
  EXPECT_EQ(InnerProduct(QubitState::Zero(), QubitState::One()), Amplitude(0.0));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const QubitState s = RandomState(rng);
    EXPECT_NEAR(std::abs(InnerProduct(s, s) - Amplitude(1.0)), 0.0, 1e-12);
  }
}

TEST(QuantumTest, InnerProductIsConjugateLinearInFirstArgument) {
  const QubitState plus(std::sqrt(0.5), std::sqrt(0.5));
  const QubitState plus_i(std::sqrt(0.5), Amplitude(0.0, std::sqrt(0.5)));
  // <+|+i> = (1 + i)/2 and <+i|+> is its conjugate.
  const Amplitude ab = InnerProduct(plus, plus_i);
  EXPECT_NEAR(ab.real(), 0.5, 1e-12);
  EXPECT_NEAR(ab.imag(), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(InnerProduct(plus_i, plus) - std::conj(ab)), 0.0, 1e-12);
}

TEST(QuantumTest, DaggerOfHermitianFactorIsItself) {
  EXPECT_EQ(Dagger(Unitary2::PauliX()), Unitary2::PauliX());
  EXPECT_EQ(Dagger(Unitary2::PauliY()), Unitary2::PauliY());
  EXPECT_EQ(Dagger(Unitary2::PauliZ()), Unitary2::PauliZ());
}

TEST(QuantumTest, DaggerIsAnInvolutionAndInverse) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Unitary2 u = RandomUnitary(rng);
    EXPECT_EQ(Dagger(Dagger(u)), u);
    EXPECT_LE(MaxAbsDiff(Compose(Dagger(u), u), Unitary2::Identity()), 1e-9);
  }
}

TEST(QuantumTest, DaggerOfRotationIsNegativeAngle) {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const double theta = 2 * kPi * UniformUnit(rng) - kPi;
    // Transpose-conjugate of [[c,-s],[s,c]] written out by hand.
    const double c = std::cos(theta), s = std::sin(theta);
    const Unitary2 expected(c, s, -s, c);
    EXPECT_LE(MaxAbsDiff(Dagger(Unitary2::Rotation(theta)), expected), 1e-12);
    EXPECT_LE(MaxAbsDiff(Dagger(Unitary2::Rotation(theta)), Unitary2::Rotation(-theta)),
              1e-12);
  }
}

TEST(QuantumTest, ApplyPreservesNorm) {
  Rng rng(17);
  for (int i = 0; i < 5000; ++i) {
    const QubitState out = Apply(RandomUnitary(rng), RandomState(rng));
    EXPECT_NEAR(out.Norm(), 1.0, 1e-9);
  }
}

TEST(QuantumTest, ApplyPreservesInnerProducts) {
  Rng rng(19);
  for (int i = 0; i < 5000; ++i) {
    const Unitary2 u = RandomUnitary(rng);
    const QubitState psi = RandomState(rng);
    const QubitState phi = RandomState(rng);
    const Amplitude before = InnerProduct(psi, phi);
    const Amplitude after = InnerProduct(Apply(u, psi), Apply(u, phi));
    EXPECT_LT(std::abs(after - before), 1e-9);
  }
}

TEST(QuantumTest, RandomUnitaryIsUnitary) {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const Unitary2 u = RandomUnitary(rng);
    EXPECT_LE(MaxAbsDiff(Compose(u, Dagger(u)), Unitary2::Identity()), 1e-9);
  }
}

}  // namespace
}  // namespace tsqp
