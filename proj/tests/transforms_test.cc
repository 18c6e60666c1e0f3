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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

namespace tsqp {
namespace {

constexpr double kPi = std::numbers::pi;

SeparableTransform Slots(std::initializer_list<SlotFactor> f) {
  return SeparableTransform(std::vector<SlotFactor>(f));
}

TEST(TransformsTest, AsUnitaryOfZeroRotationIsIdentity) {
  EXPECT_EQ(SlotFactor::Rotation(0.0).AsUnitary(), Unitary2::Identity());
}

TEST(TransformsTest, AsUnitaryOfQuarterTurn) {
  const Unitary2 expected(0.0, -1.0, 1.0, 0.0);
  EXPECT_LE(MaxAbsDiff(SlotFactor::Rotation(kPi / 2).AsUnitary(), expected), 1e-12);
}

TEST(TransformsTest, AsUnitaryOfPaulis) {
  EXPECT_EQ(SlotFactor::PauliX().AsUnitary(), Unitary2(0.0, 1.0, 1.0, 0.0));
  EXPECT_EQ(SlotFactor::PauliY().AsUnitary(),
            Unitary2(0.0, Amplitude(0, -1), Amplitude(0, 1), 0.0));
  EXPECT_EQ(SlotFactor::PauliZ().AsUnitary(), Unitary2(1.0, 0.0, 0.0, -1.0));
  EXPECT_EQ(SlotFactor::Identity().AsUnitary(), Unitary2::Identity());
}

TEST(TransformsTest, RotationAngleIsReducedIntoOneTurn) {
  EXPECT_NEAR(SlotFactor::Rotation(5 * kPi / 2).theta(), kPi / 2, 1e-12);
  EXPECT_NEAR(SlotFactor::Rotation(-kPi / 2).theta(), 3 * kPi / 2, 1e-12);
  EXPECT_THROW(SlotFactor::Rotation(std::nan("")), TransformError);
}

TEST(TransformsTest, ComposeExamples) {
  Rng rng(1);
  const double theta = 2 * kPi * UniformUnit(rng);
  EXPECT_LE(MaxAbsDiff(Compose(SlotFactor::Rotation(theta), SlotFactor::Rotation(0.0)),
                       Unitary2::Rotation(theta)),
            1e-12);
  EXPECT_LE(MaxAbsDiff(Compose(SlotFactor::Rotation(kPi / 4), SlotFactor::Rotation(kPi / 4)),
                       Unitary2::Rotation(kPi / 2)),
            1e-12);
  EXPECT_EQ(Compose(SlotFactor::PauliX(), SlotFactor::PauliX()), Unitary2::Identity());
}

TEST(TransformsTest, RotationProductAddsAngles) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double a = 4 * kPi * UniformUnit(rng) - 2 * kPi;
    const double b = 4 * kPi * UniformUnit(rng) - 2 * kPi;
    const Unitary2 lhs = Compose(Unitary2::Rotation(a), Unitary2::Rotation(b));
    EXPECT_LE(MaxAbsDiff(lhs, Unitary2::Rotation(a + b)), 1e-12);
  }
}

TEST(TransformsTest, CommutesExamples) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_TRUE(Commutes(SlotFactor::Rotation(2 * kPi * UniformUnit(rng)),
                         SlotFactor::Rotation(2 * kPi * UniformUnit(rng))));
  }
  EXPECT_FALSE(Commutes(SlotFactor::PauliX(), SlotFactor::PauliY()));
  EXPECT_TRUE(Commutes(SlotFactor::PauliZ(), SlotFactor::PauliZ()));
}

TEST(TransformsTest, PauliXYCommutatorDiffersBySign) {
  // Brute-force oracle: XY = iZ and YX = -iZ.
  const Unitary2 xy = Compose(Unitary2::PauliX(), Unitary2::PauliY());
  const Unitary2 yx = Compose(Unitary2::PauliY(), Unitary2::PauliX());
  EXPECT_EQ(xy, Unitary2(Amplitude(0, 1), 0.0, 0.0, Amplitude(0, -1)));
  EXPECT_EQ(yx, Unitary2(Amplitude(0, -1), 0.0, 0.0, Amplitude(0, 1)));
}

TEST(TransformsTest, ValidateCommutingExamples) {
  Rng rng(4);
  const auto a = GenerateKey(6, {KeyMode::kRotationsOnly}, rng);
  const auto b = GenerateKey(6, {KeyMode::kRotationsOnly}, rng);
  EXPECT_TRUE(ValidateCommuting(a, b));

  const auto x = Slots({SlotFactor::PauliX(), SlotFactor::Identity(), SlotFactor::Identity()});
  const auto y = Slots({SlotFactor::PauliY(), SlotFactor::Identity(), SlotFactor::Identity()});
  EXPECT_FALSE(ValidateCommuting(x, y));

  const auto mixed = GenerateKey(8, {KeyMode::kMixedValidated}, rng);
  EXPECT_TRUE(ValidateCommuting(mixed, mixed));
}

TEST(TransformsTest, ValidateCommutingRejectsLengthMismatch) {
  Rng rng(5);
  EXPECT_THROW(ValidateCommuting(GenerateKey(3, {}, rng), GenerateKey(4, {}, rng)),
               TransformError);
}

TEST(TransformsTest, GenerateKeyRotationsOnly) {
  Rng rng(6);
  const auto key = GenerateKey(5, {KeyMode::kRotationsOnly}, rng);
  ASSERT_EQ(key.size(), 5u);
  for (const auto& f : key.factors()) {
    EXPECT_EQ(f.kind(), SlotFactor::Kind::kRotation);
    EXPECT_GE(f.theta(), 0.0);
    EXPECT_LT(f.theta(), 2 * kPi);
  }
}

TEST(TransformsTest, GenerateKeyRejectsZeroLength) {
  Rng rng(7);
  EXPECT_THROW(GenerateKey(0, {}, rng), TransformError);
  EXPECT_THROW(SeparableTransform({}), TransformError);
}

TEST(TransformsTest, GenerateKeyIsSeedDeterministic) {
  Rng a(8), b(8);
  EXPECT_EQ(GenerateKey(16, {KeyMode::kMixedValidated}, a),
            GenerateKey(16, {KeyMode::kMixedValidated}, b));
}

TEST(TransformsTest, MixedKeysUseEveryFactorKind) {
  Rng rng(9);
  const auto key = GenerateKey(500, {KeyMode::kMixedValidated}, rng);
  int counts[5] = {};
  for (const auto& f : key.factors()) ++counts[static_cast<int>(f.kind())];
  for (int c : counts) EXPECT_GT(c, 50);
}

TEST(TransformsTest, IndependentRotationKeysAlwaysCommute) {
  Rng rng(10);
  for (int i = 0; i < 10000; ++i) {
    const auto a = GenerateKey(4, {KeyMode::kRotationsOnly}, rng);
    const auto b = GenerateKey(4, {KeyMode::kRotationsOnly}, rng);
    ASSERT_TRUE(ValidateCommuting(a, b)) << "trial " << i;
  }
}

TEST(TransformsTest, DenseIdentityTensorRotationIsBlockDiagonal) {
  const double theta = 0.6180339887;
  const double c = std::cos(theta), s = std::sin(theta);
  // I (x) R(theta), written out entry by entry.
  const double expected[4][4] = {
      {c, -s, 0, 0},
      {s, c, 0, 0},
      {0, 0, c, -s},
      {0, 0, s, c},
  };
  const DenseMatrix m = Dense(Slots({SlotFactor::Identity(), SlotFactor::Rotation(theta)}));
  ASSERT_EQ(m.dim(), 4u);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t col = 0; col < 4; ++col) {
      EXPECT_EQ(m(r, col), Amplitude(expected[r][col])) << r << "," << col;
    }
  }
}

TEST(TransformsTest, DenseSingleIdentity) {
  const DenseMatrix m = Dense(Slots({SlotFactor::Identity()}));
  ASSERT_EQ(m.dim(), 2u);
  EXPECT_EQ(m(0, 0), Amplitude(1.0));
  EXPECT_EQ(m(0, 1), Amplitude(0.0));
  EXPECT_EQ(m(1, 0), Amplitude(0.0));
  EXPECT_EQ(m(1, 1), Amplitude(1.0));
}

TEST(TransformsTest, DenseXXMapsZeroZeroToOneOne) {
  const DenseMatrix m = Dense(Slots({SlotFactor::PauliX(), SlotFactor::PauliX()}));
  const std::vector<Amplitude> ket00 = {1.0, 0.0, 0.0, 0.0};
  const auto out = m * std::span<const Amplitude>(ket00);
  EXPECT_EQ(out, (std::vector<Amplitude>{0.0, 0.0, 0.0, 1.0}));
}

TEST(TransformsTest, DenseRefusesLargeRegisters) {
  Rng rng(11);
  EXPECT_NO_THROW(Dense(GenerateKey(kMaxDenseQubits, {}, rng)));
  EXPECT_THROW(Dense(GenerateKey(kMaxDenseQubits + 1, {}, rng)), TransformError);
}

TEST(TransformsTest, ApplySeparableIdentityLeavesRegister) {
  Rng rng(12);
  std::vector<QubitState> reg;
  for (int i = 0; i < 5; ++i) reg.push_back(RandomState(rng));
  const auto t = SeparableTransform(std::vector<SlotFactor>(5, SlotFactor::Identity()));
  const auto out = ApplySeparable(t, reg);
  for (std::size_t i = 0; i < reg.size(); ++i) {
    EXPECT_LT(std::abs(out[i].alpha() - reg[i].alpha()), 1e-12);
    EXPECT_LT(std::abs(out[i].beta() - reg[i].beta()), 1e-12);
  }
}

TEST(TransformsTest, ApplySeparableMatchesDenseOnZeroRegister) {
  Rng rng(13);
  const auto t = GenerateKey(3, {KeyMode::kRotationsOnly}, rng);
  const std::vector<QubitState> reg(3, QubitState::Zero());
  const auto factored = ProductState(ApplySeparable(t, reg));
  const auto dense = Dense(t) * std::span<const Amplitude>(ProductState(reg));
  ASSERT_EQ(factored.size(), dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    EXPECT_LT(std::abs(factored[i] - dense[i]), 1e-9);
  }
}

TEST(TransformsTest, ApplySeparableMatchesDenseOnRandomProductStates) {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + UniformIndex(rng, 4);
    const auto t = GenerateKey(n, {KeyMode::kMixedValidated}, rng);
    std::vector<QubitState> reg;
    for (std::size_t i = 0; i < n; ++i) reg.push_back(RandomState(rng));
    const auto factored = ProductState(ApplySeparable(t, reg));
    const auto dense = Dense(t) * std::span<const Amplitude>(ProductState(reg));
    for (std::size_t i = 0; i < dense.size(); ++i) {
      ASSERT_LT(std::abs(factored[i] - dense[i]), 1e-9);
    }
  }
}

TEST(TransformsTest, AdjointUndoesTransform) {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = GenerateKey(6, {KeyMode::kMixedValidated}, rng);
    std::vector<QubitState> reg;
    for (int i = 0; i < 6; ++i) reg.push_back(RandomState(rng));
    const auto back = ApplySeparable(t, ApplySeparable(t.Adjoint(), reg));
    for (std::size_t i = 0; i < reg.size(); ++i) {
      EXPECT_LT(std::abs(back[i].alpha() - reg[i].alpha()), 1e-9);
      EXPECT_LT(std::abs(back[i].beta() - reg[i].beta()), 1e-9);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_LE(MaxAbsDiff(Compose(t[i].Adjoint(), t[i]), Unitary2::Identity()), 1e-12);
    }
  }
}

TEST(TransformsTest, ApplySeparableRejectsLengthMismatch) {
  Rng rng(16);
  const std::vector<QubitState> reg(2);
  EXPECT_THROW(ApplySeparable(GenerateKey(3, {}, rng), reg), TransformError);
}

TEST(TransformsTest, SlotwiseCommutingImpliesDenseCommuting) {
  Rng rng(17);
  int validated = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + UniformIndex(rng, 4);
    const auto a = GenerateKey(n, {KeyMode::kMixedValidated}, rng);
    const auto b = GenerateKey(n, {KeyMode::kMixedValidated}, rng);
    const DenseMatrix da = Dense(a), db = Dense(b);
    const double gap = (da * db).MaxAbsDiff(db * da);
    if (ValidateCommuting(a, b)) {
      ++validated;
      EXPECT_LE(gap, 1e-12);
    }
  }
  EXPECT_GT(validated, 20);
}

}  // namespace
}  // namespace tsqp
