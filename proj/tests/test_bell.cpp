// Copyright 2026 The limdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "limdet/bell.hpp"
#include "limdet/states.hpp"
#include "oracles.hpp"

namespace limdet {
namespace {

const double kTsirelson = 2 * std::numbers::sqrt2;
const double kSymmetricThreshold = 2 / (1 + std::numbers::sqrt2);

std::vector<double> both(double eta) { return {eta, eta}; }

BellExpression random_correlation(std::mt19937_64& rng, int parties) {
  std::uniform_real_distribution<double> coef(-2, 2);
  std::uniform_int_distribution<int> label(-1, 1);
  std::vector<BellTerm> terms;
  for (int t = 0; t < 6; ++t) {
    BellTerm term{coef(rng), {}, {}};
    for (int p = 0; p < parties; ++p) {
      const int l = label(rng);
      term.settings.push_back(l < 0 ? kAbsent : l);
    }
    terms.push_back(term);
  }
  return BellExpression("random", parties, 2, BellForm::Correlation, terms);
}

TEST(Preset, ChshBoundIsTwo) {
  const auto chsh = preset(BellPreset::Chsh);
  EXPECT_EQ(lhv_bound(chsh), 2.0);
  EXPECT_EQ(chsh.bound(), 2.0);
  EXPECT_EQ(chsh.form(), BellForm::Correlation);
}

TEST(Preset, EberhardBoundIsZero) {
  const auto ch = preset(BellPreset::EberhardCh);
  EXPECT_EQ(lhv_bound(ch), 0.0);
  EXPECT_EQ(ch.form(), BellForm::Probability);
  EXPECT_FALSE(ch.uses_no_click());
  EXPECT_EQ(bell_preset_from_string("EBERHARD_CH"), BellPreset::EberhardCh);
  EXPECT_THROW(bell_preset_from_string("MERMIN"), InvalidArgument);
}

TEST(LhvBound, ZeroAndAllPositive) {
  std::vector<BellTerm> zero{{0.0, {0, 0}, {}}, {0.0, {1, 1}, {}}};
  EXPECT_EQ(lhv_bound(BellExpression("zero", 2, 2, BellForm::Correlation, zero)), 0.0);
  std::vector<BellTerm> pos{{1, {0, 0}, {}}, {1, {0, 1}, {}}, {1, {1, 0}, {}}, {1, {1, 1}, {}}};
  EXPECT_EQ(lhv_bound(BellExpression("pos", 2, 2, BellForm::Correlation, pos)), 4.0);
}

TEST(LhvBound, MatchesRecursiveOracle) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 30; ++i) {
    const auto e = random_correlation(rng, 2 + i % 3);
    EXPECT_NEAR(lhv_bound(e), oracle::lhv_bound(e), 1e-12);
  }
  const auto ch = preset(BellPreset::EberhardCh);
  EXPECT_NEAR(lhv_bound(ch), oracle::lhv_bound(ch), 1e-12);
}

TEST(LhvBound, SizeLimits) {
  std::vector<BellTerm> big{{1.0, std::vector<int>(7, 0), {}}};
  EXPECT_THROW(lhv_bound(BellExpression("big", 7, 2, BellForm::Correlation, big, 1.0)), InvalidArgument);
  std::vector<BellTerm> three{{1.0, {2, 0}, {}}};
  EXPECT_THROW(BellExpression("three", 2, 3, BellForm::Correlation, three), InvalidArgument);
}

TEST(Expression, Validation) {
  EXPECT_THROW(BellExpression("bad", 2, 2, BellForm::Correlation, {{1.0, {0, 2}, {}}}), InvalidArgument);
  EXPECT_THROW(BellExpression("bad", 2, 2, BellForm::Correlation, {{1.0, {0}, {}}}), InvalidArgument);
  EXPECT_THROW(BellExpression("bad", 2, 2, BellForm::Probability, {{1.0, {0, 0}, {}}}), InvalidArgument);
  EXPECT_THROW(BellExpression("bad", 2, 2, BellForm::Correlation, {{1.0, {0, 0}, {}}}, 3.0), InvalidArgument);
}

TEST(QuantumValue, ProductStateStaysLocal) {
  const DensityMatrix rho(PureState::basis(std::vector<int>{0, 0}));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.2, 3.2);
  for (int i = 0; i < 20; ++i) {
    const SettingsAssignment s{{{u(rng), u(rng)}, {u(rng), u(rng)}}, {{u(rng), u(rng)}, {u(rng), u(rng)}}};
    EXPECT_LE(quantum_value(preset(BellPreset::Chsh), rho, s, both(1.0), Convention::Fold), 2.0 + 1e-9);
  }
}

TEST(QuantumValue, RandomProductStatesNeverExceedBound) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.2, 3.2);
  for (int i = 0; i < 20; ++i) {
    const auto a = PureState(MeasurementSetting{u(rng), u(rng)}.ket<double>());
    const auto b = PureState(MeasurementSetting{u(rng), u(rng)}.ket<double>());
    const DensityMatrix rho(tensor(a, b));
    const SettingsAssignment s{{{u(rng), u(rng)}, {u(rng), u(rng)}}, {{u(rng), u(rng)}, {u(rng), u(rng)}}};
    const auto e = random_correlation(rng, 2);
    EXPECT_LE(quantum_value(e, rho, s, both(1.0), Convention::Fold), e.bound() + 1e-9);
    const auto ch = preset(BellPreset::EberhardCh);
    EXPECT_LE(quantum_value(ch, rho, s, both(u(rng) / 3.2 * 0.5 + 0.5), Convention::Trinary), 1e-9);
  }
}

TEST(QuantumValue, ChshSeedOnBellPair) {
  const DensityMatrix rho(make_state(StateSpec::bell_phi_plus()));
  const auto chsh = preset(BellPreset::Chsh);
  EXPECT_NEAR(quantum_value(chsh, rho, chsh_seed_settings(), both(1.0), Convention::Fold), kTsirelson, 1e-12);
  EXPECT_NEAR(quantum_value(chsh, rho, chsh_seed_settings(), both(kSymmetricThreshold), Convention::Fold), 2.0,
              1e-12);
}

TEST(QuantumValue, AllBlindGivesAllMinusPoint) {
  const DensityMatrix rho(make_state(StateSpec::ghz(2)));
  const auto chsh = preset(BellPreset::Chsh);
  EXPECT_NEAR(quantum_value(chsh, rho, chsh_seed_settings(), both(0.0), Convention::Fold), 2.0, 1e-12);
}

TEST(QuantumValue, AffineInEachEta) {
  const DensityMatrix rho(make_state(StateSpec::partial_pair(0.5)));
  const SettingsAssignment s{{{0.2, 0}, {1.4, 0}}, {{0.7, 0}, {-0.5, 0}}};
  const auto chsh = preset(BellPreset::Chsh);
  auto q = [&](double a) { return quantum_value(chsh, rho, s, std::vector<double>{a, 0.8}, Convention::Fold); };
  EXPECT_NEAR(q(0.6) - q(0.2), 2 * (q(0.4) - q(0.2)), 1e-10);
}

TEST(QuantumValue, Errors) {
  const DensityMatrix rho(make_state(StateSpec::ghz(3)));
  EXPECT_THROW(quantum_value(preset(BellPreset::Chsh), rho, chsh_seed_settings(), both(1.0), Convention::Fold),
               DimensionError);
  const DensityMatrix bell(make_state(StateSpec::bell_phi_plus()));
  EXPECT_THROW(quantum_value(preset(BellPreset::Chsh), bell, chsh_seed_settings(), both(1.0), Convention::Trinary),
               InvalidArgument);
}

TEST(Optimize, TsirelsonPoint) {
  const DensityMatrix rho(make_state(StateSpec::bell_phi_plus()));
  const auto best = optimize_settings(preset(BellPreset::Chsh), rho, both(1.0), Convention::Fold);
  EXPECT_NEAR(best.value, kTsirelson, 1e-6);
  EXPECT_EQ(best.starts, 65);
}

TEST(Optimize, ProductStateSaturatesClassicalBound) {
  const DensityMatrix rho(PureState::basis(std::vector<int>{0, 0}));
  const auto best = optimize_settings(preset(BellPreset::Chsh), rho, both(1.0), Convention::Fold);
  EXPECT_NEAR(best.value, 2.0, 1e-6);
}

TEST(Optimize, NoViolationBelowThreshold) {
  const DensityMatrix rho(make_state(StateSpec::bell_phi_plus()));
  const auto best = optimize_settings(preset(BellPreset::Chsh), rho, both(0.5), Convention::Fold);
  EXPECT_LT(best.value, 2.0);
}

TEST(Optimize, NeverBelowSeed) {
  const DensityMatrix rho(make_state(StateSpec::partial_pair(0.2)));
  const auto chsh = preset(BellPreset::Chsh);
  OptimizerOptions opts;
  opts.restarts = 4;
  const auto best = optimize_settings(chsh, rho, both(0.9), Convention::Fold, opts);
  EXPECT_GE(best.value, quantum_value(chsh, rho, chsh_seed_settings(), both(0.9), Convention::Fold) - 1e-12);
}

TEST(Optimize, DeterministicForSeed) {
  const DensityMatrix rho(make_state(StateSpec::partial_pair(0.3)));
  OptimizerOptions opts;
  opts.restarts = 8;
  const auto a = optimize_settings(preset(BellPreset::Chsh), rho, both(0.95), Convention::Fold, opts);
  const auto b = optimize_settings(preset(BellPreset::Chsh), rho, both(0.95), Convention::Fold, opts);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.settings, b.settings);
}

TEST(Optimize, AgreesWithAngleGrid) {
  const auto rho = add_white_noise(make_state(StateSpec::partial_pair(0.35)), 0.9);
  const auto best = optimize_settings(preset(BellPreset::Chsh), rho, both(1.0), Convention::Fold);
  const double grid = oracle::chsh_grid_max(rho, 2);
  EXPECT_GE(best.value, grid - 1e-12);
  EXPECT_NEAR(best.value, grid, 5e-3);
}

TEST(Optimize, FreePhaseReachesHorodeckiValue) {
  // T = diag(2/3, 2/3, -1/3): the two strong axes are x and y.
  const auto psi = make_state(StateSpec::bell_psi_plus());
  const CMatrix<double> m = 2.0 / 3 * psi.projector() + 1.0 / 3 * PureState::basis(std::vector<int>{0, 0}).projector();
  const DensityMatrix rho(m);
  OptimizerOptions opts;
  opts.free_phase = true;
  const auto best = optimize_settings(preset(BellPreset::Chsh), rho, both(1.0), Convention::Fold, opts);
  EXPECT_NEAR(best.value, oracle::chsh_horodecki(rho), 1e-6);
  EXPECT_NEAR(best.value, 2 * std::sqrt(8.0) / 3, 1e-6);
}

TEST(Eberhard, TrinaryValueOnWeakPairIsPositiveAboveTwoThirds) {
  const DensityMatrix rho(make_state(StateSpec::partial_pair(0.1)));
  const auto best = optimize_settings(preset(BellPreset::EberhardCh), rho, both(0.75), Convention::Trinary);
  EXPECT_GT(best.value, 0.0);
  const auto low = optimize_settings(preset(BellPreset::EberhardCh), rho, both(0.6), Convention::Trinary);
  EXPECT_LE(low.value, 1e-9);
}

}  // namespace
}  // namespace limdet
