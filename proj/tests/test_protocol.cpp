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

#include "limdet/protocol.hpp"
#include "oracles.hpp"

namespace limdet {
namespace {

const double kThreshold = 2 / (1 + std::numbers::sqrt2);
const double kInvSqrt2 = 1 / std::numbers::sqrt2;

ScenarioConfig ghz_scenario(int n, double eta_low, double eta_high) {
  ScenarioConfig c;
  c.state = StateSpec::ghz(n);
  c.n = n;
  c.k = 2;
  c.eta_low = Efficiency(eta_low);
  c.eta_high = Efficiency(eta_high);
  return c;
}

OptimizerOptions quick() {
  OptimizerOptions o;
  o.restarts = 16;
  return o;
}

TEST(Config, Validation) {
  auto c = ghz_scenario(4, 0.1, 1.0);
  EXPECT_NO_THROW(c.validate());
  c.k = 5;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ghz_scenario(4, 0.1, 1.0);
  c.n = 5;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ghz_scenario(4, 0.1, 1.0);
  c.projectors = std::vector<MeasurementSetting>{MeasurementSetting::plus()};
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ghz_scenario(4, 0.1, 1.0);
  c.visibility = 1.1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = ghz_scenario(4, 0.1, 1.0);
  c.bell = preset(BellPreset::EberhardCh);
  c.convention = Convention::Fold;
  EXPECT_NO_THROW(c.validate());
  c.bell = preset(BellPreset::Chsh);
  c.convention = Convention::Trinary;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(DefaultProjectors, Choices) {
  EXPECT_EQ(default_projectors(StateSpec::ghz(5), 2, 0), std::vector<MeasurementSetting>(3, MeasurementSetting::plus()));
  EXPECT_EQ(default_projectors(StateSpec::cluster4(), 2, 0),
            (std::vector<MeasurementSetting>{MeasurementSetting::plus(), MeasurementSetting::zero()}));
  EXPECT_EQ(default_projectors(StateSpec::cluster4(), 2, 1), std::vector<MeasurementSetting>{MeasurementSetting::zero()});
  EXPECT_EQ(default_projectors(StateSpec::dicke(4, 2), 2, 0),
            (std::vector<MeasurementSetting>{MeasurementSetting::one(), MeasurementSetting::zero()}));
  EXPECT_EQ(default_projectors(StateSpec::w(4), 2, 0), std::vector<MeasurementSetting>(2, MeasurementSetting::zero()));
}

TEST(ProjectedState, Ghz4PlusPlus) {
  const auto p = projected_state(ghz_scenario(4, 1, 1));
  ASSERT_EQ(p.weights.size(), 2u);
  EXPECT_NEAR(p.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(p.weights[1], 0.5, 1e-12);
  EXPECT_NEAR(p.state.overlap(make_state(StateSpec::bell_phi_plus())), 1.0, 1e-12);
}

TEST(ProjectedState, TiltedFirstProjectorGivesPartialPair) {
  for (int n = 3; n <= 5; ++n) {
    auto c = ghz_scenario(n, 1, 1);
    auto proj = default_projectors(c.state, 2, 0);
    proj[0] = MeasurementSetting::real_superposition(0.3);
    c.projectors = proj;
    const auto p = projected_state(c);
    EXPECT_NEAR(p.state.overlap(make_state(StateSpec::partial_pair(0.3))), 1.0, 1e-12) << n;
  }
}

TEST(ProjectedState, OrthogonalProjectorThrows) {
  const DensityMatrix rho(PureState::basis(std::vector<int>{0, 0, 0}));
  const std::vector<MeasurementSetting> one{MeasurementSetting::one()};
  EXPECT_THROW(project_sequence(rho, one), ZeroProjection);
}

TEST(ProjectedState, SequentialWeightsMatchCombinedProjector) {
  auto c = ghz_scenario(5, 1, 1);
  c.state = StateSpec::dicke(5, 2);
  c.projectors = std::vector<MeasurementSetting>{{0.4, 0.3}, {1.2, -0.7}, {2.0, 0.1}};
  const auto p = projected_state(c);
  const auto& proj = *c.projectors;
  const CMatrix<double> combined =
      kron<double>(kron<double>(proj[0].plus_projector<double>(), proj[1].plus_projector<double>()),
                   proj[2].plus_projector<double>());
  const DensityMatrix rho(make_state(c.state));
  const double single = expectation(rho, LocalOperator<double>{{0, 1, 2}, combined});
  EXPECT_NEAR(p.total_weight(), single, 1e-12);
}

TEST(CompositeLhs, Ghz4Examples) {
  const double expected = 0.01 * 0.25 * (2 * std::numbers::sqrt2 - 2);
  EXPECT_NEAR(composite_lhs(ghz_scenario(4, 0.1, 1.0), quick()).lhs, expected, 1e-9);
  EXPECT_NEAR(composite_lhs(ghz_scenario(4, 0.1, kThreshold), quick()).lhs, 0.0, 1e-9);
}

TEST(CompositeLhs, MaximallyMixedIsLocal) {
  auto c = ghz_scenario(4, 0.5, 1.0);
  c.visibility = 0.0;
  EXPECT_LE(composite_lhs(c, quick()).lhs, 1e-12);
}

TEST(CompositeLhs, SignIndependentOfLowEfficiency) {
  for (double eta_high : {0.95, 0.8}) {
    const bool positive = composite_lhs(ghz_scenario(4, 1.0, eta_high), quick()).lhs > 0;
    for (double eta_low : {1e-3, 1e-1}) {
      EXPECT_EQ(composite_lhs(ghz_scenario(4, eta_low, eta_high), quick()).lhs > 0, positive);
    }
  }
}

// With both Bell parties dressed alike the CHSH value at fixed settings is
// 2√2 eta^2 + 2 (1 - eta)^2: convex, equal to the bound at eta = 0 and
// increasing only above eta = 1/(1+√2).
TEST(CompositeLhs, QuantumValueAtFixedSettingsIsConvexInEta) {
  auto c = ghz_scenario(4, 0.1, 1.0);
  c.settings = chsh_seed_settings();
  const double turn = 1 / (1 + std::numbers::sqrt2);
  double previous = -1e9;
  for (double eta = 0.0; eta <= 1.0 + 1e-12; eta += 0.05) {
    c.eta_high = Efficiency(std::min(eta, 1.0));
    const double v = composite_lhs(c).quantum_value;
    EXPECT_NEAR(v, 2 * std::numbers::sqrt2 * eta * eta + 2 * (1 - eta) * (1 - eta), 1e-12);
    if (eta > turn) EXPECT_GE(v, previous - 1e-12);
    if (eta <= kThreshold) EXPECT_LE(v, 2.0 + 1e-12);
    previous = v;
  }
}

TEST(CriticalEta, GhzAndDicke) {
  const auto ghz = critical_eta_high(ghz_scenario(4, 0.1, 1.0), quick());
  ASSERT_TRUE(ghz.found());
  EXPECT_NEAR(ghz.critical_value, kThreshold, 1e-6);
  EXPECT_LT(std::abs(ghz.residual), 1e-9);
  EXPECT_LE(ghz.bracket_lo, ghz.critical_value);
  EXPECT_GE(ghz.bracket_hi, ghz.critical_value);

  auto dicke = ghz_scenario(4, 0.1, 1.0);
  dicke.state = StateSpec::dicke(4, 2);
  EXPECT_NEAR(critical_eta_high(dicke, quick()).critical_value, kThreshold, 1e-6);
}

TEST(CriticalEta, ThresholdConsistency) {
  auto c = ghz_scenario(3, 0.2, 1.0);
  const auto solve = critical_eta_high(c, quick());
  c.eta_high = Efficiency(solve.critical_value);
  EXPECT_LT(std::abs(composite_lhs(c, quick()).lhs), 1e-8);
}

TEST(CriticalEta, FixedSettingsSkipReoptimization) {
  auto c = ghz_scenario(4, 0.1, 1.0);
  c.settings = chsh_seed_settings();
  const auto solve = critical_eta_high(c);
  EXPECT_NEAR(solve.critical_value, kThreshold, 1e-9);
  EXPECT_EQ(solve.iterations, 1);
}

TEST(CriticalEta, NotFoundWithoutViolation) {
  auto c = ghz_scenario(4, 0.1, 1.0);
  c.visibility = 0.5;
  const auto solve = critical_eta_high(c, quick());
  EXPECT_FALSE(solve.found());
  EXPECT_FALSE(solve.message.empty());
}

TEST(SymmetricEta, BellPair) {
  const DensityMatrix rho(make_state(StateSpec::bell_phi_plus()));
  const auto solve = symmetric_critical_eta(preset(BellPreset::Chsh), rho, Convention::Fold, quick());
  ASSERT_TRUE(solve.found());
  EXPECT_NEAR(solve.critical_value, kThreshold, 1e-6);
}

// One perfect detector: the maximally entangled pair violates CHSH once the
// other detector exceeds 1/√2.
TEST(SymmetricEta, PinnedPartyOnBellPair) {
  const DensityMatrix rho(make_state(StateSpec::bell_phi_plus()));
  const std::vector<std::optional<double>> pinned{1.0, std::nullopt};
  const auto solve = symmetric_critical_eta(preset(BellPreset::Chsh), rho, Convention::Fold, quick(), pinned);
  ASSERT_TRUE(solve.found());
  EXPECT_NEAR(solve.critical_value, kInvSqrt2, 1e-6);
}

TEST(SymmetricEta, PinnedPartyWeakEntanglementApproachesOneHalfFromAbove) {
  const std::vector<std::optional<double>> pinned{1.0, std::nullopt};
  double previous = 1.0;
  for (double alpha : {0.6, 0.3, 0.15}) {
    const DensityMatrix rho(make_state(StateSpec::partial_pair(alpha)));
    const auto solve = symmetric_critical_eta(preset(BellPreset::Chsh), rho, Convention::Fold, quick(), pinned);
    ASSERT_TRUE(solve.found()) << alpha;
    EXPECT_LT(solve.critical_value, previous) << alpha;
    EXPECT_GT(solve.critical_value, 0.5) << alpha;
    previous = solve.critical_value;
  }
  EXPECT_LT(previous, 0.56);
}

TEST(SymmetricEta, ProductStateNotFound) {
  const DensityMatrix rho(PureState::basis(std::vector<int>{0, 0}));
  EXPECT_FALSE(symmetric_critical_eta(preset(BellPreset::Chsh), rho, Convention::Fold, quick()).found());
}

TEST(Visibility, BellPair) {
  ScenarioConfig c;
  c.state = StateSpec::bell_phi_plus();
  c.n = c.k = 2;
  const auto vis = critical_visibility(c, quick());
  ASSERT_TRUE(vis.solve.found());
  EXPECT_NEAR(vis.solve.critical_value, kInvSqrt2, 1e-6);
  ASSERT_TRUE(vis.closed_form_noise_reading);
  EXPECT_NEAR(*vis.closed_form_noise_reading, vis.solve.critical_value, 1e-9);
}

TEST(Visibility, Ghz4AgreesWithBisection) {
  const auto c = ghz_scenario(4, 1.0, 0.95);
  const auto vis = critical_visibility(c, quick());
  ASSERT_TRUE(vis.solve.found());
  const double brute = oracle::bisect_threshold(
      [&](double v) {
        auto local = c;
        local.visibility = v;
        local.settings = vis.solve.settings;
        return composite_lhs(local).lhs;
      },
      0.0, 1.0);
  EXPECT_NEAR(vis.solve.critical_value, brute, 1e-8);
  EXPECT_NEAR(*vis.closed_form_noise_reading, vis.solve.critical_value, 1e-9);
}

TEST(Visibility, AtCriticalEtaIsOne) {
  auto c = ghz_scenario(4, 0.1, 1.0);
  const auto eta = critical_eta_high(c, quick());
  c.eta_high = Efficiency(eta.critical_value);
  const auto vis = critical_visibility(c, quick());
  ASSERT_TRUE(vis.solve.found());
  EXPECT_NEAR(vis.solve.critical_value, 1.0, 1e-6);
}

TEST(Visibility, NotFoundBelowThreshold) {
  EXPECT_FALSE(critical_visibility(ghz_scenario(4, 0.1, 0.8), quick()).solve.found());
}

TEST(Cluster, BlindFirstDetector) {
  ScenarioConfig c;
  c.state = StateSpec::cluster4();
  c.lost = 1;
  c.eta_low = Efficiency(0.3);
  const auto p = projected_state(c);
  ASSERT_EQ(p.weights.size(), 1u);
  EXPECT_NEAR(p.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(p.state.overlap(make_state(StateSpec::bell_phi_plus())), 1.0, 1e-12);
  EXPECT_NEAR(critical_eta_high(c, quick()).critical_value, kThreshold, 1e-6);
}

TEST(Solver, StatusNames) {
  EXPECT_EQ(to_string(SolveStatus::Found), "found");
  EXPECT_EQ(to_string(SolveStatus::NotFound), "not_found");
}

}  // namespace
}  // namespace limdet
