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

// Bell tests with a limited number of efficient detectors.
//
// Of N parties, the first N-k hold low-efficiency detectors (eta_L) and only
// project their qubit onto a fixed state Π+_i; the last k hold efficient
// detectors (eta_H) and run a k-party Bell test with local bound L. The
// composite inequality
//
//     eta_L^(N-k) * p_1 ... p_(N-k) * (Q - L) <= 0
//
// holds for local models, with p_i the sequential projection weights and Q
// the Bell value on the conditional k-qubit state. Because the prefactor is
// positive whenever eta_L > 0, violation depends on eta_H (and the state) only.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "limdet/bell.hpp"
#include "limdet/detmodel.hpp"
#include "limdet/qstate.hpp"
#include "limdet/states.hpp"

namespace limdet {

/// Where a scenario's Bell expression came from; kept so configs re-serialize unchanged.
struct BellSource {
  enum class Kind { Preset, File, Inline };
  Kind kind = Kind::Preset;
  std::string reference;  // preset name or file path; empty for inline

  friend bool operator==(const BellSource&, const BellSource&) = default;
};

struct ScenarioConfig {
  StateSpec state = StateSpec::ghz(4);
  int n = 4;
  int k = 2;
  /// Qubits 0..lost-1 carry blind detectors; their particles are traced out.
  int lost = 0;
  /// Π+ for qubits lost..n-k-1 in order; nullopt selects default_projectors().
  std::optional<std::vector<MeasurementSetting>> projectors;
  BellExpression bell = preset(BellPreset::Chsh);
  BellSource bell_source{};
  /// Fixed Bell settings for the last k parties; nullopt optimizes them.
  std::optional<SettingsAssignment> settings;
  /// Optional per-Bell-party efficiency overriding eta_high (empty or length k).
  std::vector<std::optional<double>> pinned_etas;
  Efficiency eta_low{1.0};
  Efficiency eta_high{1.0};
  double visibility = 1.0;
  Convention convention = Convention::Fold;
  bool free_phase = false;

  int projected_count() const { return n - k - lost; }

  /// Throws InvalidArgument on the first broken invariant.
  void validate() const;
};

/// Projector choices that leave a maximally entangled k-qubit state when one exists:
/// |+> on every projected GHZ qubit; for Cluster4, |+> on qubit 0 then |0>;
/// for Dicke/W, |1>^u |0>^(m-u) with u chosen to leave about k/2 excitations.
std::vector<MeasurementSetting> default_projectors(const StateSpec& state, int k, int lost);

/// The projectors a scenario actually uses.
std::vector<MeasurementSetting> resolved_projectors(const ScenarioConfig& config);

/// Conditional state after sequential projections, with the weights p_i.
struct ProjectedState {
  std::vector<double> weights;
  DensityMatrix state;

  double total_weight() const;
};

/// Projects qubit 0, discards it, and repeats for each setting in order; the
/// i-th weight is Tr(rho_(i-1) Π+_i) on the already-conditioned state.
/// Throws ZeroProjection if a weight falls below kZeroWeight.
ProjectedState project_sequence(const DensityMatrix& rho, std::span<const MeasurementSetting> projectors);

/// N-qubit input with white noise at the configured visibility.
DensityMatrix scenario_input_state(const ScenarioConfig& config, int max_qubits = kDefaultMaxQubits);

/// Traces the lost qubits, then projects the remaining low-efficiency parties.
ProjectedState projected_state(const ScenarioConfig& config, int max_qubits = kDefaultMaxQubits);

/// Efficiency of each Bell party when the free efficiency is `eta_high`.
std::vector<double> bell_party_etas(const ScenarioConfig& config, double eta_high);

struct CompositeEvaluation {
  std::vector<double> weights;
  double low_factor = 1.0;  // eta_L^(number of projected parties)
  double quantum_value = 0.0;
  double bound = 0.0;
  double lhs = 0.0;  // > 0 certifies violation
  SettingsAssignment settings;
  int optimizer_starts = 0;
};

CompositeEvaluation composite_lhs(const ScenarioConfig& config, const OptimizerOptions& options = {},
                                  int max_qubits = kDefaultMaxQubits);

enum class SolveStatus { Found, NotFound };
std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::NotFound;
  double critical_value = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;
  SettingsAssignment settings;
  int optimizer_starts = 0;
  std::string message;

  bool found() const { return status == SolveStatus::Found; }
};

inline constexpr int kMaxSolverRounds = 20;

/// Smallest common efficiency of the free parties for which the optimized Bell
/// value still exceeds L. Parties with a value in `pinned` keep that value.
/// The search starts at eta = 1 and alternates a root solve with the settings
/// held fixed and a re-optimization of the settings at that root; with
/// `fixed_settings` only the root solve runs.
SolveResult symmetric_critical_eta(const BellExpression& expr, const DensityMatrix& rho, Convention convention,
                                   const OptimizerOptions& options = {},
                                   std::span<const std::optional<double>> pinned = {},
                                   const std::optional<SettingsAssignment>& fixed_settings = std::nullopt);

/// Critical eta_H of a scenario (eta_L only scales the composite inequality).
SolveResult critical_eta_high(const ScenarioConfig& config, const OptimizerOptions& options = {},
                              int max_qubits = kDefaultMaxQubits);

struct VisibilityResult {
  SolveResult solve;
  /// Closed-form visibility with the noise term read as the Bell value of the
  /// projected white-noise component.
  std::optional<double> closed_form_noise_reading;
  /// Same formula with the noise term read as the Bell value at the configured visibility.
  std::optional<double> closed_form_mixture_reading;
};

/// Smallest visibility v at which the composite inequality is still violated
/// at the configured eta_H. The projected state is affine in v, so for fixed
/// settings the threshold is a single linear solve.
VisibilityResult critical_visibility(const ScenarioConfig& config, const OptimizerOptions& options = {},
                                     int max_qubits = kDefaultMaxQubits);

}  // namespace limdet
