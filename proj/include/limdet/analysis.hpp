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

// Experiment-duration statistics and lost-particle (damaged detector) analysis.

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "limdet/protocol.hpp"

namespace limdet {

/// C(n, k) as a double; zero outside 0 <= k <= n.
double binomial(int n, int k);

struct SuccessProbability {
  double p_succ = 0.0;           // p_1...p_m * eta_L^m * eta_H^k
  double p_succ_standard = 0.0;  // eta_H^N
};

SuccessProbability success_probability(std::span<const double> weights, double eta_low, double eta_high, int n,
                                       int k);
SuccessProbability success_probability(const ScenarioConfig& config, int max_qubits = kDefaultMaxQubits);

/// n' = p_succ_standard / p_succ. With m = N - k projected parties this is
/// (p_1...p_m)^-1 (eta_L/eta_H)^-(N-k): the exponent is N - k, not 1/2.
/// Throws InvalidArgument when p_succ is zero.
double trial_ratio(std::span<const double> weights, double eta_low, double eta_high, int n, int k);
double trial_ratio(const ScenarioConfig& config, int max_qubits = kDefaultMaxQubits);

/// Mean number of Bernoulli trials needed for r successes (Pascal mean r/p).
double pascal_expected_trials(int r, double p);

/// C(m, r) p^r (1-p)^(m-r).
double bernoulli_pmf(int m, int r, double p);

struct TrialRatioRow {
  double ratio = 0.0;  // eta_L / eta_H
  double n_prime = 0.0;
};

/// Rounds to 12 decimals so decimal grid steps print as typed (0.15, not 0.15000000000000002).
inline double snap_to_grid(double x) { return std::round(x * 1e12) / 1e12; }

/// n' on the grid start, start+step, ... <= stop (inclusive up to rounding).
std::vector<TrialRatioRow> trial_ratio_sweep(std::span<const double> weights, int n, int k, double start,
                                             double stop, double step);

/// Traces out qubits 0..lost-1, then applies `projectors` to the next qubits
/// in order and renormalizes. Throws ZeroProjection on a zero-weight branch.
ProjectedState damaged_state(const DensityMatrix& rho, int lost, std::span<const MeasurementSetting> projectors);

struct DickeComponent {
  double weight = 0.0;
  StateSpec state;
};

/// Reduced state of Dicke(N, e) after losing `lost` particles, as the mixture
/// sum_j C(l,j) C(N-l,e-j) / C(N,e) |D(N-l, e-j)><D(N-l, e-j)|.
/// Components with zero weight are omitted.
std::vector<DickeComponent> dicke_loss_mixture(int n, int e, int lost);

/// Dicke(N, e) with `lost` particles traced out and the next N-lost-2 qubits
/// projected onto |1>^u |0>^(N-lost-2-u), leaving two qubits.
struct DickeLossSpec {
  int n = 4;
  int e = 2;
  int lost = 1;
  int u = 1;

  void validate() const;
  std::vector<MeasurementSetting> projectors() const;
};

/// Unnormalized weight of |psi+> = (|01> + |10>)/√2 in the projected state:
/// 2 C(l, e-u-1) / C(N, e), zero when e-u-1 lies outside [0, l].
double psi_plus_weight(const DickeLossSpec& spec);

/// Fraction of |psi+> in the normalized projected state:
/// 2 C(l, e-u-1) / C(l+2, e-u).
double psi_plus_fraction(const DickeLossSpec& spec);

/// The same quantities obtained by simulating the trace and projections.
struct DickeLossOutcome {
  double total_weight = 0.0;  // probability of the projection pattern
  double psi_plus_weight = 0.0;
  std::optional<DensityMatrix> state;  // absent when total_weight is zero
};
DickeLossOutcome simulate_dicke_loss(const DickeLossSpec& spec);

}  // namespace limdet
