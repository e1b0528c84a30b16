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

#include "limdet/analysis.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace limdet {

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(out);
}

SuccessProbability success_probability(std::span<const double> weights, double eta_low, double eta_high, int n,
                                       int k) {
  const double product = std::accumulate(weights.begin(), weights.end(), 1.0, std::multiplies<>());
  const auto m = static_cast<double>(weights.size());
  return {product * std::pow(eta_low, m) * std::pow(eta_high, k), std::pow(eta_high, n)};
}

SuccessProbability success_probability(const ScenarioConfig& config, int max_qubits) {
  const auto projected = projected_state(config, max_qubits);
  return success_probability(projected.weights, config.eta_low.value(), config.eta_high.value(), config.n, config.k);
}

double trial_ratio(std::span<const double> weights, double eta_low, double eta_high, int n, int k) {
  const auto p = success_probability(weights, eta_low, eta_high, n, k);
  if (!(p.p_succ > 0.0)) throw InvalidArgument("trial ratio undefined: success probability is zero");
  return p.p_succ_standard / p.p_succ;
}

double trial_ratio(const ScenarioConfig& config, int max_qubits) {
  const auto p = success_probability(config, max_qubits);
  if (!(p.p_succ > 0.0)) throw InvalidArgument("trial ratio undefined: success probability is zero");
  return p.p_succ_standard / p.p_succ;
}

double pascal_expected_trials(int r, double p) {
  if (r < 1) throw InvalidArgument("success count must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("success probability must lie in (0, 1]");
  return static_cast<double>(r) / p;
}

double bernoulli_pmf(int m, int r, double p) {
  if (m < 0 || r < 0 || r > m) throw InvalidArgument("bernoulli_pmf needs 0 <= r <= m");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability out of [0,1]");
  return binomial(m, r) * std::pow(p, r) * std::pow(1.0 - p, m - r);
}

std::vector<TrialRatioRow> trial_ratio_sweep(std::span<const double> weights, int n, int k, double start,
                                             double stop, double step) {
  if (!(step > 0.0) || !(start > 0.0) || stop < start) throw InvalidArgument("sweep needs 0 < start <= stop, step > 0");
  const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<TrialRatioRow> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double ratio = snap_to_grid(start + step * i);
    rows.push_back({ratio, trial_ratio(weights, ratio, 1.0, n, k)});
  }
  return rows;
}

ProjectedState damaged_state(const DensityMatrix& rho, int lost, std::span<const MeasurementSetting> projectors) {
  if (lost < 0 || lost + static_cast<int>(projectors.size()) >= rho.n_qubits()) {
    throw InvalidIndexError("lost and projected qubits must leave at least one qubit");
  }
  if (lost == 0) return project_sequence(rho, projectors);
  std::vector<int> traced(static_cast<std::size_t>(lost));
  std::iota(traced.begin(), traced.end(), 0);
  return project_sequence(partial_trace(rho, traced), projectors);
}

std::vector<DickeComponent> dicke_loss_mixture(int n, int e, int lost) {
  if (lost < 0 || lost >= n) throw InvalidArgument("dicke_loss_mixture needs 0 <= l < N");
  if (e < 0 || e > n) throw InvalidArgument("dicke_loss_mixture needs 0 <= e <= N");
  const double total = binomial(n, e);
  std::vector<DickeComponent> out;
  for (int j = 0; j <= lost; ++j) {
    const double w = binomial(lost, j) * binomial(n - lost, e - j);
    if (w == 0.0) continue;
    out.push_back({w / total, StateSpec::dicke(n - lost, e - j)});
  }
  return out;
}

void DickeLossSpec::validate() const {
  if (n < 3) throw InvalidArgument("DickeLossSpec needs N >= 3");
  if (e < 0 || e > n) throw InvalidArgument("DickeLossSpec needs 0 <= e <= N");
  if (lost < 0 || lost >= n - 2) throw InvalidArgument("DickeLossSpec needs 0 <= l < N - 2");
  if (u < 0 || u > n - lost - 2) throw InvalidArgument("DickeLossSpec needs 0 <= u <= N - l - 2");
}

std::vector<MeasurementSetting> DickeLossSpec::projectors() const {
  std::vector<MeasurementSetting> out;
  for (int i = 0; i < n - lost - 2; ++i) out.push_back(i < u ? MeasurementSetting::one() : MeasurementSetting::zero());
  return out;
}

// After the trace, component D(N-l, e-j) contributes |psi+> only when the two
// unmeasured qubits hold exactly one excitation, i.e. j = e - u - 1; each of
// its basis states has squared amplitude 1/C(N-l, e-j), which cancels the
// C(N-l, e-j) of the mixture weight.
double psi_plus_weight(const DickeLossSpec& spec) {
  spec.validate();
  return 2.0 * binomial(spec.lost, spec.e - spec.u - 1) / binomial(spec.n, spec.e);
}

double psi_plus_fraction(const DickeLossSpec& spec) {
  spec.validate();
  const double total = binomial(spec.lost + 2, spec.e - spec.u);
  if (total == 0.0) return 0.0;
  return 2.0 * binomial(spec.lost, spec.e - spec.u - 1) / total;
}

DickeLossOutcome simulate_dicke_loss(const DickeLossSpec& spec) {
  spec.validate();
  const DensityMatrix rho(make_state(StateSpec::dicke(spec.n, spec.e)));
  DickeLossOutcome out;
  try {
    auto projected = damaged_state(rho, spec.lost, spec.projectors());
    out.total_weight = projected.total_weight();
    const PureState psi_plus(CVector<double>{{0.0, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, 0.0}});
    out.psi_plus_weight = out.total_weight * projected.state.overlap(psi_plus);
    out.state = std::move(projected.state);
  } catch (const ZeroProjection&) {
    // zero-probability pattern
  }
  return out;
}

}  // namespace limdet
