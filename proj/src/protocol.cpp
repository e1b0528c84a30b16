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

#include "limdet/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace limdet {

namespace {

// A violation smaller than this at the top of the search range counts as none.
constexpr double kViolationTolerance = 1e-10;
// Re-optimized gap above L that ends the alternating search.
constexpr double kConvergedGap = 1e-12;
// Offset below the threshold used to certify the lower end of the bracket.
constexpr double kBracketOffset = 1e-7;
constexpr int kRootBisections = 60;

std::vector<int> first_qubits(int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

DensityMatrix trace_lost(const DensityMatrix& rho, int lost) {
  if (lost == 0) return rho;
  const auto traced = first_qubits(lost);
  return partial_trace(rho, traced);
}

/// Unnormalized conditional state W * rho' as a matrix, W = product of weights.
struct WeightedBranch {
  double weight = 0.0;
  DensityMatrix state;
};

WeightedBranch weighted(const ProjectedState& p) { return {p.total_weight(), p.state}; }

std::vector<double> resolve_etas(std::span<const std::optional<double>> pinned, int parties, double free_eta) {
  std::vector<double> etas(static_cast<std::size_t>(parties), free_eta);
  for (std::size_t i = 0; i < pinned.size() && i < etas.size(); ++i) {
    if (pinned[i]) etas[i] = *pinned[i];
  }
  return etas;
}

}  // namespace

std::string_view to_string(SolveStatus status) { return status == SolveStatus::Found ? "found" : "not_found"; }

void ScenarioConfig::validate() const {
  state.validate();
  if (state.n != n) throw InvalidArgument("N does not match the state's qubit count");
  if (k > n) throw InvalidArgument("k exceeds N");
  if (k < 2) throw InvalidArgument("k must be at least 2");
  if (lost < 0) throw InvalidArgument("lost must be nonnegative");
  if (lost > 0 && lost >= n - k) throw InvalidArgument("lost must be smaller than N - k");
  if (bell.n_parties() != k) throw InvalidArgument("Bell expression parties differ from k");
  if (projectors && static_cast<int>(projectors->size()) != projected_count()) {
    throw InvalidArgument("projector list must have N - k - lost entries");
  }
  if (settings) {
    if (static_cast<int>(settings->size()) != k) throw InvalidArgument("settings must list every Bell party");
    for (const auto& party : *settings) {
      if (static_cast<int>(party.size()) != bell.settings_per_party()) {
        throw InvalidArgument("settings per party differ from the Bell expression");
      }
    }
  }
  if (!pinned_etas.empty() && static_cast<int>(pinned_etas.size()) != k) {
    throw InvalidArgument("pinned efficiencies must list every Bell party");
  }
  for (const auto& p : pinned_etas) {
    if (p && !(*p >= 0.0 && *p <= 1.0)) throw InvalidArgument("efficiency out of [0,1]");
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw InvalidArgument("visibility out of [0,1]");
  if (bell.form() == BellForm::Correlation && convention != Convention::Fold) {
    throw InvalidArgument("correlation-form expressions require the fold convention");
  }
  if (convention == Convention::Fold && bell.uses_no_click()) {
    throw InvalidArgument("no-click outcomes require the trinary convention");
  }
}

std::vector<MeasurementSetting> default_projectors(const StateSpec& state, int k, int lost) {
  const int m = state.n - k - lost;
  if (m <= 0) return {};
  std::vector<MeasurementSetting> out;
  out.reserve(static_cast<std::size_t>(m));
  switch (state.kind) {
    case StateKind::Ghz:
      out.assign(static_cast<std::size_t>(m), MeasurementSetting::plus());
      break;
    case StateKind::Cluster4:
      // |+> then |0> on the untraced prefix leaves (|00> + |11>)/√2 on the last pair.
      for (int i = 0; i < m; ++i) {
        out.push_back(lost == 0 && i == 0 ? MeasurementSetting::plus() : MeasurementSetting::zero());
      }
      break;
    case StateKind::Dicke:
    case StateKind::W: {
      const int e = effective_excitations(state);
      const int expected_lost =
          static_cast<int>(std::lround(static_cast<double>(lost) * e / static_cast<double>(state.n)));
      const int u = std::clamp(e - expected_lost - k / 2, 0, m);
      for (int i = 0; i < m; ++i) out.push_back(i < u ? MeasurementSetting::one() : MeasurementSetting::zero());
      break;
    }
    case StateKind::BellPhiPlus:
    case StateKind::BellPsiPlus:
    case StateKind::PartialPair:
      out.assign(static_cast<std::size_t>(m), MeasurementSetting::zero());
      break;
  }
  return out;
}

std::vector<MeasurementSetting> resolved_projectors(const ScenarioConfig& config) {
  return config.projectors ? *config.projectors : default_projectors(config.state, config.k, config.lost);
}

double ProjectedState::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 1.0, std::multiplies<>());
}

ProjectedState project_sequence(const DensityMatrix& rho, std::span<const MeasurementSetting> projectors) {
  if (static_cast<int>(projectors.size()) >= rho.n_qubits()) {
    throw InvalidIndexError("projections must leave at least one qubit");
  }
  ProjectedState out{{}, rho};
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const Effect effect({0}, projectors[i].plus_projector());
    auto result = project_out(out.state, effect);
    if (result.absent()) {
      throw ZeroProjection("projector " + std::to_string(i) + " (theta=" + std::to_string(projectors[i].theta) +
                           ", phi=" + std::to_string(projectors[i].phi) + ") has zero weight on the state");
    }
    out.weights.push_back(result.weight);
    out.state = std::move(*result.state);
  }
  return out;
}

DensityMatrix scenario_input_state(const ScenarioConfig& config, int max_qubits) {
  const auto psi = make_state(config.state, max_qubits);
  return add_white_noise(psi, config.visibility);
}

ProjectedState projected_state(const ScenarioConfig& config, int max_qubits) {
  config.validate();
  const auto rho = trace_lost(scenario_input_state(config, max_qubits), config.lost);
  const auto projectors = resolved_projectors(config);
  return project_sequence(rho, projectors);
}

std::vector<double> bell_party_etas(const ScenarioConfig& config, double eta_high) {
  return resolve_etas(config.pinned_etas, config.k, eta_high);
}

CompositeEvaluation composite_lhs(const ScenarioConfig& config, const OptimizerOptions& options, int max_qubits) {
  const auto projected = projected_state(config, max_qubits);
  const auto etas = bell_party_etas(config, config.eta_high.value());

  CompositeEvaluation out;
  out.weights = projected.weights;
  out.low_factor = std::pow(config.eta_low.value(), config.projected_count());
  out.bound = config.bell.bound();
  if (config.settings) {
    out.settings = *config.settings;
    out.quantum_value = quantum_value(config.bell, projected.state, out.settings, etas, config.convention);
  } else {
    OptimizerOptions opts = options;
    opts.free_phase = opts.free_phase || config.free_phase;
    const auto best = optimize_settings(config.bell, projected.state, etas, config.convention, opts);
    out.settings = best.settings;
    out.quantum_value = best.value;
    out.optimizer_starts = best.starts;
  }
  out.lhs = out.low_factor * projected.total_weight() * (out.quantum_value - out.bound);
  return out;
}

SolveResult symmetric_critical_eta(const BellExpression& expr, const DensityMatrix& rho, Convention convention,
                                   const OptimizerOptions& options, std::span<const std::optional<double>> pinned,
                                   const std::optional<SettingsAssignment>& fixed_settings) {
  const int parties = expr.n_parties();
  const double bound = expr.bound();
  SolveResult out;

  auto value_at = [&](double eta, const SettingsAssignment& s) {
    const auto etas = resolve_etas(pinned, parties, eta);
    return quantum_value(expr, rho, s, etas, convention);
  };
  auto optimize_at = [&](double eta, const SettingsAssignment* warm) {
    const auto etas = resolve_etas(pinned, parties, eta);
    if (fixed_settings) {
      OptimizedSettings fixed;
      fixed.settings = *fixed_settings;
      fixed.value = quantum_value(expr, rho, *fixed_settings, etas, convention);
      return fixed;
    }
    std::vector<SettingsAssignment> warm_starts;
    if (warm) warm_starts.push_back(*warm);
    auto best = optimize_settings(expr, rho, etas, convention, options, warm_starts);
    out.optimizer_starts += best.starts;
    return best;
  };

  auto top = optimize_at(1.0, nullptr);
  if (top.value - bound <= kViolationTolerance) {
    out.status = SolveStatus::NotFound;
    out.critical_value = 1.0;
    out.bracket_lo = out.bracket_hi = 1.0;
    out.residual = top.value - bound;
    out.settings = top.settings;
    out.message = "no violation at efficiency 1 (value " + std::to_string(top.value) + ", bound " +
                  std::to_string(bound) + ")";
    return out;
  }

  double hi = 1.0;
  SettingsAssignment settings = top.settings;
  double gap = top.value - bound;
  for (int round = 0; round < kMaxSolverRounds; ++round) {
    ++out.iterations;
    // With settings held fixed the value at eta = 0 is a deterministic local point, so <= L.
    double lo = 0.0;
    for (int i = 0; i < kRootBisections && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (value_at(mid, settings) - bound > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    auto refined = optimize_at(hi, &settings);
    gap = refined.value - bound;
    if (refined.value >= value_at(hi, settings)) settings = refined.settings;
    if (gap <= kConvergedGap || fixed_settings) {
      // Certify the lower end: below the threshold no settings may violate.
      const double check = std::max(0.0, hi - kBracketOffset);
      auto below = optimize_at(check, &settings);
      if (below.value - bound > kConvergedGap && !fixed_settings) {
        hi = check;
        settings = below.settings;
        continue;
      }
      out.bracket_lo = check;
      out.bracket_hi = hi;
      break;
    }
  }
  out.status = SolveStatus::Found;
  out.critical_value = hi;
  out.settings = settings;
  out.residual = value_at(hi, settings) - bound;
  if (out.bracket_hi == 0.0) {
    out.bracket_lo = std::max(0.0, hi - kBracketOffset);
    out.bracket_hi = hi;
    out.message = "round limit reached before the re-optimized gap closed";
  }
  return out;
}

SolveResult critical_eta_high(const ScenarioConfig& config, const OptimizerOptions& options, int max_qubits) {
  const auto projected = projected_state(config, max_qubits);
  OptimizerOptions opts = options;
  opts.free_phase = opts.free_phase || config.free_phase;
  return symmetric_critical_eta(config.bell, projected.state, config.convention, opts, config.pinned_etas,
                                config.settings);
}

VisibilityResult critical_visibility(const ScenarioConfig& config, const OptimizerOptions& options, int max_qubits) {
  config.validate();
  OptimizerOptions opts = options;
  opts.free_phase = opts.free_phase || config.free_phase;

  const auto projectors = resolved_projectors(config);
  const auto psi = make_state(config.state, max_qubits);
  const auto pure = weighted(project_sequence(trace_lost(DensityMatrix(psi), config.lost), projectors));
  const auto noise =
      weighted(project_sequence(trace_lost(DensityMatrix::maximally_mixed(config.n), config.lost), projectors));
  const auto etas = bell_party_etas(config, config.eta_high.value());
  const double bound = config.bell.bound();

  auto mixture = [&](double v) {
    return DensityMatrix(v * pure.weight * pure.state.matrix() + (1.0 - v) * noise.weight * noise.state.matrix());
  };
  auto q = [&](const DensityMatrix& rho, const SettingsAssignment& s) {
    return quantum_value(config.bell, rho, s, etas, config.convention);
  };

  VisibilityResult out;
  SolveResult& res = out.solve;
  auto optimize_on = [&](const DensityMatrix& rho, const SettingsAssignment* warm) {
    if (config.settings) {
      OptimizedSettings fixed;
      fixed.settings = *config.settings;
      fixed.value = q(rho, fixed.settings);
      return fixed;
    }
    std::vector<SettingsAssignment> warm_starts;
    if (warm) warm_starts.push_back(*warm);
    auto best = optimize_settings(config.bell, rho, etas, config.convention, opts, warm_starts);
    res.optimizer_starts += best.starts;
    return best;
  };

  // The composite left side divided by eta_L^m is affine in v for fixed settings:
  //   v * W_psi * (Q_psi - L) + (1 - v) * W_noise * (Q_noise - L).
  auto linear_root = [&](const SettingsAssignment& s) {
    const double a = pure.weight * (q(pure.state, s) - bound);
    const double b = noise.weight * (bound - q(noise.state, s));
    if (a <= 0.0) return 1.0;
    return std::clamp(b / (a + b), 0.0, 1.0);
  };

  auto top = optimize_on(pure.state, nullptr);
  if (top.value - bound < -1e-9) {
    res.status = SolveStatus::NotFound;
    res.critical_value = 1.0;
    res.bracket_lo = res.bracket_hi = 1.0;
    res.residual = top.value - bound;
    res.settings = top.settings;
    res.message = "no violation at visibility 1 (value " + std::to_string(top.value) + ", bound " +
                  std::to_string(bound) + ")";
    return out;
  }

  SettingsAssignment settings = top.settings;
  double v = linear_root(settings);
  for (int round = 0; round < kMaxSolverRounds; ++round) {
    ++res.iterations;
    if (config.settings) break;
    const auto rho = mixture(v);
    auto refined = optimize_on(rho, &settings);
    if (refined.value - bound <= kConvergedGap) {
      const double check = std::max(0.0, v - kBracketOffset);
      auto below = optimize_on(mixture(check), &settings);
      if (below.value - bound > kConvergedGap) {
        settings = below.settings;
        v = std::min(check, linear_root(settings));
        continue;
      }
      break;
    }
    settings = refined.settings;
    v = std::min(v, linear_root(settings));
  }
  res.status = SolveStatus::Found;
  res.critical_value = v;
  res.bracket_lo = std::max(0.0, v - kBracketOffset);
  res.bracket_hi = v;
  res.settings = settings;
  res.residual = q(mixture(v), settings) - bound;

  const double q_pure = q(pure.state, settings);
  const double scale = std::pow(2.0 * config.eta_low.value(), static_cast<double>(projectors.size())) * pure.weight;
  auto closed_form = [&](double q_noise) -> std::optional<double> {
    const double denom = 1.0 - scale * (q_pure - bound) / (q_noise - bound);
    if (q_noise == bound || denom == 0.0 || !std::isfinite(denom)) return std::nullopt;
    return 1.0 / denom;
  };
  out.closed_form_noise_reading = closed_form(q(noise.state, settings));
  out.closed_form_mixture_reading = closed_form(q(mixture(config.visibility), settings));
  return out;
}

}  // namespace limdet
