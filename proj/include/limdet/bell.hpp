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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "limdet/detmodel.hpp"
#include "limdet/optimize.hpp"
#include "limdet/qstate.hpp"

namespace limdet {

enum class BellForm { Correlation, Probability };
enum class Outcome { Plus = 0, Minus = 1, NoClick = 2 };
enum class BellPreset { Chsh, EberhardCh };

std::string_view to_string(BellForm form);
BellForm bell_form_from_string(std::string_view name);
std::string_view to_string(BellPreset preset);
BellPreset bell_preset_from_string(std::string_view name);

/// Setting index marking a party that does not enter a term.
inline constexpr int kAbsent = -1;

/// One weighted term. Correlation form: coefficient * <prod_i A_i^{s_i}>.
/// Probability form: coefficient * p(o_1 ... | s_1 ...), marginalizing absent parties.
struct BellTerm {
  double coefficient = 0.0;
  std::vector<int> settings;      // one entry per party, kAbsent or 0..settings_per_party-1
  std::vector<Outcome> outcomes;  // probability form only; entries for absent parties are ignored

  friend bool operator==(const BellTerm&, const BellTerm&) = default;
};

/// Linear functional on the correlations of n parties with its local bound L.
class BellExpression {
 public:
  /// Validates every label. If `bound` is given it must agree with
  /// lhv_bound() to 1e-9; otherwise the bound is computed by enumeration.
  BellExpression(std::string name, int n_parties, int settings_per_party, BellForm form, std::vector<BellTerm> terms,
                 std::optional<double> bound = std::nullopt);

  const std::string& name() const { return name_; }
  int n_parties() const { return n_parties_; }
  int settings_per_party() const { return settings_per_party_; }
  BellForm form() const { return form_; }
  const std::vector<BellTerm>& terms() const { return terms_; }
  double bound() const { return bound_; }

  /// True when some probability term asks for the no-click outcome.
  bool uses_no_click() const;

 private:
  std::string name_;
  int n_parties_;
  int settings_per_party_;
  BellForm form_;
  std::vector<BellTerm> terms_;
  double bound_ = 0.0;
};

/// CHSH: <A0B0> + <A0B1> + <A1B0> - <A1B1> <= 2.
/// EBERHARD_CH: p++(0,0) + p++(0,1) + p++(1,0) - p++(1,1) - pA+(0) - pB+(0) <= 0,
/// counting detected clicks only.
BellExpression preset(BellPreset which);

inline constexpr int kMaxLhvParties = 6;

/// Maximum over deterministic local strategies. Each party maps each setting
/// to one outcome: ±1 for correlation form, {+, -, no-click} for probability
/// form. Throws InvalidArgument beyond kMaxLhvParties parties or for
/// settings_per_party != 2.
double lhv_bound(const BellExpression& expr);

/// settings[party][setting index]
using SettingsAssignment = std::vector<std::vector<MeasurementSetting>>;

/// Value of the expression with every party's detectors dressed at
/// etas[party]. Correlation form requires Convention::Fold.
double quantum_value(const BellExpression& expr, const DensityMatrix& rho, const SettingsAssignment& settings,
                     std::span<const double> etas, Convention convention);

struct OptimizerOptions {
  int restarts = 64;
  std::uint64_t seed = 20190319;
  bool free_phase = false;
  SimplexOptions simplex{};
};

struct OptimizedSettings {
  SettingsAssignment settings;
  double value = 0.0;
  int starts = 0;
  int evaluations = 0;
};

/// The textbook CHSH angles on the x-z great circle (theta = 0, π/2 for the
/// first party, π/4, -π/4 for the second).
SettingsAssignment chsh_seed_settings();

/// Multi-start simplex maximization of quantum_value over measurement angles.
/// Starts: every entry of `warm_starts`, the CHSH seed for two-party
/// two-setting expressions, then `options.restarts` uniform random points.
OptimizedSettings optimize_settings(const BellExpression& expr, const DensityMatrix& rho, std::span<const double> etas,
                                    Convention convention, const OptimizerOptions& options = {},
                                    std::span<const SettingsAssignment> warm_starts = {});

}  // namespace limdet
