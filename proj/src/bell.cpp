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

#include "limdet/bell.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace limdet {

namespace {

using Matrix2 = Eigen::Matrix2cd;

constexpr double kBoundTolerance = 1e-9;

int outcome_count(const BellExpression& expr) { return expr.form() == BellForm::Correlation ? 2 : 3; }

/// Tr(rho (O_0 ⊗ O_1 ⊗ ...)) by contracting one qubit at a time, qubit 0 first.
double trace_product(const CMatrix<double>& rho, std::span<const Matrix2> ops) {
  auto contract = [](const auto& m, const Matrix2& o) {
    const Eigen::Index h = m.rows() / 2;
    CMatrix<double> next = o(0, 0) * m.block(0, 0, h, h) + o(0, 1) * m.block(h, 0, h, h) +
                           o(1, 0) * m.block(0, h, h, h) + o(1, 1) * m.block(h, h, h, h);
    return next;
  };
  CMatrix<double> cur = contract(rho, ops[0]);
  for (std::size_t i = 1; i < ops.size(); ++i) cur = contract(cur, ops[i]);
  return cur(0, 0).real();
}

Matrix2 to_fixed(const CMatrix<double>& m) { return m; }

void check_shapes(const BellExpression& expr, const DensityMatrix& rho, const SettingsAssignment& settings,
                  std::span<const double> etas) {
  const auto n = static_cast<std::size_t>(expr.n_parties());
  if (static_cast<std::size_t>(rho.n_qubits()) != n) {
    throw DimensionError("state has " + std::to_string(rho.n_qubits()) + " qubits but the expression has " +
                         std::to_string(n) + " parties");
  }
  if (settings.size() != n || etas.size() != n) throw DimensionError("settings/efficiencies do not match parties");
  for (const auto& party : settings) {
    if (party.size() != static_cast<std::size_t>(expr.settings_per_party())) {
      throw DimensionError("settings per party do not match the expression");
    }
  }
  for (double eta : etas) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("efficiency out of [0,1]");
  }
}

double evaluate(const BellExpression& expr, const CMatrix<double>& rho, const SettingsAssignment& settings,
                std::span<const double> etas, Convention convention) {
  const auto n = static_cast<std::size_t>(expr.n_parties());
  const auto s = static_cast<std::size_t>(expr.settings_per_party());
  const int outcomes = expr.form() == BellForm::Correlation ? 1 : (convention == Convention::Fold ? 2 : 3);

  // ops[(party * s + setting) * 3 + outcome]; correlation form stores the dressed observable at outcome 0.
  std::vector<Matrix2> ops(n * s * 3, Matrix2::Zero());
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t j = 0; j < s; ++j) {
      const auto& setting = settings[p][j];
      const std::size_t base = (p * s + j) * 3;
      if (expr.form() == BellForm::Correlation) {
        ops[base] = to_fixed(dressed_observable(setting, Efficiency(etas[p])).matrix);
      } else {
        for (int o = 0; o < outcomes; ++o) {
          ops[base + static_cast<std::size_t>(o)] = to_fixed(outcome_effect(setting, etas[p], convention, o));
        }
      }
    }
  }

  std::vector<Matrix2> factors(n);
  double total = 0.0;
  for (const auto& term : expr.terms()) {
    for (std::size_t p = 0; p < n; ++p) {
      const int j = term.settings[p];
      if (j == kAbsent) {
        factors[p] = Matrix2::Identity();
        continue;
      }
      const std::size_t base = (p * s + static_cast<std::size_t>(j)) * 3;
      const int o = expr.form() == BellForm::Correlation ? 0 : static_cast<int>(term.outcomes[p]);
      if (o >= outcomes) throw InvalidArgument("no-click outcome requires the trinary convention");
      factors[p] = ops[base + static_cast<std::size_t>(o)];
    }
    total += term.coefficient * trace_product(rho, factors);
  }
  return total;
}

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

}  // namespace

std::string_view to_string(BellForm form) { return form == BellForm::Correlation ? "correlation" : "probability"; }

BellForm bell_form_from_string(std::string_view name) {
  if (name == "correlation") return BellForm::Correlation;
  if (name == "probability") return BellForm::Probability;
  throw InvalidArgument("unknown expression form '" + std::string(name) + "'");
}

std::string_view to_string(BellPreset preset) { return preset == BellPreset::Chsh ? "CHSH" : "EBERHARD_CH"; }

BellPreset bell_preset_from_string(std::string_view name) {
  if (name == "CHSH") return BellPreset::Chsh;
  if (name == "EBERHARD_CH") return BellPreset::EberhardCh;
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

BellExpression::BellExpression(std::string name, int n_parties, int settings_per_party, BellForm form,
                               std::vector<BellTerm> terms, std::optional<double> bound)
    : name_(std::move(name)),
      n_parties_(n_parties),
      settings_per_party_(settings_per_party),
      form_(form),
      terms_(std::move(terms)) {
  if (n_parties < 1) throw InvalidArgument("expression needs at least one party");
  if (settings_per_party < 1) throw InvalidArgument("expression needs at least one setting per party");
  for (auto& term : terms_) {
    if (term.settings.size() != static_cast<std::size_t>(n_parties)) {
      throw InvalidArgument("term setting list does not cover every party");
    }
    for (int j : term.settings) {
      if (j != kAbsent && (j < 0 || j >= settings_per_party)) throw InvalidArgument("term setting index out of range");
    }
    if (form == BellForm::Probability) {
      if (term.outcomes.size() != term.settings.size()) {
        throw InvalidArgument("probability term needs one outcome per party");
      }
    } else if (!term.outcomes.empty()) {
      throw InvalidArgument("correlation term must not list outcomes");
    }
    if (!std::isfinite(term.coefficient)) throw InvalidArgument("term coefficient is not finite");
  }
  const double computed = lhv_bound(*this);
  if (bound && std::abs(*bound - computed) > kBoundTolerance) {
    throw InvalidArgument("stated bound " + std::to_string(*bound) + " differs from the local bound " +
                          std::to_string(computed));
  }
  bound_ = computed;
}

bool BellExpression::uses_no_click() const {
  for (const auto& term : terms_) {
    for (std::size_t p = 0; p < term.outcomes.size(); ++p) {
      if (term.settings[p] != kAbsent && term.outcomes[p] == Outcome::NoClick) return true;
    }
  }
  return false;
}

BellExpression preset(BellPreset which) {
  switch (which) {
    case BellPreset::Chsh:
      return BellExpression("CHSH", 2, 2, BellForm::Correlation,
                            {{1.0, {0, 0}, {}}, {1.0, {0, 1}, {}}, {1.0, {1, 0}, {}}, {-1.0, {1, 1}, {}}}, 2.0);
    case BellPreset::EberhardCh: {
      const std::vector<Outcome> pp{Outcome::Plus, Outcome::Plus};
      return BellExpression("EBERHARD_CH", 2, 2, BellForm::Probability,
                            {{1.0, {0, 0}, pp},
                             {1.0, {0, 1}, pp},
                             {1.0, {1, 0}, pp},
                             {-1.0, {1, 1}, pp},
                             {-1.0, {0, kAbsent}, pp},
                             {-1.0, {kAbsent, 0}, pp}},
                            0.0);
    }
  }
  throw InvalidArgument("unknown preset");
}

double lhv_bound(const BellExpression& expr) {
  const int n = expr.n_parties();
  const int s = expr.settings_per_party();
  if (n > kMaxLhvParties) {
    throw InvalidArgument("local bound enumeration limited to " + std::to_string(kMaxLhvParties) + " parties");
  }
  if (s != 2) throw InvalidArgument("local bound enumeration requires two settings per party");
  const int o = outcome_count(expr);
  const int per_party = o * o;  // o^s with s = 2

  // Odometer over local strategies; strategy code c means setting j outputs (c / o^j) % o.
  std::vector<int> strategy(static_cast<std::size_t>(n), 0);
  auto output = [&](int party, int setting) {
    int c = strategy[static_cast<std::size_t>(party)];
    for (int j = 0; j < setting; ++j) c /= o;
    return c % o;
  };
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    double value = 0.0;
    for (const auto& term : expr.terms()) {
      double factor = term.coefficient;
      for (int p = 0; p < n && factor != 0.0; ++p) {
        const int j = term.settings[static_cast<std::size_t>(p)];
        if (j == kAbsent) continue;
        const int out = output(p, j);
        if (expr.form() == BellForm::Correlation) {
          if (out == 1) factor = -factor;
        } else if (out != static_cast<int>(term.outcomes[static_cast<std::size_t>(p)])) {
          factor = 0.0;
        }
      }
      value += factor;
    }
    best = std::max(best, value);

    int p = 0;
    while (p < n && ++strategy[static_cast<std::size_t>(p)] == per_party) strategy[static_cast<std::size_t>(p++)] = 0;
    if (p == n) break;
  }
  return best;
}

double quantum_value(const BellExpression& expr, const DensityMatrix& rho, const SettingsAssignment& settings,
                     std::span<const double> etas, Convention convention) {
  if (expr.form() == BellForm::Correlation && convention != Convention::Fold) {
    throw InvalidArgument("correlation-form expressions require the fold convention");
  }
  check_shapes(expr, rho, settings, etas);
  return evaluate(expr, rho.matrix(), settings, etas, convention);
}

SettingsAssignment chsh_seed_settings() {
  const double pi = std::numbers::pi;
  return {{{0.0, 0.0}, {pi / 2, 0.0}}, {{pi / 4, 0.0}, {-pi / 4, 0.0}}};
}

OptimizedSettings optimize_settings(const BellExpression& expr, const DensityMatrix& rho, std::span<const double> etas,
                                    Convention convention, const OptimizerOptions& options,
                                    std::span<const SettingsAssignment> warm_starts) {
  if (expr.form() == BellForm::Correlation && convention != Convention::Fold) {
    throw InvalidArgument("correlation-form expressions require the fold convention");
  }
  const auto n = static_cast<std::size_t>(expr.n_parties());
  const auto s = static_cast<std::size_t>(expr.settings_per_party());
  const std::size_t angles = n * s;
  const auto dims = static_cast<Eigen::Index>(options.free_phase ? 2 * angles : angles);

  auto unpack = [&](const Eigen::VectorXd& x) {
    SettingsAssignment out(n, std::vector<MeasurementSetting>(s));
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t j = 0; j < s; ++j) {
        const auto i = static_cast<Eigen::Index>(p * s + j);
        out[p][j] = {x(i), options.free_phase ? x(i + static_cast<Eigen::Index>(angles)) : 0.0};
      }
    }
    return out;
  };
  auto pack = [&](const SettingsAssignment& a) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dims);
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t j = 0; j < s; ++j) {
        const auto i = static_cast<Eigen::Index>(p * s + j);
        x(i) = a[p][j].theta;
        if (options.free_phase) x(i + static_cast<Eigen::Index>(angles)) = a[p][j].phi;
      }
    }
    return x;
  };

  std::vector<Eigen::VectorXd> starts;
  for (const auto& w : warm_starts) {
    check_shapes(expr, rho, w, etas);
    starts.push_back(pack(w));
  }
  if (n == 2 && s == 2) starts.push_back(pack(chsh_seed_settings()));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd x(dims);
    for (Eigen::Index i = 0; i < dims; ++i) x(i) = angle(rng);
    starts.push_back(std::move(x));
  }
  if (starts.empty()) throw InvalidArgument("optimizer needs at least one start");

  check_shapes(expr, rho, unpack(starts.front()), etas);
  const CMatrix<double>& m = rho.matrix();
  auto objective = [&](const Eigen::VectorXd& x) { return -evaluate(expr, m, unpack(x), etas, convention); };

  OptimizedSettings best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& x0 : starts) {
    const auto result = nelder_mead<double>(objective, x0, options.simplex);
    best.evaluations += result.evaluations;
    ++best.starts;
    if (-result.value > best.value) {
      best.value = -result.value;
      best.settings = unpack(result.x);
    }
  }
  for (auto& party : best.settings) {
    for (auto& setting : party) {
      setting.theta = wrap_angle(setting.theta);
      setting.phi = wrap_angle(setting.phi);
    }
  }
  return best;
}

}  // namespace limdet
