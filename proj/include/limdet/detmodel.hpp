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

// Inefficient-detector model for two-outcome qubit measurements.
//
// A detector of efficiency eta fires "+" with effect eta Π+. Two bookkeeping
// conventions coexist:
//
//   Fold     the missing click is reported as "-", so the "-" effect is
//            I - eta Π+. Used by correlation inequalities such as CHSH.
//   Trinary  the missing click is a third outcome with effect (1 - eta) I,
//            and "-" is eta Π-. Used by probability inequalities (CH form).

#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "limdet/qstate.hpp"

namespace limdet {

enum class Convention { Fold, Trinary };

std::string_view to_string(Convention convention);
Convention convention_from_string(std::string_view name);

/// Projective qubit measurement with Π+ = |m><m|,
/// |m> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct MeasurementSetting {
  double theta = 0.0;
  double phi = 0.0;

  static MeasurementSetting zero() { return {0.0, 0.0}; }
  static MeasurementSetting one() { return {std::numbers::pi, 0.0}; }
  static MeasurementSetting plus() { return {std::numbers::pi / 2, 0.0}; }
  /// Projector onto cos(alpha)|0> + sin(alpha)|1>.
  static MeasurementSetting real_superposition(double alpha) { return {2.0 * alpha, 0.0}; }

  template <typename Real = double>
  CVector<Real> ket() const {
    CVector<Real> m(2);
    m(0) = Complex<Real>(Real(std::cos(theta / 2)), Real(0));
    m(1) = std::polar(Real(std::sin(theta / 2)), Real(phi));
    return m;
  }

  template <typename Real = double>
  CMatrix<Real> plus_projector() const {
    const CVector<Real> m = ket<Real>();
    return m * m.adjoint();
  }

  /// Π- = I - Π+, exact by construction.
  template <typename Real = double>
  CMatrix<Real> minus_projector() const {
    return CMatrix<Real>::Identity(2, 2) - plus_projector<Real>();
  }

  friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;
};

/// Detection efficiency in [0, 1].
class Efficiency {
 public:
  constexpr Efficiency() = default;
  explicit Efficiency(double eta) : eta_(eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("efficiency out of [0,1]");
  }
  constexpr double value() const { return eta_; }

  friend bool operator==(const Efficiency&, const Efficiency&) = default;

 private:
  double eta_ = 1.0;
};

template <typename Real>
struct BasicDressedEffects {
  BasicEffect<Real> plus;
  BasicEffect<Real> minus;
};

/// Fold-convention effects: (eta Π+, I - eta Π+) on qubit `target`.
template <typename Real = double>
BasicDressedEffects<Real> dressed_effects(const MeasurementSetting& setting, Efficiency eta, int target = 0) {
  const CMatrix<Real> plus = Real(eta.value()) * setting.plus_projector<Real>();
  return {BasicEffect<Real>({target}, plus), BasicEffect<Real>({target}, CMatrix<Real>::Identity(2, 2) - plus)};
}

/// A(eta) = E+ - E- = 2 eta Π+ - I.
template <typename Real = double>
LocalOperator<Real> dressed_observable(const MeasurementSetting& setting, Efficiency eta, int target = 0) {
  return {{target},
          Real(2 * eta.value()) * setting.plus_projector<Real>() - CMatrix<Real>::Identity(2, 2)};
}

struct ClickProbabilities {
  double plus = 0.0;
  double minus = 0.0;
  double none = 0.0;
};

/// Three-outcome statistics of one detector: eta Tr(rho Π+), eta Tr(rho Π-), 1 - eta.
template <typename Real = double>
ClickProbabilities click_probabilities(const MeasurementSetting& setting, Efficiency eta,
                                       const BasicDensityMatrix<Real>& rho, int target = 0) {
  const Real p_plus = expectation<Real>(rho, LocalOperator<Real>{{target}, setting.plus_projector<Real>()});
  const double eta_v = eta.value();
  return {eta_v * static_cast<double>(p_plus), eta_v * (1.0 - static_cast<double>(p_plus)), 1.0 - eta_v};
}

/// Per-outcome 2x2 effect for a single party. Outcome index: 0 = "+", 1 = "-",
/// 2 = no click (Trinary only).
template <typename Real = double>
CMatrix<Real> outcome_effect(const MeasurementSetting& setting, double eta, Convention convention, int outcome) {
  const CMatrix<Real> plus = setting.plus_projector<Real>();
  const CMatrix<Real> id = CMatrix<Real>::Identity(2, 2);
  switch (outcome) {
    case 0:
      return Real(eta) * plus;
    case 1:
      return convention == Convention::Fold ? CMatrix<Real>(id - Real(eta) * plus)
                                            : CMatrix<Real>(Real(eta) * (id - plus));
    case 2:
      if (convention == Convention::Fold) throw InvalidArgument("no-click outcome requires the trinary convention");
      return Real(1 - eta) * id;
    default:
      throw InvalidArgument("unknown outcome index");
  }
}

}  // namespace limdet
