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

#include <bit>
#include <cmath>
#include <string>
#include <string_view>

#include "limdet/qstate.hpp"

namespace limdet {

enum class StateKind { Ghz, Dicke, W, Cluster4, BellPhiPlus, BellPsiPlus, PartialPair };

std::string_view to_string(StateKind kind);
/// Accepts the names produced by to_string(); throws InvalidArgument otherwise.
StateKind state_kind_from_string(std::string_view name);

struct StateSpec {
  StateKind kind = StateKind::Ghz;
  int n = 2;
  int excitations = 0;  // Dicke only
  double alpha = 0.0;   // PartialPair only, radians

  /// Throws InvalidArgument if the fields are inconsistent with `kind`.
  void validate() const;

  static StateSpec ghz(int n) { return {StateKind::Ghz, n, 0, 0.0}; }
  static StateSpec dicke(int n, int e) { return {StateKind::Dicke, n, e, 0.0}; }
  static StateSpec w(int n) { return {StateKind::W, n, 1, 0.0}; }
  static StateSpec cluster4() { return {StateKind::Cluster4, 4, 0, 0.0}; }
  static StateSpec bell_phi_plus() { return {StateKind::BellPhiPlus, 2, 0, 0.0}; }
  static StateSpec bell_psi_plus() { return {StateKind::BellPsiPlus, 2, 0, 0.0}; }
  static StateSpec partial_pair(double alpha) { return {StateKind::PartialPair, 2, 0, alpha}; }

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

/// Number of excitations actually used (W states carry one).
inline int effective_excitations(const StateSpec& spec) {
  return spec.kind == StateKind::W ? 1 : spec.excitations;
}

/// Builds the normalized state vector for `spec`.
///
/// Cluster4 is (|0000> + |0011> - |1100> + |1111>)/2, the linear cluster state
/// with a Z applied to qubit 0. In this frame tracing qubit 0 leaves the
/// equal mixture of |1>(|11>-|00>)/√2 and |0>(|00>+|11>)/√2.
template <typename Real = double>
BasicPureState<Real> make_state(const StateSpec& spec, int max_qubits = kDefaultMaxQubits) {
  spec.validate();
  if (spec.n > max_qubits) {
    throw CapacityError(std::to_string(spec.n) + " qubits exceeds the cap of " + std::to_string(max_qubits));
  }
  const auto d = static_cast<Eigen::Index>(detail::dim_of(spec.n));
  CVector<Real> v = CVector<Real>::Zero(d);
  switch (spec.kind) {
    case StateKind::Ghz:
      v(0) = Real(1);
      v(d - 1) = Real(1);
      break;
    case StateKind::Dicke:
    case StateKind::W: {
      const int e = effective_excitations(spec);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (std::popcount(static_cast<unsigned long long>(i)) == e) v(i) = Real(1);
      }
      break;
    }
    case StateKind::Cluster4:
      v(0b0000) = Real(1);
      v(0b0011) = Real(1);
      v(0b1100) = Real(-1);
      v(0b1111) = Real(1);
      break;
    case StateKind::BellPhiPlus:
      v(0b00) = Real(1);
      v(0b11) = Real(1);
      break;
    case StateKind::BellPsiPlus:
      v(0b01) = Real(1);
      v(0b10) = Real(1);
      break;
    case StateKind::PartialPair:
      v(0b00) = Real(std::cos(spec.alpha));
      v(0b11) = Real(std::sin(spec.alpha));
      break;
  }
  return BasicPureState<Real>(std::move(v), max_qubits);
}

/// v |psi><psi| + (1 - v) I / 2^N.
template <typename Real = double>
BasicDensityMatrix<Real> add_white_noise(const BasicPureState<Real>& psi, Real visibility) {
  if (!(visibility >= Real(0) && visibility <= Real(1))) {
    throw InvalidArgument("visibility must lie in [0, 1]");
  }
  const auto d = psi.amplitudes().size();
  CMatrix<Real> m = visibility * psi.projector();
  m.diagonal().array() += (Real(1) - visibility) / Real(d);
  return BasicDensityMatrix<Real>(std::move(m));
}

}  // namespace limdet
