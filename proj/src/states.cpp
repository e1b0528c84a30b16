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

#include "limdet/states.hpp"

#include <array>
#include <utility>

namespace limdet {

namespace {

constexpr std::array<std::pair<StateKind, std::string_view>, 7> kStateNames{{
    {StateKind::Ghz, "GHZ"},
    {StateKind::Dicke, "Dicke"},
    {StateKind::W, "W"},
    {StateKind::Cluster4, "Cluster4"},
    {StateKind::BellPhiPlus, "BellPhiPlus"},
    {StateKind::BellPsiPlus, "BellPsiPlus"},
    {StateKind::PartialPair, "PartialPair"},
}};

}  // namespace

std::string_view to_string(StateKind kind) {
  for (const auto& [k, name] : kStateNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StateKind state_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kStateNames) {
    if (n == name) return k;
  }
  throw InvalidArgument("unknown state kind '" + std::string(name) + "'");
}

void StateSpec::validate() const {
  switch (kind) {
    case StateKind::Ghz:
      if (n < 2) throw InvalidArgument("GHZ state needs n >= 2");
      break;
    case StateKind::Dicke:
      if (n < 1) throw InvalidArgument("Dicke state needs n >= 1");
      if (excitations < 0 || excitations > n) throw InvalidArgument("Dicke state needs 0 <= e <= n");
      break;
    case StateKind::W:
      if (n < 2) throw InvalidArgument("W state needs n >= 2");
      if (excitations != 1) throw InvalidArgument("W state has exactly one excitation");
      break;
    case StateKind::Cluster4:
      if (n != 4) throw InvalidArgument("Cluster4 state has n = 4");
      break;
    case StateKind::BellPhiPlus:
    case StateKind::BellPsiPlus:
    case StateKind::PartialPair:
      if (n != 2) throw InvalidArgument(std::string(to_string(kind)) + " state has n = 2");
      break;
  }
}

}  // namespace limdet
