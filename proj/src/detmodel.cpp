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

#include "limdet/detmodel.hpp"

#include <string>

namespace limdet {

std::string_view to_string(Convention convention) {
  return convention == Convention::Fold ? "fold" : "trinary";
}

Convention convention_from_string(std::string_view name) {
  if (name == "fold") return Convention::Fold;
  if (name == "trinary") return Convention::Trinary;
  throw InvalidArgument("unknown convention '" + std::string(name) + "' (expected fold or trinary)");
}

}  // namespace limdet
