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

#include <stdexcept>
#include <string>

namespace limdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state would exceed the configured qubit cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A qubit index is out of range, duplicated, or the index set is not allowed.
class InvalidIndexError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter or specification violates its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A projector had (numerically) zero weight on the state it was applied to.
class ZeroProjection : public Error {
 public:
  using Error::Error;
};

}  // namespace limdet
