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

// Command-line front end. `run` does the work and writes to the given
// streams so it can be driven from tests without a process boundary.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "limdet/qstate.hpp"

namespace limdet {

enum class Command { Eval, CriticalEta, CriticalVisibility, Duration, Damaged, Sweep, LhvBound, Validate };
enum class OutputFormat { Json, Csv };

std::string_view to_string(Command command);

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNotFound = 3;
}  // namespace exit_code

struct RunRequest {
  Command command = Command::Eval;
  std::filesystem::path config_path;
  OutputFormat output = OutputFormat::Json;
  std::optional<std::filesystem::path> output_path;  // standard output when absent
  std::uint64_t seed = 20190319;
  int restarts = 64;
  int max_qubits = kDefaultMaxQubits;
};

/// Executes one request. The report goes to `out` (or the output file),
/// diagnostics for failures go to `err`. Returns one of exit_code::*.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

/// Parses argv and calls run().
int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace limdet
