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

// JSON documents: Bell expressions, scenario configs and solver results.
//
// Angles are radians. Setting indices are 0-based; a party that does not
// enter a term has `null` in the term's "settings" (and "outcomes") list.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "limdet/analysis.hpp"
#include "limdet/bell.hpp"
#include "limdet/protocol.hpp"

namespace limdet {

using Json = nlohmann::json;

/// Thrown when a document is malformed (wrong types, missing keys, bad values).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Violation {
  std::string field;
  std::string rule;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Grid for the `sweep` command. Either an explicit value list or start/stop/step.
struct SweepSpec {
  enum class Parameter { Ratio, Alpha };
  Parameter parameter = Parameter::Ratio;
  std::vector<double> values;
  std::optional<double> start, stop, step;

  std::vector<double> grid() const;
};

/// Everything a config file can hold.
struct RunConfig {
  ScenarioConfig scenario;
  std::optional<SweepSpec> sweep;
};

Json to_json(const MeasurementSetting& s);
Json to_json(const SettingsAssignment& s);
Json to_json(const StateSpec& s);
Json to_json(const BellExpression& e);
Json to_json(const ScenarioConfig& c);
Json to_json(const SweepSpec& s);
Json to_json(const RunConfig& c);
Json to_json(const SolveResult& r);

MeasurementSetting setting_from_json(const Json& j);
StateSpec state_from_json(const Json& j);
BellExpression bell_expression_from_json(const Json& j);

/// `base_dir` resolves relative "bell": {"file": ...} references.
RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir = {});

Json read_json_file(const std::filesystem::path& path);
RunConfig load_run_config(const std::filesystem::path& path);
BellExpression load_bell_expression(const std::filesystem::path& path);

/// True if the document looks like a Bell expression rather than a scenario.
bool is_bell_expression_document(const Json& j);

/// Every invariant broken by the document; empty iff it loads cleanly.
std::vector<Violation> validate_document(const Json& j, const std::filesystem::path& base_dir = {});

}  // namespace limdet
