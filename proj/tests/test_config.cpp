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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "limdet/config.hpp"

namespace limdet {
namespace {

const std::filesystem::path kConfigDir = LIMDET_CONFIG_DIR;

std::vector<std::filesystem::path> bundled_configs() {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(kConfigDir)) {
    if (entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Json ghz4() { return read_json_file(kConfigDir / "ghz4.json"); }

bool has_violation(const std::vector<Violation>& v, const std::string& field, const std::string& rule) {
  return std::find(v.begin(), v.end(), Violation{field, rule}) != v.end();
}

TEST(Bundled, EveryConfigValidatesAndRoundTrips) {
  const auto paths = bundled_configs();
  ASSERT_GE(paths.size(), 15u);
  for (const auto& path : paths) {
    SCOPED_TRACE(path.filename().string());
    const auto doc = read_json_file(path);
    EXPECT_TRUE(validate_document(doc, kConfigDir).empty());
    const Json again = is_bell_expression_document(doc) ? to_json(load_bell_expression(path))
                                                        : to_json(load_run_config(path));
    EXPECT_EQ(again, doc);
  }
}

TEST(Validate, KExceedsN) {
  auto doc = ghz4();
  doc["k"] = 5;
  EXPECT_TRUE(has_violation(validate_document(doc), "k", "k exceeds N"));
}

TEST(Validate, EfficiencyOutOfRange) {
  auto doc = ghz4();
  doc["eta_H"] = 1.2;
  doc["eta_L"] = -0.5;
  const auto v = validate_document(doc);
  EXPECT_TRUE(has_violation(v, "eta_H", "efficiency out of [0,1]"));
  EXPECT_TRUE(has_violation(v, "eta_L", "efficiency out of [0,1]"));
}

TEST(Validate, MissingFieldsAndBadTypes) {
  auto doc = ghz4();
  doc.erase("convention");
  doc.erase("eta_L");
  doc["N"] = "four";
  const auto v = validate_document(doc);
  EXPECT_TRUE(has_violation(v, "convention", "required"));
  EXPECT_TRUE(has_violation(v, "eta_L", "required"));
  EXPECT_TRUE(has_violation(v, "N", "must be an integer"));
}

TEST(Validate, DeepErrorsAreReported) {
  auto doc = ghz4();
  doc["bell"] = {{"preset", "MERMIN"}};
  const auto v = validate_document(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "config");
  doc = ghz4();
  doc["state"] = {{"kind", "Dicke"}, {"n", 4}, {"excitations", 7}};
  EXPECT_FALSE(validate_document(doc).empty());
}

TEST(Validate, ValidGhz4IsClean) { EXPECT_TRUE(validate_document(ghz4()).empty()); }

TEST(Parse, NoSilentEfficiencyDefaults) {
  auto doc = ghz4();
  doc.erase("eta_H");
  EXPECT_THROW(run_config_from_json(doc), ConfigError);
}

TEST(Parse, MalformedFile) {
  const auto path = std::filesystem::temp_directory_path() / "limdet_bad.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(read_json_file(path), ConfigError);
  EXPECT_THROW(read_json_file(kConfigDir / "missing.json"), ConfigError);
}

TEST(Parse, BellExpressionDocument) {
  const auto chsh = load_bell_expression(kConfigDir / "chsh.json");
  EXPECT_EQ(chsh.terms(), preset(BellPreset::Chsh).terms());
  EXPECT_EQ(chsh.bound(), 2.0);
  Json ch = to_json(preset(BellPreset::EberhardCh));
  EXPECT_EQ(ch["terms"][4]["settings"][1], nullptr);
  EXPECT_EQ(ch["terms"][4]["outcomes"][0], "+");
  EXPECT_EQ(to_json(bell_expression_from_json(ch)), ch);
  ch["bound"] = 1.0;
  EXPECT_THROW(bell_expression_from_json(ch), InvalidArgument);
}

TEST(Parse, ExplicitSettingsAndPinnedEtas) {
  auto doc = read_json_file(kConfigDir / "bell_visibility.json");
  doc["settings"] = to_json(chsh_seed_settings());
  doc["pinned_etas"] = {1.0, nullptr};
  const auto rc = run_config_from_json(doc);
  ASSERT_TRUE(rc.scenario.settings);
  EXPECT_EQ(*rc.scenario.settings, chsh_seed_settings());
  ASSERT_EQ(rc.scenario.pinned_etas.size(), 2u);
  EXPECT_EQ(rc.scenario.pinned_etas[0], 1.0);
  EXPECT_FALSE(rc.scenario.pinned_etas[1]);
  EXPECT_EQ(to_json(rc), doc);
}

TEST(Sweep, GridFromRange) {
  const auto rc = load_run_config(kConfigDir / "fig2.json");
  ASSERT_TRUE(rc.sweep);
  const auto grid = rc.sweep->grid();
  ASSERT_EQ(grid.size(), 20u);
  EXPECT_EQ(grid.front(), 0.05);
  EXPECT_EQ(grid[2], 0.15);
  EXPECT_EQ(grid.back(), 1.0);
}

}  // namespace
}  // namespace limdet
