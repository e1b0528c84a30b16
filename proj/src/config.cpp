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

#include "limdet/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace limdet {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing required field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw ConfigError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Outcome outcome_from_json(const Json& j) {
  const auto s = text(j, "outcome");
  if (s == "+") return Outcome::Plus;
  if (s == "-") return Outcome::Minus;
  if (s == "0") return Outcome::NoClick;
  throw ConfigError("outcome must be \"+\", \"-\" or \"0\"");
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Plus:
      return "+";
    case Outcome::Minus:
      return "-";
    case Outcome::NoClick:
      return "0";
  }
  return "?";
}

SettingsAssignment settings_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("settings must be \"auto\" or a list of per-party lists");
  SettingsAssignment out;
  for (const auto& party : j) {
    if (!party.is_array()) throw ConfigError("settings must be a list of per-party lists");
    std::vector<MeasurementSetting> row;
    for (const auto& s : party) row.push_back(setting_from_json(s));
    out.push_back(std::move(row));
  }
  return out;
}

SweepSpec sweep_from_json(const Json& j) {
  SweepSpec out;
  const auto parameter = text(require(j, "parameter"), "sweep.parameter");
  if (parameter == "ratio") {
    out.parameter = SweepSpec::Parameter::Ratio;
  } else if (parameter == "alpha") {
    out.parameter = SweepSpec::Parameter::Alpha;
  } else {
    throw ConfigError("sweep.parameter must be \"ratio\" or \"alpha\"");
  }
  if (j.contains("values")) {
    for (const auto& v : j.at("values")) out.values.push_back(number(v, "sweep value"));
    if (out.values.empty()) throw ConfigError("sweep.values must not be empty");
  } else {
    out.start = number(require(j, "start"), "sweep.start");
    out.stop = number(require(j, "stop"), "sweep.stop");
    out.step = number(require(j, "step"), "sweep.step");
    if (!(*out.step > 0.0) || *out.stop < *out.start) throw ConfigError("sweep needs start <= stop and step > 0");
  }
  return out;
}

template <typename F>
void collect(std::vector<Violation>& out, const std::string& field, F&& check) {
  try {
    check();
  } catch (const Error& e) {
    out.push_back({field, e.what()});
  } catch (const Json::exception& e) {
    out.push_back({field, e.what()});
  }
}

}  // namespace

std::vector<double> SweepSpec::grid() const {
  if (!values.empty()) return values;
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) out.push_back(snap_to_grid(*start + *step * i));
  return out;
}

Json to_json(const MeasurementSetting& s) { return {{"theta", s.theta}, {"phi", s.phi}}; }

Json to_json(const SettingsAssignment& s) {
  Json out = Json::array();
  for (const auto& party : s) {
    Json row = Json::array();
    for (const auto& setting : party) row.push_back(to_json(setting));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const StateSpec& s) {
  Json out{{"kind", std::string(to_string(s.kind))}, {"n", s.n}};
  if (s.kind == StateKind::Dicke) out["excitations"] = s.excitations;
  if (s.kind == StateKind::PartialPair) out["alpha"] = s.alpha;
  return out;
}

Json to_json(const BellExpression& e) {
  Json terms = Json::array();
  for (const auto& t : e.terms()) {
    Json settings = Json::array();
    Json outcomes = Json::array();
    for (std::size_t p = 0; p < t.settings.size(); ++p) {
      const bool absent = t.settings[p] == kAbsent;
      settings.push_back(absent ? Json(nullptr) : Json(t.settings[p]));
      if (e.form() == BellForm::Probability) {
        outcomes.push_back(absent ? Json(nullptr) : Json(outcome_name(t.outcomes[p])));
      }
    }
    Json term{{"coefficient", t.coefficient}, {"settings", std::move(settings)}};
    if (e.form() == BellForm::Probability) term["outcomes"] = std::move(outcomes);
    terms.push_back(std::move(term));
  }
  return {{"name", e.name()},
          {"parties", e.n_parties()},
          {"settings_per_party", e.settings_per_party()},
          {"form", std::string(to_string(e.form()))},
          {"terms", std::move(terms)},
          {"bound", e.bound()}};
}

Json to_json(const ScenarioConfig& c) {
  Json out{{"state", to_json(c.state)},
           {"N", c.n},
           {"k", c.k},
           {"eta_L", c.eta_low.value()},
           {"eta_H", c.eta_high.value()},
           {"visibility", c.visibility},
           {"convention", std::string(to_string(c.convention))}};
  if (c.lost != 0) out["lost"] = c.lost;
  if (c.projectors) {
    Json list = Json::array();
    for (const auto& p : *c.projectors) list.push_back(to_json(p));
    out["projectors"] = std::move(list);
  } else {
    out["projectors"] = "default";
  }
  switch (c.bell_source.kind) {
    case BellSource::Kind::Preset:
      out["bell"] = {{"preset", c.bell_source.reference}};
      break;
    case BellSource::Kind::File:
      out["bell"] = {{"file", c.bell_source.reference}};
      break;
    case BellSource::Kind::Inline:
      out["bell"] = to_json(c.bell);
      break;
  }
  out["settings"] = c.settings ? to_json(*c.settings) : Json("auto");
  if (!c.pinned_etas.empty()) {
    Json pinned = Json::array();
    for (const auto& p : c.pinned_etas) pinned.push_back(p ? Json(*p) : Json(nullptr));
    out["pinned_etas"] = std::move(pinned);
  }
  if (c.free_phase) out["free_phase"] = true;
  return out;
}

Json to_json(const SweepSpec& s) {
  Json out{{"parameter", s.parameter == SweepSpec::Parameter::Ratio ? "ratio" : "alpha"}};
  if (!s.values.empty()) {
    out["values"] = s.values;
  } else {
    out["start"] = *s.start;
    out["stop"] = *s.stop;
    out["step"] = *s.step;
  }
  return out;
}

Json to_json(const RunConfig& c) {
  Json out = to_json(c.scenario);
  if (c.sweep) out["sweep"] = to_json(*c.sweep);
  return out;
}

Json to_json(const SolveResult& r) {
  return {{"status", std::string(to_string(r.status))},
          {"critical_value", r.critical_value},
          {"iterations", r.iterations},
          {"bracket", {r.bracket_lo, r.bracket_hi}},
          {"residual", r.residual},
          {"settings", to_json(r.settings)},
          {"message", r.message}};
}

MeasurementSetting setting_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("measurement setting must be an object with theta and phi");
  MeasurementSetting s;
  s.theta = number(require(j, "theta"), "theta");
  s.phi = j.contains("phi") ? number(j.at("phi"), "phi") : 0.0;
  return s;
}

StateSpec state_from_json(const Json& j) {
  StateSpec s;
  s.kind = state_kind_from_string(text(require(j, "kind"), "state.kind"));
  switch (s.kind) {
    case StateKind::Cluster4:
      s.n = j.contains("n") ? integer(j.at("n"), "state.n") : 4;
      break;
    case StateKind::BellPhiPlus:
    case StateKind::BellPsiPlus:
      s.n = j.contains("n") ? integer(j.at("n"), "state.n") : 2;
      break;
    case StateKind::PartialPair:
      s.n = j.contains("n") ? integer(j.at("n"), "state.n") : 2;
      s.alpha = number(require(j, "alpha"), "state.alpha");
      break;
    case StateKind::W:
      s.n = integer(require(j, "n"), "state.n");
      s.excitations = 1;
      break;
    case StateKind::Dicke:
      s.n = integer(require(j, "n"), "state.n");
      s.excitations = integer(require(j, "excitations"), "state.excitations");
      break;
    case StateKind::Ghz:
      s.n = integer(require(j, "n"), "state.n");
      break;
  }
  s.validate();
  return s;
}

BellExpression bell_expression_from_json(const Json& j) {
  const auto name = j.contains("name") ? text(j.at("name"), "name") : std::string("custom");
  const int parties = integer(require(j, "parties"), "parties");
  const int settings = integer(require(j, "settings_per_party"), "settings_per_party");
  const auto form = bell_form_from_string(text(require(j, "form"), "form"));
  const auto& terms_json = require(j, "terms");
  if (!terms_json.is_array()) throw ConfigError("terms must be a list");
  std::vector<BellTerm> terms;
  for (const auto& t : terms_json) {
    BellTerm term;
    term.coefficient = number(require(t, "coefficient"), "coefficient");
    const auto& s = require(t, "settings");
    if (!s.is_array()) throw ConfigError("term settings must be a list");
    for (const auto& v : s) term.settings.push_back(v.is_null() ? kAbsent : integer(v, "setting index"));
    if (form == BellForm::Probability) {
      const auto& o = require(t, "outcomes");
      if (!o.is_array() || o.size() != s.size()) throw ConfigError("term outcomes must match its settings");
      for (std::size_t p = 0; p < o.size(); ++p) {
        term.outcomes.push_back(o[p].is_null() ? Outcome::Plus : outcome_from_json(o[p]));
        if (o[p].is_null() != s[p].is_null()) throw ConfigError("absent parties need null setting and outcome");
      }
    }
    terms.push_back(std::move(term));
  }
  std::optional<double> bound;
  if (j.contains("bound") && !j.at("bound").is_null()) bound = number(j.at("bound"), "bound");
  return BellExpression(name, parties, settings, form, std::move(terms), bound);
}

RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig out;
  ScenarioConfig& c = out.scenario;
  c.state = state_from_json(require(j, "state"));
  c.n = integer(require(j, "N"), "N");
  c.k = integer(require(j, "k"), "k");
  c.lost = j.contains("lost") ? integer(j.at("lost"), "lost") : 0;
  c.eta_low = Efficiency(number(require(j, "eta_L"), "eta_L"));
  c.eta_high = Efficiency(number(require(j, "eta_H"), "eta_H"));
  c.visibility = number(require(j, "visibility"), "visibility");
  c.convention = convention_from_string(text(require(j, "convention"), "convention"));
  c.free_phase = j.contains("free_phase") && j.at("free_phase").get<bool>();

  const auto& bell = require(j, "bell");
  if (bell.is_object() && bell.contains("preset")) {
    const auto name = text(bell.at("preset"), "bell.preset");
    c.bell = preset(bell_preset_from_string(name));
    c.bell_source = {BellSource::Kind::Preset, name};
  } else if (bell.is_object() && bell.contains("file")) {
    const auto file = text(bell.at("file"), "bell.file");
    c.bell = load_bell_expression(base_dir / file);
    c.bell_source = {BellSource::Kind::File, file};
  } else {
    c.bell = bell_expression_from_json(bell);
    c.bell_source = {BellSource::Kind::Inline, ""};
  }

  if (j.contains("projectors")) {
    const auto& p = j.at("projectors");
    if (p.is_string()) {
      if (p.get<std::string>() != "default") throw ConfigError("projectors must be \"default\" or a list");
    } else if (p.is_array()) {
      std::vector<MeasurementSetting> list;
      for (const auto& s : p) list.push_back(setting_from_json(s));
      c.projectors = std::move(list);
    } else {
      throw ConfigError("projectors must be \"default\" or a list");
    }
  }
  if (j.contains("settings")) {
    const auto& s = j.at("settings");
    if (s.is_string()) {
      if (s.get<std::string>() != "auto") throw ConfigError("settings must be \"auto\" or a list");
    } else {
      c.settings = settings_from_json(s);
    }
  }
  if (j.contains("pinned_etas")) {
    for (const auto& p : j.at("pinned_etas")) {
      c.pinned_etas.push_back(p.is_null() ? std::nullopt : std::optional<double>(number(p, "pinned_etas entry")));
    }
  }
  if (j.contains("sweep")) out.sweep = sweep_from_json(j.at("sweep"));
  c.validate();
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return run_config_from_json(j, path.parent_path());
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

BellExpression load_bell_expression(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return bell_expression_from_json(j);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

bool is_bell_expression_document(const Json& j) { return j.is_object() && j.contains("terms"); }

std::vector<Violation> validate_document(const Json& j, const std::filesystem::path& base_dir) {
  std::vector<Violation> out;
  if (!j.is_object()) return {{"document", "must be a JSON object"}};
  if (is_bell_expression_document(j)) {
    collect(out, "bell", [&] { bell_expression_from_json(j); });
    return out;
  }

  for (const char* key : {"state", "N", "k", "eta_L", "eta_H", "visibility", "convention", "bell"}) {
    if (!j.contains(key)) out.push_back({key, "required"});
  }
  auto unit_interval = [&](const char* key, const char* rule) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) {
      out.push_back({key, "must be a number"});
    } else if (!(v.get<double>() >= 0.0 && v.get<double>() <= 1.0)) {
      out.push_back({key, rule});
    }
  };
  unit_interval("eta_L", "efficiency out of [0,1]");
  unit_interval("eta_H", "efficiency out of [0,1]");
  unit_interval("visibility", "visibility out of [0,1]");
  if (j.contains("pinned_etas")) {
    for (const auto& p : j.at("pinned_etas")) {
      if (!p.is_null() && (!p.is_number() || !(p.get<double>() >= 0.0 && p.get<double>() <= 1.0))) {
        out.push_back({"pinned_etas", "efficiency out of [0,1]"});
      }
    }
  }

  std::optional<StateSpec> state;
  if (j.contains("state")) collect(out, "state", [&] { state = state_from_json(j.at("state")); });
  const bool have_n = j.contains("N") && j.at("N").is_number_integer();
  const bool have_k = j.contains("k") && j.at("k").is_number_integer();
  if (j.contains("N") && !have_n) out.push_back({"N", "must be an integer"});
  if (j.contains("k") && !have_k) out.push_back({"k", "must be an integer"});
  if (have_n && have_k) {
    const int n = j.at("N").get<int>();
    const int k = j.at("k").get<int>();
    if (k > n) out.push_back({"k", "k exceeds N"});
    if (k < 2) out.push_back({"k", "k must be at least 2"});
    if (state && state->n != n) out.push_back({"N", "N does not match the state's qubit count"});
  }
  if (j.contains("convention")) collect(out, "convention", [&] { convention_from_string(text(j.at("convention"), "convention")); });
  if (j.contains("sweep")) collect(out, "sweep", [&] { sweep_from_json(j.at("sweep")); });

  if (out.empty()) collect(out, "config", [&] { run_config_from_json(j, base_dir); });
  return out;
}

}  // namespace limdet
