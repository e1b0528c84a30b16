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

#include "limdet/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "limdet/analysis.hpp"
#include "limdet/config.hpp"

namespace limdet {

namespace {

// Raised for solver outcomes that map to exit_code::kNotFound.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

struct Report {
  Json inputs = Json::object();
  Json result = Json::object();
  Json diagnostics = Json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<Json>> csv_rows;
};

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_report(const Report& report, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    const Json doc{{"inputs", report.inputs}, {"result", report.result}, {"diagnostics", report.diagnostics}};
    out << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < report.csv_header.size(); ++i) out << (i ? "," : "") << report.csv_header[i];
  out << '\n';
  for (const auto& row : report.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

// Single-row CSV view of a flat result object, in insertion order of `keys`.
void scalar_table(Report& report, std::initializer_list<const char*> keys) {
  std::vector<Json> row;
  for (const char* key : keys) {
    report.csv_header.emplace_back(key);
    row.push_back(report.result.contains(key) ? report.result.at(key) : Json(nullptr));
  }
  report.csv_rows.push_back(std::move(row));
}

Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <typename T>
Json nullable(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

OptimizerOptions optimizer_options(const RunRequest& request) {
  OptimizerOptions opts;
  opts.seed = request.seed;
  opts.restarts = request.restarts;
  return opts;
}

void add_solver_diagnostics(Report& report, const ScenarioConfig& config, const SolveResult& solve) {
  report.diagnostics["convention"] = std::string(to_string(config.convention));
  report.diagnostics["iterations"] = solve.iterations;
  report.diagnostics["residual"] = solve.residual;
  report.diagnostics["bracket"] = {solve.bracket_lo, solve.bracket_hi};
  report.diagnostics["optimizer_starts"] = solve.optimizer_starts;
  report.diagnostics["message"] = solve.message;
}

void require_found(const SolveResult& solve) {
  if (!solve.found()) throw NotFoundError(solve.message.empty() ? "no violation at the starting point" : solve.message);
}

Report do_eval(const RunConfig& rc, const RunRequest& request) {
  const auto& config = rc.scenario;
  const auto eval = composite_lhs(config, optimizer_options(request), request.max_qubits);
  Report report;
  report.result = {{"composite_lhs", eval.lhs},
                   {"quantum_value", eval.quantum_value},
                   {"bound", eval.bound},
                   {"violation", eval.lhs > 0.0},
                   {"weights", eval.weights},
                   {"low_factor", eval.low_factor},
                   {"settings", to_json(eval.settings)}};
  report.diagnostics = {{"convention", std::string(to_string(config.convention))},
                        {"optimizer_starts", eval.optimizer_starts},
                        {"optimizer_restarts", request.restarts}};
  scalar_table(report, {"composite_lhs", "quantum_value", "bound", "low_factor"});
  return report;
}

Report do_critical_eta(const RunConfig& rc, const RunRequest& request) {
  const auto& config = rc.scenario;
  const auto solve = critical_eta_high(config, optimizer_options(request), request.max_qubits);
  require_found(solve);
  Report report;
  report.result = to_json(solve);
  add_solver_diagnostics(report, config, solve);
  report.diagnostics["optimizer_restarts"] = request.restarts;
  scalar_table(report, {"critical_value", "residual", "iterations"});
  return report;
}

Report do_critical_visibility(const RunConfig& rc, const RunRequest& request) {
  const auto& config = rc.scenario;
  const auto vis = critical_visibility(config, optimizer_options(request), request.max_qubits);
  require_found(vis.solve);
  Report report;
  report.result = to_json(vis.solve);
  add_solver_diagnostics(report, config, vis.solve);
  report.diagnostics["optimizer_restarts"] = request.restarts;
  report.diagnostics["closed_form_noise_reading"] = nullable(vis.closed_form_noise_reading);
  report.diagnostics["closed_form_mixture_reading"] = nullable(vis.closed_form_mixture_reading);
  scalar_table(report, {"critical_value", "residual", "iterations"});
  return report;
}

Report do_duration(const RunConfig& rc, const RunRequest& request) {
  const auto& config = rc.scenario;
  const auto projected = projected_state(config, request.max_qubits);
  const auto p = success_probability(projected.weights, config.eta_low.value(), config.eta_high.value(), config.n,
                                     config.k);
  Report report;
  report.result = {{"weights", projected.weights},
                   {"p_succ", p.p_succ},
                   {"p_succ_standard", p.p_succ_standard},
                   {"n_prime", p.p_succ > 0.0 ? Json(p.p_succ_standard / p.p_succ) : Json(nullptr)}};
  report.diagnostics = {{"eta_ratio", config.eta_high.value() > 0.0
                                          ? Json(config.eta_low.value() / config.eta_high.value())
                                          : Json(nullptr)}};
  if (!(p.p_succ > 0.0)) report.diagnostics["message"] = "success probability is zero; n_prime undefined";
  scalar_table(report, {"p_succ", "p_succ_standard", "n_prime"});
  return report;
}

Report do_damaged(const RunConfig& rc, const RunRequest& request) {
  const auto& config = rc.scenario;
  const auto projected = projected_state(config, request.max_qubits);
  const auto etas = bell_party_etas(config, config.eta_high.value());
  auto opts = optimizer_options(request);
  opts.free_phase = config.free_phase;
  const auto best = optimize_settings(config.bell, projected.state, etas, config.convention, opts);

  Report report;
  report.result = {{"lost", config.lost},
                   {"weights", projected.weights},
                   {"total_weight", projected.total_weight()},
                   {"quantum_value", best.value},
                   {"bound", config.bell.bound()},
                   {"violation", best.value > config.bell.bound()},
                   {"settings", to_json(best.settings)}};
  if (config.k == 2) {
    const PureState psi_plus(CVector<double>{{0.0, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, 0.0}});
    const double fraction = projected.state.overlap(psi_plus);
    report.result["psi_plus_fraction"] = fraction;
    report.result["psi_plus_weight"] = fraction * projected.total_weight();
  }
  const auto projectors = resolved_projectors(config);
  const bool computational = std::all_of(projectors.begin(), projectors.end(), [](const MeasurementSetting& s) {
    return s == MeasurementSetting::zero() || s == MeasurementSetting::one();
  });
  if (config.state.kind == StateKind::Dicke || config.state.kind == StateKind::W) {
    if (computational && config.k == 2 && config.visibility == 1.0) {
      DickeLossSpec spec{config.n, effective_excitations(config.state), config.lost,
                         static_cast<int>(std::count(projectors.begin(), projectors.end(), MeasurementSetting::one()))};
      report.diagnostics["closed_form_psi_plus_weight"] = psi_plus_weight(spec);
      report.diagnostics["closed_form_psi_plus_fraction"] = psi_plus_fraction(spec);
    }
  }
  report.diagnostics["convention"] = std::string(to_string(config.convention));
  report.diagnostics["optimizer_starts"] = best.starts;
  report.diagnostics["optimizer_restarts"] = request.restarts;
  scalar_table(report, {"lost", "total_weight", "quantum_value", "bound", "psi_plus_weight"});
  return report;
}

// Evaluates f(0..count-1) on a small thread pool; results keep grid order.
template <typename F>
std::vector<Json> parallel_map(std::size_t count, F f) {
  std::vector<Json> out(count);
  std::vector<std::string> errors(count);
  std::atomic<std::size_t> next{0};
  const auto workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(e);
  }
  return out;
}

Report do_sweep(const RunConfig& rc, const RunRequest& request) {
  if (!rc.sweep) throw ConfigError("sweep command needs a \"sweep\" section in the config");
  const auto& config = rc.scenario;
  const auto grid = rc.sweep->grid();
  Report report;
  report.diagnostics["grid_points"] = grid.size();

  if (rc.sweep->parameter == SweepSpec::Parameter::Ratio) {
    const auto projected = projected_state(config, request.max_qubits);
    Json rows = Json::array();
    report.csv_header = {"ratio", "n_prime"};
    for (double ratio : grid) {
      const double n_prime = trial_ratio(projected.weights, ratio, 1.0, config.n, config.k);
      rows.push_back({{"ratio", ratio}, {"n_prime", n_prime}});
      report.csv_rows.push_back({ratio, n_prime});
    }
    report.result = {{"parameter", "ratio"}, {"weights", projected.weights}, {"rows", std::move(rows)}};
    return report;
  }

  if (config.projected_count() < 1) throw ConfigError("alpha sweep needs at least one projected qubit");
  auto solve_at = [&](std::size_t i) {
    ScenarioConfig local = config;
    auto projectors = resolved_projectors(config);
    projectors[0] = MeasurementSetting::real_superposition(grid[i]);
    local.projectors = std::move(projectors);
    const auto solve = critical_eta_high(local, optimizer_options(request), request.max_qubits);
    return Json{{"alpha", grid[i]},
                {"critical_eta", solve.found() ? Json(solve.critical_value) : Json(nullptr)},
                {"status", std::string(to_string(solve.status))},
                {"iterations", solve.iterations},
                {"residual", solve.residual}};
  };
  const auto rows = parallel_map(grid.size(), solve_at);
  report.csv_header = {"alpha", "critical_eta"};
  for (const auto& row : rows) report.csv_rows.push_back({row.at("alpha"), row.at("critical_eta")});
  report.result = {{"parameter", "alpha"}, {"rows", rows}};
  report.diagnostics["convention"] = std::string(to_string(config.convention));
  report.diagnostics["optimizer_restarts"] = request.restarts;
  return report;
}

Report do_lhv_bound(const Json& doc, const RunRequest& request) {
  const auto expr = is_bell_expression_document(doc)
                        ? bell_expression_from_json(doc)
                        : run_config_from_json(doc, request.config_path.parent_path()).scenario.bell;
  Report report;
  report.inputs["bell"] = to_json(expr);
  const double enumerated = lhv_bound(expr);
  report.result = {{"name", expr.name()}, {"lhv_bound", enumerated}};
  report.diagnostics = {{"form", std::string(to_string(expr.form()))},
                        {"parties", expr.n_parties()},
                        {"strategies", std::pow(expr.form() == BellForm::Probability ? 9.0 : 4.0, expr.n_parties())}};
  scalar_table(report, {"name", "lhv_bound"});
  return report;
}

int validate_command(const Json& doc, const RunRequest& request, std::ostream& out) {
  const auto violations = validate_document(doc, request.config_path.parent_path());
  Report report;
  report.inputs = {{"command", "validate"}, {"config", request.config_path.string()}};
  Json list = Json::array();
  report.csv_header = {"field", "rule"};
  for (const auto& v : violations) {
    list.push_back({{"field", v.field}, {"rule", v.rule}});
    report.csv_rows.push_back({v.field, v.rule});
  }
  report.result = {{"valid", violations.empty()}, {"violations", std::move(list)}};
  write_report(report, request.output, out);
  return violations.empty() ? exit_code::kOk : exit_code::kConfigError;
}

int dispatch(const RunRequest& request, std::ostream& out, std::ostream& err) {
  Json doc;
  RunConfig rc;
  try {
    doc = read_json_file(request.config_path);
    if (request.command == Command::Validate) return validate_command(doc, request, out);
    if (request.command != Command::LhvBound) rc = run_config_from_json(doc, request.config_path.parent_path());
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::kConfigError;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::kConfigError;
  }

  Report report;
  switch (request.command) {
    case Command::Eval:
      report = do_eval(rc, request);
      break;
    case Command::CriticalEta:
      report = do_critical_eta(rc, request);
      break;
    case Command::CriticalVisibility:
      report = do_critical_visibility(rc, request);
      break;
    case Command::Duration:
      report = do_duration(rc, request);
      break;
    case Command::Damaged:
      report = do_damaged(rc, request);
      break;
    case Command::Sweep:
      report = do_sweep(rc, request);
      break;
    case Command::LhvBound:
      try {
        report = do_lhv_bound(doc, request);
      } catch (const Json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::kConfigError;
      } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::kConfigError;
      }
      break;
    case Command::Validate:
      break;
  }
  Json echoed = request.command == Command::LhvBound ? report.inputs.value("bell", Json()) : to_json(rc);
  report.inputs = {{"command", std::string(to_string(request.command))},
                   {"config_path", request.config_path.string()},
                   {"config", std::move(echoed)},
                   {"seed", request.seed},
                   {"restarts", request.restarts},
                   {"max_qubits", request.max_qubits}};
  write_report(report, request.output, out);
  return exit_code::kOk;
}

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"eval", Command::Eval},         {"critical-eta", Command::CriticalEta},
      {"critical-visibility", Command::CriticalVisibility},
      {"duration", Command::Duration}, {"damaged", Command::Damaged},
      {"sweep", Command::Sweep},       {"lhv-bound", Command::LhvBound},
      {"validate", Command::Validate}};
  return names;
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [name, c] : command_names()) {
    if (c == command) return name;
  }
  return "?";
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
  try {
    if (request.output_path) {
      std::ostringstream buffer;
      const int code = dispatch(request, buffer, err);
      if (code == exit_code::kOk || request.command == Command::Validate) {
        std::ofstream file(*request.output_path, std::ios::binary);
        if (!file) {
          err << "cannot write " << request.output_path->string() << '\n';
          return exit_code::kFailure;
        }
        file << buffer.str();
      }
      return code;
    }
    return dispatch(request, out, err);
  } catch (const NotFoundError& e) {
    err << "not found: " << e.what() << '\n';
    return exit_code::kNotFound;
  } catch (const ZeroProjection& e) {
    err << "zero projection: " << e.what() << '\n';
    return exit_code::kNotFound;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kFailure;
  }
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bell tests with a limited number of efficient detectors"};
  app.require_subcommand(1);

  RunRequest request;
  std::string config_path;
  std::string output_path;
  std::uint64_t seed = request.seed;
  unsigned restarts = static_cast<unsigned>(request.restarts);
  unsigned max_qubits = static_cast<unsigned>(request.max_qubits);
  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};

  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, command] : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Scenario or Bell-expression JSON file")->required();
    sub->add_option("--output", request.output, "Report format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--out", output_path, "Write the report to this file");
    sub->add_option("--seed", seed, "Optimizer seed");
    sub->add_option("--restarts", restarts, "Random optimizer starts");
    sub->add_option("--max-qubits", max_qubits, "Largest register allowed")->check(CLI::Range(1u, 24u));
    subs.emplace_back(sub, command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kConfigError;
  }
  for (const auto& [sub, command] : subs) {
    if (sub->parsed()) request.command = command;
  }
  request.config_path = config_path;
  if (!output_path.empty()) request.output_path = output_path;
  request.seed = seed;
  request.restarts = static_cast<int>(restarts);
  request.max_qubits = static_cast<int>(max_qubits);
  return run(request, out, err);
}

}  // namespace limdet
