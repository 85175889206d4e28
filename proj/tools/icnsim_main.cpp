#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "icnsim/metrics.hpp"
#include "icnsim/scenario.hpp"
#include "icnsim/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenarioError = 2;
constexpr int kExitInvariantViolation = 3;

int log_level() {
  const char* env = std::getenv("ICNSIM_LOG");
  if (env == nullptr) {
    return 0;
  }
  std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& message) {
  if (log_level() >= 1) {
    std::cerr << "icnsim: " << message << "\n";
  }
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "icnsim: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return true;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& trace_path, const std::string& report_path,
            std::optional<std::uint64_t> until) {
  icnsim::Scenario scenario;
  try {
    scenario = icnsim::load_scenario(scenario_path);
  } catch (const icnsim::ScenarioError& e) {
    std::cerr << "icnsim: scenario error: " << e.what() << "\n";
    return kExitScenarioError;
  }
  log_info("loaded scenario with " + std::to_string(scenario.nodes.size()) + " nodes, " +
           std::to_string(scenario.timeline.size()) + " timeline entries");

  icnsim::Simulation sim(std::move(scenario), seed);
  icnsim::MetricsReport report;
  try {
    report = sim.run(until);
  } catch (const icnsim::SimulationBug& e) {
    // flush whatever trace exists before reporting the violation
    if (!trace_path.empty()) {
      write_file(trace_path, sim.trace().to_text());
    }
    std::cerr << "icnsim: invariant violation: " << e.what() << "\n";
    return kExitInvariantViolation;
  } catch (const icnsim::ScenarioError& e) {
    std::cerr << "icnsim: scenario error: " << e.what() << "\n";
    return kExitScenarioError;
  }

  auto problems = icnsim::check_trace_invariants(sim.trace().records());
  if (!trace_path.empty() && !write_file(trace_path, sim.trace().to_text())) {
    return 1;
  }
  std::string report_json = report.to_json();
  if (!report_path.empty()) {
    if (!write_file(report_path, report_json)) {
      return 1;
    }
  } else {
    std::cout << report_json;
  }
  log_info("run complete: " + std::to_string(sim.trace().records().size()) +
           " trace records");
  if (!problems.empty()) {
    for (const auto& p : problems) {
      std::cerr << "icnsim: invariant violation: " << p << "\n";
    }
    return kExitInvariantViolation;
  }
  return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
  try {
    icnsim::Scenario scenario = icnsim::load_scenario(scenario_path);
    std::cout << "ok: " << scenario.nodes.size() << " nodes, " << scenario.links.size()
              << " links, " << scenario.ues.size() << " ues, " << scenario.timeline.size()
              << " timeline entries\n";
    return kExitOk;
  } catch (const icnsim::ScenarioError& e) {
    std::cerr << "icnsim: scenario error: " << e.what() << "\n";
    return kExitScenarioError;
  }
}

int cmd_oracle(const std::string& trace_path, const std::string& report_path) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) {
    std::cerr << "icnsim: cannot open trace " << trace_path << "\n";
    return kExitScenarioError;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::vector<icnsim::TraceRecord> records;
  try {
    records = icnsim::parse_trace_text(buffer.str());
  } catch (const std::exception& e) {
    std::cerr << "icnsim: bad trace: " << e.what() << "\n";
    return kExitScenarioError;
  }
  auto problems = icnsim::check_trace_invariants(records);
  std::string report_json = icnsim::build_report(records).to_json();
  if (!report_path.empty()) {
    if (!write_file(report_path, report_json)) {
      return 1;
    }
  } else {
    std::cout << report_json;
  }
  if (!problems.empty()) {
    for (const auto& p : problems) {
      std::cerr << "icnsim: invariant violation: " << p << "\n";
    }
    return kExitInvariantViolation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"icnsim: deterministic simulator for sliced ICN networks"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string trace_path;
  std::string report_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> until;

  CLI::App* run = app.add_subcommand("run", "execute a scenario and report metrics");
  run->add_option("scenario", scenario_path, "scenario file (.icnscn or .json)")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--trace", trace_path, "write the event trace to this file");
  run->add_option("--report", report_path, "write the metrics report to this file");
  run->add_option("--until", until, "stop the simulation at this time (microseconds)");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario");
  validate->add_option("scenario", validate_path, "scenario file")->required();

  std::string oracle_trace;
  std::string oracle_report;
  CLI::App* oracle =
      app.add_subcommand("oracle", "re-derive the report from a trace and check invariants");
  oracle->add_option("trace", oracle_trace, "trace file from a previous run")->required();
  oracle->add_option("--report", oracle_report, "write the derived report to this file");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return cmd_run(scenario_path, seed, trace_path, report_path, until);
  }
  if (validate->parsed()) {
    return cmd_validate(validate_path);
  }
  return cmd_oracle(oracle_trace, oracle_report);
}
