#pragma once

// Run configuration, report assembly and serialization (JSON, CSV, text table).
//
// Config files are INI:
//
//   [run]
//   command = verify          ; or pointwise
//   r = 0,1,2                 ; empty: 0..n-1 for each scenario
//   grid = 0                  ; 0: scenario default
//   t_nodes = 32
//   tol = 1e-4                ; empty: scenario default
//   seed = 1
//   points = 100
//   h = 0                     ; 0: 1e-4 * chart diameter
//   format = json             ; or csv
//   out = report.json         ; empty: stdout
//
//   [scenario.any_label]
//   type = sphere_annulus
//   n = 4
//   rho0 = 0.5
//
// Scenario sections run in file order.

#include "totcurv/scenarios.hpp"
#include "totcurv/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace totcurv {

enum class Command { verify, pointwise };
enum class Format { csv, json };

struct RunConfig {
    Command command = Command::verify;
    std::vector<ScenarioSpec> scenarios;
    std::vector<int> rs;  // empty: all r
    int grid = 0;
    int t_nodes = 32;
    std::optional<double> tol;
    double abs_tol = 1e-9;
    std::uint64_t seed = 1;
    int points = 100;
    double h = 0.0;
    Format format = Format::csv;
    std::string out;
};

RunConfig load_config(const std::string& path);
// Overlays the [run] keys and scenario sections of an INI file.
void apply_config_file(RunConfig& config, const std::string& path);

std::string to_string(Command c);
std::string to_string(Format f);
Command parse_command(const std::string& s);
Format parse_format(const std::string& s);
// "0,1,2" or "0-3" or a mix.
std::vector<int> parse_r_list(const std::string& s);

struct VerificationReport {
    RunConfig config;
    std::vector<VerificationRow> rows;
    std::vector<PointwiseRow> pointwise;

    bool all_pass() const;
};

// Runs every configured scenario; rows are ordered by scenario label, then r.
// Scenario construction errors propagate (UnknownScenarioError, ConfigError).
VerificationReport run_verify(const RunConfig& config, Execution exec = Execution::parallel);
VerificationReport run_pointwise(const RunConfig& config, Execution exec = Execution::parallel);
VerificationReport run(const RunConfig& config, Execution exec = Execution::parallel);

std::string to_json(const VerificationReport& report);
VerificationReport report_from_json(const std::string& text);
std::string to_csv(const VerificationReport& report);
std::string to_table(const VerificationReport& report);

} // namespace totcurv
