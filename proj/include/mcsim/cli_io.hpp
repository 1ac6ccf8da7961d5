#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcsim/exp_runner.hpp"

namespace mcsim {

/// Flat key = value run configuration. Unknown keys and out-of-range values
/// are rejected at parse time, before any run starts.
struct RunConfig {
    std::string algo = "GRD";
    bool algos_set = false;
    std::vector<std::string> algos = {"CBT", "GRD", "SOPT", "TOPT", "MDT"};
    bool omega_set = false;
    double omega = 0.0;
    double omega_wgt = 0.3;
    double omega_sopt = 0.6;
    double omega_topt = 0.8;
    double omega_mdt = 0.4;
    std::vector<double> omegas = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
    double degree = 3.0;
    std::vector<double> degrees = {2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    int nodes = 200;
    double grid_w = 1000.0;
    double grid_h = 1000.0;
    double alpha = 0.25;
    bool beta_set = false;
    double beta = 0.0;
    std::uint64_t seed = 1;
    int repeats = 50;
    long events = 20000;
    long warmup = 500;
    int size_min = 5;
    int size_max = 90;
    std::vector<int> targets = {10, 20, 40, 80};
    std::string model = "static";
    int n_sources = 1;
    std::vector<int> sources_list = {1, 2, 3, 5};
    double fraction = 0.1;
    std::vector<double> fractions = {0.1, 0.5, 0.9};
    long sample_every = 100;
    double source_rate = 1.0;
    bool bandwidth_per_source = false;
    bool measure_down = false;
    bool measure_first = false;
    int precision = 6;
    std::string out;
    std::string network;
    std::string in;
    std::string fit_x = "group_size";
    std::string fit_y = "avg_delay";
    std::string fit_algo;
};

/// Parse `key = value` lines ('#' comments, blank lines allowed). Throws
/// ParseError listing every invalid line.
RunConfig parse_config(const std::string& text);

/// Scenario/spec assembly from a validated config.
Scenario scenario_from(const RunConfig& cfg);
ExperimentSpec spec_from(const RunConfig& cfg, Family family);

/// CSV with the fixed column set, rows sorted by (algo, omega, degree,
/// group_size, repeat) and then by the remaining fields for a total order.
/// Floats carry `precision` decimals.
std::string render_csv(const std::vector<MeasurementRecord>& records,
                       int precision);

/// Write render_csv output to `path`; returns bytes written. Throws IoError.
std::size_t emit_csv(const std::vector<MeasurementRecord>& records,
                     const std::string& path, int precision);

/// Full command-line entry point (subcommands: gen, run, sweep-omega,
/// sweep-degree, sweep-size, sweep-sources, dynamic, stability, fit,
/// replay). Returns the process exit code: 0 ok, 2 config error,
/// 3 calibration/connectivity failure, 4 I/O error.
int cli_main(int argc, char** argv);

} // namespace mcsim
