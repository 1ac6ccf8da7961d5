#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mcsim/churn_sim.hpp"

namespace mcsim {

enum class Family {
    OmegaSweep,
    DegreeSweep,
    GroupSizeCurve,
    SourceCountCompare,
    DynamicFraction,
    StabilityTrace,
};

/// One experiment family run: which algorithms, which grids, how many
/// repeats. Within a repeat every algorithm (and omega/variant) consumes
/// the identical network and event stream; repeats fan out to an OpenMP
/// worker pool and merge in repeat order, so output is independent of
/// thread count.
struct ExperimentSpec {
    Family family = Family::OmegaSweep;
    std::vector<Algo> algorithms;
    std::vector<double> omega_grid;
    std::vector<double> degrees;
    std::vector<int> source_counts;
    std::vector<double> fractions;
    int repeats = 50;
    std::uint64_t base_seed = 1;
    Scenario scenario;
    int nodes = 200;
    double grid_w = 1000.0;
    double grid_h = 1000.0;
    double alpha = 0.25;
    double degree = 3.0;
    double omega_wgt = 0.3;
    double omega_sopt = 0.6;
    double omega_topt = 0.8;
    double omega_mdt = 0.4;
    long sample_every = 100;
    long warmup = 500;
    double source_rate = 1.0;
    bool bandwidth_per_source = false;

    double omega_for(Algo a) const {
        switch (a) {
            case Algo::WGT: return omega_wgt;
            case Algo::SOPT: return omega_sopt;
            case Algo::TOPT: return omega_topt;
            case Algo::MDT: return omega_mdt;
            default: return 0.0;
        }
    }
};

struct OmegaOptimum {
    Algo algo;
    double omega_for_avg = 0.0;
    double omega_for_max = 0.0;
    double best_avg = 0.0;
    double best_max = 0.0;
};

struct SweepOmegaResult {
    std::vector<MeasurementRecord> rows;
    std::vector<OmegaOptimum> optima;
};

struct SweepDegreeResult {
    std::vector<MeasurementRecord> rows;
};

struct GroupSizeResult {
    std::vector<MeasurementRecord> rows;
    std::vector<std::pair<Algo, FitResult>> fits;
};

struct SweepSourcesResult {
    std::vector<MeasurementRecord> rows;
};

struct DynamicFractionResult {
    std::vector<MeasurementRecord> rows;
};

struct StabilityTraces {
    Algo algo;
    int worst_repeat = 0;
    int best_repeat = 0;
    double worst_level = 0.0;
    double best_level = 0.0;
    std::vector<std::pair<long, double>> worst;
    std::vector<std::pair<long, double>> best;
};

struct StabilityResult {
    std::vector<StabilityTraces> per_algo;
    double cbt_avg_worst = 0.0;
    double cbt_avg_best = 0.0;
    std::vector<MeasurementRecord> rows;
};

/// Mean metrics per (algo, omega) at the scenario's target sizes, plus the
/// omega minimizing mean average delay and mean maximum delay per
/// algorithm. Algorithms are restricted to the omega-weighted family
/// (WGT, SOPT, TOPT, MDT).
SweepOmegaResult sweep_omega(const ExperimentSpec& spec);

/// Per-degree comparison: calibrates beta per degree, regenerates networks
/// per repeat, and runs every algorithm on identical streams.
SweepDegreeResult sweep_degree(const ExperimentSpec& spec);

/// Mean metrics per (algo, target size) plus an exponential delay-vs-size
/// fit per algorithm (when at least 4 target sizes are configured).
GroupSizeResult sweep_group_size(const ExperimentSpec& spec);

/// Static-source comparison across source counts.
SweepSourcesResult sweep_sources(const ExperimentSpec& spec);

/// Dynamic-participation comparison across source fractions.
DynamicFractionResult run_dynamic_fraction(const ExperimentSpec& spec);

/// Traced sessions per algorithm; extracts the worst and best trace by
/// time-averaged maximum delay and reports CBT's levels as references.
StabilityResult stability_run(const ExperimentSpec& spec);

} // namespace mcsim
