#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcsim/attach_algos.hpp"
#include "mcsim/mcast_tree.hpp"

namespace mcsim {

/// One measured tree snapshot; maps 1:1 onto a CSV row. Aggregated rows
/// reuse the same shape with repeat = repeat count and event_index = number
/// of averaged records.
struct MeasurementRecord {
    std::string family;
    Algo algo = Algo::GRD;
    double omega = 0.0;
    double degree = 0.0;
    int n_sources = 0;
    double source_fraction = 0.0;
    int group_size = 0;
    int repeat = 0;
    std::uint64_t seed = 0;
    long event_index = 0;
    double avg_delay = 0.0;
    double max_delay = 0.0;
    double link_count = 0.0;
    double bandwidth = 0.0;
    double diameter = 0.0;
};

/// Mean tree-path delay over ordered (source, receiver) pairs with
/// source != receiver; 0 when no such pair exists.
double average_delay(const MulticastTree& tree, std::span<const int> sources,
                     std::span<const int> receivers);

/// Max over the same pair set; 0 when empty.
double maximum_delay(const MulticastTree& tree, std::span<const int> sources,
                     std::span<const int> receivers);

/// Both delay statistics in one tree pass over the current source and
/// member sets.
struct DelayStats {
    double avg = 0.0;
    double max = 0.0;
};
DelayStats delay_stats(const MulticastTree& tree);

long link_usage(const MulticastTree& tree);

/// links * rate * active sources. The per-source multiplier models every
/// source stream crossing every tree link; pass 1 for the links*rate
/// reading.
double bandwidth_usage(const MulticastTree& tree, double source_rate,
                       int n_active_sources);

/// Parameters of y = h - a*exp(-x/b).
struct FitResult {
    double h = 0.0;
    double a = 0.0;
    double b = 1.0;
    double rms_residual = 0.0;
};

struct FitTrace {
    std::vector<double> rms_per_accept;
};

/// Least-squares fit of y = h - a*exp(-x/b): coarse log-spaced grid over b
/// with a closed-form (h, a) solve per grid point, then damped Gauss-Newton
/// (at most 100 accepted steps, step halving on residual increase).
/// Requires >= 4 points with strictly increasing x. A y series with
/// variance below 1e-12 returns the convention (h = mean, a = 0, b = 1).
FitResult fit_exponential(std::span<const std::pair<double, double>> points,
                          FitTrace* trace = nullptr);

} // namespace mcsim
