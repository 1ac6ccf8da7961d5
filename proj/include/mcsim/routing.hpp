#pragma once

#include <vector>

#include "mcsim/net_model.hpp"

namespace mcsim {

/// Dense all-pairs shortest-path table keyed by delay, plus the per-node
/// average distance to every network node. Immutable once built; shared
/// read-only by all sessions.
struct DistanceTable {
    int n = 0;
    std::vector<double> dist;     // n*n row-major
    std::vector<int> next_hop;    // n*n; first hop from u toward v (u for u==v)
    std::vector<double> avg_dist; // row mean of dist

    double d(int u, int v) const { return dist[static_cast<std::size_t>(u) * n + v]; }
    int hop(int u, int v) const { return next_hop[static_cast<std::size_t>(u) * n + v]; }
};

/// Per-source Dijkstra over all rows, parallelized with OpenMP. Rows are
/// independent, so the result does not depend on thread count. Ties in path
/// delay resolve to the lower first-hop node id.
DistanceTable build_distance_table(const Network& net);

/// Same row kernel run serially; kept as the plain-loop reference for
/// benchmarking against the parallel build.
DistanceTable build_distance_table_serial(const Network& net);

/// Node sequence u..v following next_hop; its edge-weight sum equals
/// dist(u, v).
std::vector<int> shortest_path(const DistanceTable& dt, int u, int v);

double node_average_distance(const DistanceTable& dt, int a);

} // namespace mcsim
