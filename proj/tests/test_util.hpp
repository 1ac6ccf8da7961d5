#pragma once

// Shared builders for tests: hand-made networks with exact coordinates and
// small calibrated Waxman instances.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "mcsim/net_model.hpp"
#include "mcsim/routing.hpp"

namespace testutil {

/// Network from explicit coordinates and edge pairs; weights are the exact
/// Euclidean coordinate distances.
inline mcsim::Network make_network(
    const std::vector<std::pair<double, double>>& coords,
    const std::vector<std::pair<int, int>>& edge_pairs, double grid_w = 1000,
    double grid_h = 1000) {
    mcsim::Network net;
    net.n = static_cast<int>(coords.size());
    net.grid_w = grid_w;
    net.grid_h = grid_h;
    net.adj.assign(net.n, {});
    for (const auto& [x, y] : coords) {
        net.xs.push_back(x);
        net.ys.push_back(y);
    }
    for (auto [u, v] : edge_pairs) {
        if (u > v) std::swap(u, v);
        const double w = net.coord_distance(u, v);
        net.edges.push_back({u, v, w});
        net.adj[u].emplace_back(v, w);
        net.adj[v].emplace_back(u, w);
    }
    std::sort(net.edges.begin(), net.edges.end(),
              [](const mcsim::Network::Edge& a, const mcsim::Network::Edge& b) {
                  return std::pair(a.u, a.v) < std::pair(b.u, b.v);
              });
    return net;
}

/// Path graph 0-1-2-... with the given consecutive gaps as x offsets.
inline mcsim::Network make_path(const std::vector<double>& gaps) {
    std::vector<std::pair<double, double>> coords{{0.0, 0.0}};
    double x = 0.0;
    for (double g : gaps) {
        x += g;
        coords.emplace_back(x, 0.0);
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < static_cast<int>(gaps.size()); ++i)
        edges.emplace_back(i, i + 1);
    return make_network(coords, edges, std::max(x, 1.0), 1.0);
}

/// Small connected Waxman instance with a beta that keeps the graph dense
/// enough to connect quickly at these sizes.
inline mcsim::Network small_waxman(int n, std::uint64_t seed,
                                   double beta = 0.5) {
    mcsim::WaxmanParams p;
    p.alpha = 0.25;
    p.beta = beta;
    p.n = n;
    p.seed = seed;
    return mcsim::generate_waxman(p);
}

} // namespace testutil
