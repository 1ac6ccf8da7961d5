#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace mcsim {

struct WaxmanParams {
    double alpha = 0.25;
    double beta = 0.1;
    int n = 0;
    double grid_w = 1000.0;
    double grid_h = 1000.0;
    std::uint64_t seed = 0;
};

/// Undirected weighted graph with planar node coordinates. Edge weight is
/// the Euclidean distance between the endpoints; distance units double as
/// delay units. Immutable after construction and safe to share across
/// threads.
struct Network {
    struct Edge {
        int u, v;
        double w;
    };

    int n = 0;
    double grid_w = 0.0;
    double grid_h = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> xs, ys;
    std::vector<Edge> edges;                                  // u < v, sorted
    std::vector<std::vector<std::pair<int, double>>> adj;     // (neighbor, weight)

    double coord_distance(int u, int v) const;
    /// Weight of edge (u,v), or -1 if the edge does not exist.
    double edge_weight(int u, int v) const;
};

/// Draw a connected Waxman graph: n nodes uniform on the grid, each pair
/// (u,v) linked with probability beta * exp(-d(u,v) / (alpha * L)) where L
/// is the grid diagonal. Disconnected draws are rejected and redrawn from
/// the next SplitMix64 sub-seed of params.seed; after 1000 consecutive
/// disconnected draws throws ConnectivityExhausted.
Network generate_waxman(const WaxmanParams& params);

/// Find beta such that the mean average degree over 32 trial draws lands
/// within +-0.1 of target_degree. Bisection on beta in (0, 1], at most 40
/// steps. Trials use the same connected-draw distribution as
/// generate_waxman. Throws CalibrationFailed when the target cannot be
/// reached (e.g. too high for beta = 1).
double calibrate_beta(int n, double grid_w, double grid_h, double alpha,
                      double target_degree, std::uint64_t seed);

double average_degree(const Network& net);

bool is_connected(const Network& net);

/// Text dump: `n <count> grid <w> <h> seed <seed>`, then node and edge
/// lines; coordinates and weights carry 9 decimal digits.
void save_network(const Network& net, std::ostream& os);
Network load_network(std::istream& is);

} // namespace mcsim
