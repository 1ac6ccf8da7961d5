#pragma once

#include <vector>

#include "mcsim/net_model.hpp"

namespace mcsim::ref {

/// Serial Floyd-Warshall all-pairs distances (n*n row-major). Independent
/// of the Dijkstra-based table build; used as the reference in tests and in
/// the benchmark tool.
std::vector<double> floyd_warshall(const Network& net);

} // namespace mcsim::ref
