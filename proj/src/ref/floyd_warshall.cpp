#include "ref/floyd_warshall.hpp"

#include <limits>

namespace mcsim::ref {

std::vector<double> floyd_warshall(const Network& net) {
    const int n = net.n;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
    for (int v = 0; v < n; ++v) d[static_cast<std::size_t>(v) * n + v] = 0.0;
    for (const auto& e : net.edges) {
        d[static_cast<std::size_t>(e.u) * n + e.v] = e.w;
        d[static_cast<std::size_t>(e.v) * n + e.u] = e.w;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            const double dik = d[static_cast<std::size_t>(i) * n + k];
            if (dik == inf) continue;
            for (int j = 0; j < n; ++j) {
                const double cand = dik + d[static_cast<std::size_t>(k) * n + j];
                if (cand < d[static_cast<std::size_t>(i) * n + j])
                    d[static_cast<std::size_t>(i) * n + j] = cand;
            }
        }
    return d;
}

} // namespace mcsim::ref
