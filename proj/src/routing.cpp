#include "mcsim/routing.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

#include "mcsim/errors.hpp"

namespace mcsim {

namespace {

// Single-source Dijkstra writing one row of the table. On exact delay ties
// the smaller first hop wins; predecessors on shortest paths settle strictly
// earlier (positive weights), so first hops are final at settle time.
void dijkstra_row(const Network& net, int src, double* dist, int* hop) {
    const int n = net.n;
    const double inf = std::numeric_limits<double>::infinity();
    std::fill(dist, dist + n, inf);
    std::fill(hop, hop + n, -1);
    dist[src] = 0.0;
    hop[src] = src;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    std::vector<char> done(n, 0);
    pq.emplace(0.0, src);
    while (!pq.empty()) {
        const int v = pq.top().second;
        pq.pop();
        if (done[v]) continue;
        done[v] = 1;
        const double dv = dist[v];
        for (const auto& [w, wt] : net.adj[v]) {
            if (done[w]) continue;
            const double cand = dv + wt;
            const int first = (v == src) ? w : hop[v];
            if (cand < dist[w]) {
                dist[w] = cand;
                hop[w] = first;
                pq.emplace(cand, w);
            } else if (cand == dist[w] && first < hop[w]) {
                hop[w] = first;
            }
        }
    }
}

void fill_avg(DistanceTable& dt) {
    dt.avg_dist.resize(dt.n);
    for (int u = 0; u < dt.n; ++u) {
        double sum = 0.0;
        const double* row = &dt.dist[static_cast<std::size_t>(u) * dt.n];
        for (int v = 0; v < dt.n; ++v) sum += row[v];
        dt.avg_dist[u] = sum / dt.n;
    }
}

} // namespace

DistanceTable build_distance_table(const Network& net) {
    DistanceTable dt;
    dt.n = net.n;
    dt.dist.resize(static_cast<std::size_t>(net.n) * net.n);
    dt.next_hop.resize(static_cast<std::size_t>(net.n) * net.n);
#pragma omp parallel for schedule(dynamic)
    for (int u = 0; u < net.n; ++u)
        dijkstra_row(net, u, &dt.dist[static_cast<std::size_t>(u) * net.n],
                     &dt.next_hop[static_cast<std::size_t>(u) * net.n]);
    fill_avg(dt);
    return dt;
}

DistanceTable build_distance_table_serial(const Network& net) {
    DistanceTable dt;
    dt.n = net.n;
    dt.dist.resize(static_cast<std::size_t>(net.n) * net.n);
    dt.next_hop.resize(static_cast<std::size_t>(net.n) * net.n);
    for (int u = 0; u < net.n; ++u)
        dijkstra_row(net, u, &dt.dist[static_cast<std::size_t>(u) * net.n],
                     &dt.next_hop[static_cast<std::size_t>(u) * net.n]);
    fill_avg(dt);
    return dt;
}

std::vector<int> shortest_path(const DistanceTable& dt, int u, int v) {
    if (u < 0 || v < 0 || u >= dt.n || v >= dt.n)
        throw SimError("shortest_path: node id out of range");
    std::vector<int> path{u};
    int cur = u;
    while (cur != v) {
        cur = dt.hop(cur, v);
        path.push_back(cur);
    }
    return path;
}

double node_average_distance(const DistanceTable& dt, int a) {
    if (a < 0 || a >= dt.n)
        throw SimError("node_average_distance: node id out of range");
    return dt.avg_dist[a];
}

} // namespace mcsim
