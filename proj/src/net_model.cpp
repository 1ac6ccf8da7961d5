#include "mcsim/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "mcsim/errors.hpp"
#include "mcsim/rng.hpp"

namespace mcsim {

double Network::coord_distance(int u, int v) const {
    const double dx = xs[u] - xs[v];
    const double dy = ys[u] - ys[v];
    return std::sqrt(dx * dx + dy * dy);
}

double Network::edge_weight(int u, int v) const {
    for (const auto& [w, wt] : adj[u])
        if (w == v) return wt;
    return -1.0;
}

namespace {

void validate_params(const WaxmanParams& p) {
    std::vector<std::string> issues;
    if (!(p.alpha > 0.0) || p.alpha > 1.0)
        issues.push_back("alpha must be in (0, 1]");
    if (!(p.beta > 0.0) || p.beta > 1.0)
        issues.push_back("beta must be in (0, 1]");
    if (p.n < 1) issues.push_back("n must be >= 1");
    if (!(p.grid_w > 0.0) || !(p.grid_h > 0.0))
        issues.push_back("grid dimensions must be positive");
    if (!issues.empty()) throw ParseError(issues);
}

Network draw_once(const WaxmanParams& p, std::uint64_t attempt_seed) {
    Network net;
    net.n = p.n;
    net.grid_w = p.grid_w;
    net.grid_h = p.grid_h;
    net.seed = p.seed;
    net.xs.resize(p.n);
    net.ys.resize(p.n);
    net.adj.assign(p.n, {});

    Xoshiro256ss rng(attempt_seed);
    for (int i = 0; i < p.n; ++i) {
        net.xs[i] = rng.uniform() * p.grid_w;
        net.ys[i] = rng.uniform() * p.grid_h;
    }

    const double diag = std::sqrt(p.grid_w * p.grid_w + p.grid_h * p.grid_h);
    const double scale = p.alpha * diag;
    for (int u = 0; u < p.n; ++u) {
        for (int v = u + 1; v < p.n; ++v) {
            const double d = net.coord_distance(u, v);
            const double prob = p.beta * std::exp(-d / scale);
            if (rng.uniform() < prob) {
                net.edges.push_back({u, v, d});
                net.adj[u].emplace_back(v, d);
                net.adj[v].emplace_back(u, d);
            }
        }
    }
    return net;
}

} // namespace

bool is_connected(const Network& net) {
    if (net.n == 0) return true;
    std::vector<char> seen(net.n, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [w, wt] : net.adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == net.n;
}

Network generate_waxman(const WaxmanParams& params) {
    validate_params(params);
    constexpr int kMaxAttempts = 1000;
    std::uint64_t chain = params.seed;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Network net = draw_once(params, splitmix64_next(chain));
        if (is_connected(net)) return net;
    }
    throw ConnectivityExhausted(
        "no connected draw in 1000 attempts (alpha/beta/n combination "
        "too sparse for connectivity by rejection)");
}

double average_degree(const Network& net) {
    if (net.n == 0) return 0.0;
    return 2.0 * static_cast<double>(net.edges.size()) / net.n;
}

double calibrate_beta(int n, double grid_w, double grid_h, double alpha,
                      double target_degree, std::uint64_t seed) {
    if (n < 2)
        throw CalibrationFailed("calibration needs n >= 2");
    if (!(target_degree > 0.0) || target_degree >= n - 1)
        throw CalibrationFailed("target degree must lie in (0, n-1)");

    constexpr int kTrials = 32;
    constexpr int kMaxIter = 40;
    constexpr double kTol = 0.1;

    // Mean average degree over the same connected-draw distribution the
    // generator produces. Returns -1 when any trial cannot connect, which
    // bisection treats as "degree below target".
    auto mean_degree = [&](double beta, int iter) -> double {
        double deg[kTrials];
        char failed[kTrials] = {};
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < kTrials; ++t) {
            WaxmanParams p{alpha, beta, n, grid_w, grid_h,
                           sub_seed(seed, kLaneCalibration,
                                    static_cast<std::uint64_t>(iter) * kTrials + t)};
            try {
                deg[t] = average_degree(generate_waxman(p));
            } catch (const ConnectivityExhausted&) {
                failed[t] = 1;
            }
        }
        double sum = 0.0;
        for (int t = 0; t < kTrials; ++t) {
            if (failed[t]) return -1.0;
            sum += deg[t];
        }
        return sum / kTrials;
    };

    const double at_one = mean_degree(1.0, 0);
    if (at_one < 0.0)
        throw CalibrationFailed("graphs do not connect even at beta = 1");
    if (std::abs(at_one - target_degree) <= kTol) return 1.0;
    if (at_one < target_degree)
        throw CalibrationFailed("target degree unreachable at beta = 1");

    double lo = 0.0, hi = 1.0;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double got = mean_degree(mid, iter);
        if (got >= 0.0 && std::abs(got - target_degree) <= kTol) return mid;
        if (got < target_degree)
            lo = mid;
        else
            hi = mid;
    }
    throw CalibrationFailed("no beta within tolerance after 40 bisection steps");
}

void save_network(const Network& net, std::ostream& os) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "n %d grid %.9f %.9f seed %llu\n", net.n,
                  net.grid_w, net.grid_h,
                  static_cast<unsigned long long>(net.seed));
    os << buf;
    for (int i = 0; i < net.n; ++i) {
        std::snprintf(buf, sizeof buf, "node %d %.9f %.9f\n", i, net.xs[i],
                      net.ys[i]);
        os << buf;
    }
    for (const auto& e : net.edges) {
        std::snprintf(buf, sizeof buf, "edge %d %d %.9f\n", e.u, e.v, e.w);
        os << buf;
    }
}

Network load_network(std::istream& is) {
    Network net;
    std::vector<std::string> issues;
    std::string tok;
    unsigned long long seed = 0;
    if (!(is >> tok) || tok != "n" || !(is >> net.n) || !(is >> tok) ||
        tok != "grid" || !(is >> net.grid_w >> net.grid_h) || !(is >> tok) ||
        tok != "seed" || !(is >> seed))
        throw ParseError("network file: malformed header");
    net.seed = seed;
    if (net.n < 1) throw ParseError("network file: n must be >= 1");

    net.xs.assign(net.n, 0.0);
    net.ys.assign(net.n, 0.0);
    net.adj.assign(net.n, {});
    std::vector<char> seen_node(net.n, 0);
    std::set<std::pair<int, int>> seen_edge;

    while (is >> tok) {
        if (tok == "node") {
            int id;
            double x, y;
            if (!(is >> id >> x >> y)) {
                issues.push_back("network file: malformed node line");
                break;
            }
            if (id < 0 || id >= net.n || seen_node[id]) {
                issues.push_back("network file: bad or duplicate node id " +
                                 std::to_string(id));
                continue;
            }
            seen_node[id] = 1;
            net.xs[id] = x;
            net.ys[id] = y;
        } else if (tok == "edge") {
            int u, v;
            double w;
            if (!(is >> u >> v >> w)) {
                issues.push_back("network file: malformed edge line");
                break;
            }
            if (u < 0 || v < 0 || u >= net.n || v >= net.n || u == v) {
                issues.push_back("network file: bad edge endpoints");
                continue;
            }
            const auto key = std::minmax(u, v);
            if (!seen_edge.insert(key).second) {
                issues.push_back("network file: duplicate edge");
                continue;
            }
            if (!(w > 0.0)) {
                issues.push_back("network file: non-positive edge weight");
                continue;
            }
            net.edges.push_back({key.first, key.second, w});
            net.adj[u].emplace_back(v, w);
            net.adj[v].emplace_back(u, w);
        } else {
            issues.push_back("network file: unknown record '" + tok + "'");
            break;
        }
    }
    for (int i = 0; i < net.n; ++i)
        if (!seen_node[i])
            issues.push_back("network file: missing node " + std::to_string(i));
    if (issues.empty() && !is_connected(net))
        issues.push_back("network file: graph is not connected");
    if (!issues.empty()) throw ParseError(issues);
    std::sort(net.edges.begin(), net.edges.end(),
              [](const Network::Edge& a, const Network::Edge& b) {
                  return std::pair(a.u, a.v) < std::pair(b.u, b.v);
              });
    return net;
}

} // namespace mcsim
