#include "mcsim/attach_algos.hpp"

#include <algorithm>
#include <limits>

#include "mcsim/errors.hpp"

namespace mcsim {

const char* to_string(Algo a) {
    switch (a) {
        case Algo::CBT: return "CBT";
        case Algo::GRD: return "GRD";
        case Algo::WGT: return "WGT";
        case Algo::SOPT: return "SOPT";
        case Algo::TOPT: return "TOPT";
        case Algo::MDT: return "MDT";
    }
    return "?";
}

std::optional<Algo> algo_from_string(const std::string& name) {
    if (name == "CBT") return Algo::CBT;
    if (name == "GRD") return Algo::GRD;
    if (name == "WGT") return Algo::WGT;
    if (name == "SOPT") return Algo::SOPT;
    if (name == "TOPT") return Algo::TOPT;
    if (name == "MDT") return Algo::MDT;
    return std::nullopt;
}

void validate(const AlgorithmConfig& cfg) {
    switch (cfg.kind) {
        case Algo::CBT:
        case Algo::GRD:
            return; // omega ignored
        case Algo::WGT:
            if (cfg.omega < 0.0 || cfg.omega > 0.5)
                throw SimError("WGT requires omega in [0, 0.5]");
            return;
        case Algo::SOPT:
        case Algo::TOPT:
        case Algo::MDT:
            if (cfg.omega < 0.0)
                throw SimError(std::string(to_string(cfg.kind)) +
                               " requires omega >= 0");
            return;
    }
}

double grd_weight(const DistanceTable& dt, int a, int v) { return dt.d(v, a); }

double wgt_weight(const DistanceTable& dt, const MulticastTree& tree, int a,
                  int v, double omega) {
    const int core = tree.core();
    if (core < 0) throw CoreMissing("WGT weight needs a tree core");
    return (1.0 - omega) * dt.d(v, a) + omega * dt.d(a, core);
}

double sopt_weight(const DistanceTable& dt, const MulticastTree& tree, int a,
                   int v, double omega, std::span<const int> sources) {
    if (sources.empty()) throw NoSources("SOPT weight needs sources");
    double worst = 0.0;
    std::vector<double> td;
    for (int s : sources) {
        tree.distances_from(s, td);
        worst = std::max(worst, td[a]);
    }
    return dt.d(v, a) + omega * worst;
}

double topt_weight(const DistanceTable& dt, int a, int v, double omega) {
    return dt.d(v, a) + 2.0 * omega * dt.avg_dist[a];
}

double mdt_weight(const DistanceTable& dt, const MulticastTree& tree, int a,
                  int v, double omega) {
    if (tree.empty()) throw SimError("MDT weight needs a nonempty tree");
    const auto dia = tree.tree_diameter();
    std::vector<double> dp, dq;
    tree.distances_from(dia.a, dp);
    tree.distances_from(dia.b, dq);
    return dt.d(v, a) + omega * std::max(dp[a], dq[a]);
}

int select_attachment(const AlgorithmConfig& cfg, const DistanceTable& dt,
                      const MulticastTree& tree, int v) {
    if (tree.empty()) throw SimError("select_attachment: empty tree");
    if (cfg.kind == Algo::CBT) {
        const int core = tree.core();
        if (core < 0) throw CoreMissing("CBT join needs a core");
        return core;
    }

    // Per-join precomputation shared by all candidates.
    std::vector<int> sources;
    std::vector<std::vector<double>> source_dist;
    std::vector<double> dp, dq;
    if (cfg.kind == Algo::SOPT) {
        sources = tree.sources();
        source_dist.resize(sources.size());
        for (std::size_t i = 0; i < sources.size(); ++i)
            tree.distances_from(sources[i], source_dist[i]);
    } else if (cfg.kind == Algo::MDT) {
        const auto dia = tree.tree_diameter();
        tree.distances_from(dia.a, dp);
        tree.distances_from(dia.b, dq);
    }

    const int n = tree.network().n;
    int best = -1;
    double best_w = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
        if (!tree.in_tree(a)) continue;
        double w;
        switch (cfg.kind) {
            case Algo::GRD:
                w = dt.d(v, a);
                break;
            case Algo::WGT: {
                const int core = tree.core();
                if (core < 0) throw CoreMissing("WGT join needs a core");
                w = (1.0 - cfg.omega) * dt.d(v, a) + cfg.omega * dt.d(a, core);
                break;
            }
            case Algo::SOPT: {
                double worst = 0.0;
                for (const auto& td : source_dist)
                    worst = std::max(worst, td[a]);
                w = dt.d(v, a) + cfg.omega * worst;
                break;
            }
            case Algo::TOPT:
                w = dt.d(v, a) + 2.0 * cfg.omega * dt.avg_dist[a];
                break;
            case Algo::MDT:
                w = dt.d(v, a) + cfg.omega * std::max(dp[a], dq[a]);
                break;
            default:
                throw SimError("select_attachment: unexpected kind");
        }
        if (w < best_w - kWeightSlack) {
            best_w = w;
            best = a;
        }
    }
    return best;
}

void join(const AlgorithmConfig& cfg, const DistanceTable& dt,
          MulticastTree& tree, int v, bool as_member, bool as_source) {
    const int a = select_attachment(cfg, dt, tree, v);
    const std::vector<int> path = shortest_path(dt, v, a);
    tree.graft(path);
    if (as_member) tree.mark_member(v);
    if (as_source) tree.mark_source(v);
}

MulticastTree init_tree(const AlgorithmConfig& cfg, const DistanceTable& dt,
                        const Network& net, std::span<const int> sources,
                        int core) {
    if (!sources.empty() &&
        std::find(sources.begin(), sources.end(), core) == sources.end())
        throw SimError("init_tree: core must be one of the sources");
    MulticastTree tree(net);
    tree.seed_node(core);
    if (cfg.kind == Algo::CBT || cfg.kind == Algo::WGT) tree.set_core(core);
    std::vector<int> rest(sources.begin(), sources.end());
    std::sort(rest.begin(), rest.end());
    if (!sources.empty()) tree.mark_source(core);
    for (int s : rest) {
        if (s == core) continue;
        join(cfg, dt, tree, s, /*as_member=*/false, /*as_source=*/true);
    }
    return tree;
}

} // namespace mcsim
