#include "mcsim/mcast_tree.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "mcsim/errors.hpp"

namespace mcsim {

MulticastTree::MulticastTree(const Network& net)
    : net_(&net),
      adj_(net.n),
      in_tree_(net.n, 0),
      member_(net.n, 0),
      source_(net.n, 0) {}

void MulticastTree::check_id(int v) const {
    if (v < 0 || v >= net_->n) throw NotInTree("node id out of range");
}

void MulticastTree::seed_node(int v) {
    check_id(v);
    if (node_count_ != 0) throw SimError("seed_node: tree not empty");
    add_node(v);
}

void MulticastTree::set_core(int v) {
    check_id(v);
    if (!in_tree_[v]) throw NotInTree("set_core: node not in tree");
    core_ = v;
}

void MulticastTree::mark_member(int v) {
    check_id(v);
    if (!in_tree_[v]) throw NotInTree("mark_member: node not in tree");
    if (!member_[v]) {
        member_[v] = 1;
        ++member_count_;
    }
}

void MulticastTree::mark_source(int v) {
    check_id(v);
    if (!in_tree_[v]) throw NotInTree("mark_source: node not in tree");
    if (!source_[v]) {
        source_[v] = 1;
        ++source_count_;
    }
}

void MulticastTree::unmark_source(int v) {
    check_id(v);
    if (source_[v]) {
        source_[v] = 0;
        --source_count_;
    }
}

void MulticastTree::add_node(int v) {
    in_tree_[v] = 1;
    ++node_count_;
}

void MulticastTree::add_edge(int u, int v) {
    const double w = net_->edge_weight(u, v);
    if (w < 0.0) throw SimError("graft: path edge missing from network");
    adj_[u].emplace_back(v, w);
    adj_[v].emplace_back(u, w);
    ++edge_count_;
}

void MulticastTree::remove_edge(int u, int v) {
    auto drop = [](std::vector<std::pair<int, double>>& list, int node) {
        for (auto it = list.begin(); it != list.end(); ++it) {
            if (it->first == node) {
                list.erase(it);
                return;
            }
        }
    };
    drop(adj_[u], v);
    drop(adj_[v], u);
    --edge_count_;
}

void MulticastTree::remove_node(int v) {
    in_tree_[v] = 0;
    --node_count_;
}

int MulticastTree::graft(std::span<const int> path) {
    if (path.empty()) throw PathDetached("graft: empty path");
    std::size_t hit = path.size();
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (in_tree_[path[i]]) {
            hit = i;
            break;
        }
    }
    if (hit == path.size())
        throw PathDetached("graft: no path node is in the tree");
    for (std::size_t i = hit; i-- > 0;) {
        add_node(path[i]);
        add_edge(path[i], path[i + 1]);
    }
    return static_cast<int>(hit);
}

void MulticastTree::prune_from(int v) {
    int cur = v;
    while (in_tree_[cur] && !member_[cur] && !source_[cur] && cur != core_ &&
           adj_[cur].size() <= 1) {
        if (adj_[cur].empty()) {
            remove_node(cur);
            break;
        }
        const int next = adj_[cur].front().first;
        remove_edge(cur, next);
        remove_node(cur);
        cur = next;
    }
}

void MulticastTree::leave(int v) {
    check_id(v);
    if (!member_[v]) throw NotAMember("leave: node is not a member");
    member_[v] = 0;
    --member_count_;
    prune_from(v);
}

void MulticastTree::distances_from(int root, std::vector<double>& out) const {
    check_id(root);
    if (!in_tree_[root]) throw NotInTree("distances_from: root not in tree");
    out.assign(net_->n, -1.0);
    out[root] = 0.0;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [w, wt] : adj_[v]) {
            if (out[w] < 0.0) {
                out[w] = out[v] + wt;
                stack.push_back(w);
            }
        }
    }
}

double MulticastTree::tree_distance(int u, int v) const {
    check_id(u);
    check_id(v);
    if (!in_tree_[u] || !in_tree_[v])
        throw NotInTree("tree_distance: endpoint not in tree");
    if (u == v) return 0.0;
    std::vector<double> d;
    distances_from(u, d);
    return d[v];
}

MulticastTree::Diameter MulticastTree::tree_diameter() const {
    if (node_count_ == 0) throw SimError("tree_diameter: empty tree");
    int start = -1;
    for (int v = 0; v < net_->n; ++v) {
        if (in_tree_[v]) {
            start = v;
            break;
        }
    }
    if (node_count_ == 1) return {0.0, start, start};

    std::vector<double> d;
    auto farthest = [&](int from) {
        distances_from(from, d);
        int best = from;
        double bd = 0.0;
        for (int v = 0; v < net_->n; ++v) {
            if (in_tree_[v] && d[v] > bd) {
                bd = d[v];
                best = v;
            }
        }
        return std::pair(best, bd);
    };
    const int p = farthest(start).first;
    const auto [q, delay] = farthest(p);
    return {delay, std::min(p, q), std::max(p, q)};
}

std::vector<int> MulticastTree::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < net_->n; ++v)
        if (in_tree_[v] && adj_[v].size() <= 1) out.push_back(v);
    return out;
}

std::vector<int> MulticastTree::tree_nodes() const {
    std::vector<int> out;
    for (int v = 0; v < net_->n; ++v)
        if (in_tree_[v]) out.push_back(v);
    return out;
}

std::vector<int> MulticastTree::sources() const {
    std::vector<int> out;
    for (int v = 0; v < net_->n; ++v)
        if (source_[v]) out.push_back(v);
    return out;
}

std::vector<int> MulticastTree::members() const {
    std::vector<int> out;
    for (int v = 0; v < net_->n; ++v)
        if (member_[v]) out.push_back(v);
    return out;
}

std::vector<Network::Edge> MulticastTree::edge_list() const {
    std::vector<Network::Edge> out;
    out.reserve(edge_count_);
    for (int u = 0; u < net_->n; ++u) {
        if (!in_tree_[u]) continue;
        for (const auto& [v, w] : adj_[u])
            if (u < v) out.push_back({u, v, w});
    }
    std::sort(out.begin(), out.end(),
              [](const Network::Edge& a, const Network::Edge& b) {
                  return std::pair(a.u, a.v) < std::pair(b.u, b.v);
              });
    return out;
}

void MulticastTree::dump(std::ostream& os) const {
    os << "tree\n";
    for (int v = 0; v < net_->n; ++v) {
        if (!in_tree_[v]) continue;
        os << "node " << v;
        if (member_[v]) os << " member";
        if (source_[v]) os << " source";
        if (v == core_) os << " core";
        os << "\n";
    }
    char buf[96];
    for (const auto& e : edge_list()) {
        std::snprintf(buf, sizeof buf, "edge %d %d %.9f\n", e.u, e.v, e.w);
        os << buf;
    }
}

} // namespace mcsim
