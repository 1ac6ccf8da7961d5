#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "mcsim/net_model.hpp"

namespace mcsim {

/// Shared multicast tree over a fixed Network: tree edges, the receiver
/// (member) set, the source set, and an optional core node. Grafts add the
/// prefix of a branch path up to the first node already in the tree; leaves
/// eagerly prune relay chains that no longer lead to a member, source, or
/// the core. Single-owner mutable state: one session per tree.
class MulticastTree {
public:
    explicit MulticastTree(const Network& net);

    const Network& network() const { return *net_; }

    bool empty() const { return node_count_ == 0; }
    int node_count() const { return node_count_; }
    int edge_count() const { return edge_count_; }
    int member_count() const { return member_count_; }
    int source_count() const { return source_count_; }
    int core() const { return core_; }

    bool in_tree(int v) const { return in_tree_[v] != 0; }
    bool is_member(int v) const { return member_[v] != 0; }
    bool is_source(int v) const { return source_[v] != 0; }
    int tree_degree(int v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<std::pair<int, double>>& neighbors(int v) const {
        return adj_[v];
    }

    /// First node of an empty tree.
    void seed_node(int v);
    void set_core(int v);
    void mark_member(int v);
    void mark_source(int v);
    void unmark_source(int v);

    /// Walk `path` from its first node (the joining node) and add nodes and
    /// edges until the first node already in the tree; returns the number of
    /// nodes added. Membership is not touched here. Throws PathDetached when
    /// no node of the path is in the tree.
    int graft(std::span<const int> path);

    /// Remove v from the member set, then repeatedly strip leaves that are
    /// neither member, source, nor core. Throws NotAMember.
    void leave(int v);

    /// Delay along the unique tree path. Throws NotInTree.
    double tree_distance(int u, int v) const;

    /// Tree-path delay from root to every tree node; -1 for nodes outside
    /// the tree. `out` is resized to the network size.
    void distances_from(int root, std::vector<double>& out) const;

    struct Diameter {
        double delay;
        int a, b;
    };
    /// Double sweep: farthest node from the lowest tree id, then farthest
    /// from that endpoint. Ties resolve to lower node ids; endpoints are
    /// returned in ascending order.
    Diameter tree_diameter() const;

    /// Tree nodes of degree <= 1, ascending.
    std::vector<int> leaves() const;
    /// All tree nodes, ascending.
    std::vector<int> tree_nodes() const;
    /// Current sources, ascending.
    std::vector<int> sources() const;
    /// Current members, ascending.
    std::vector<int> members() const;
    /// Tree edges as (u, v, w) with u < v, sorted.
    std::vector<Network::Edge> edge_list() const;

    /// Debug/golden dump: `tree` header, node lines with member/source/core
    /// tags, edge lines with 9-decimal weights.
    void dump(std::ostream& os) const;

private:
    void check_id(int v) const;
    void add_node(int v);
    void add_edge(int u, int v);
    void remove_edge(int u, int v);
    void remove_node(int v);
    void prune_from(int v);

    const Network* net_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<char> in_tree_, member_, source_;
    int core_ = -1;
    int node_count_ = 0;
    int edge_count_ = 0;
    int member_count_ = 0;
    int source_count_ = 0;
};

} // namespace mcsim
