#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "mcsim/errors.hpp"
#include "mcsim/mcast_tree.hpp"
#include "mcsim/routing.hpp"
#include "mcsim/rng.hpp"
#include "test_util.hpp"

using namespace mcsim;

namespace {

// Structural tree check: edge count, connectivity by traversal, anchors
// spanned, every leaf anchored, weights match the network.
void check_tree_invariants(const MulticastTree& t) {
    const auto nodes = t.tree_nodes();
    REQUIRE(!nodes.empty());
    CHECK(t.edge_count() == static_cast<int>(nodes.size()) - 1);

    std::set<int> reached;
    std::vector<int> stack{nodes.front()};
    reached.insert(nodes.front());
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [w, wt] : t.neighbors(v)) {
            CHECK(wt == t.network().edge_weight(v, w));
            if (reached.insert(w).second) stack.push_back(w);
        }
    }
    CHECK(reached.size() == nodes.size());

    for (int v : t.members()) CHECK(t.in_tree(v));
    for (int v : t.sources()) CHECK(t.in_tree(v));
    for (int leaf : t.leaves()) {
        const bool anchored =
            t.is_member(leaf) || t.is_source(leaf) || leaf == t.core();
        CHECK(anchored);
    }
}

// Independent prune oracle: iteratively strip unanchored degree<=1 nodes
// from a copy of the dumped edge set.
std::vector<std::pair<int, int>> prune_oracle(const MulticastTree& t) {
    std::map<int, std::set<int>> adj;
    for (const auto& e : t.edge_list()) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    std::set<int> alive;
    for (int v : t.tree_nodes()) alive.insert(v);
    auto anchored = [&](int v) {
        return t.is_member(v) || t.is_source(v) || v == t.core();
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v : std::vector<int>(alive.begin(), alive.end())) {
            if (anchored(v) || adj[v].size() > 1) continue;
            for (int w : adj[v]) adj[w].erase(v);
            adj.erase(v);
            alive.erase(v);
            changed = true;
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, nbrs] : adj)
        for (int v : nbrs)
            if (u < v) edges.emplace_back(u, v);
    std::sort(edges.begin(), edges.end());
    return edges;
}

std::vector<std::pair<int, int>> edge_pairs(const MulticastTree& t) {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : t.edge_list()) out.emplace_back(e.u, e.v);
    return out;
}

} // namespace

TEST_CASE("graft walks from the joining node and truncates at the tree") {
    // 0 -1- 1 -1- 2 -1- 3
    const Network net = testutil::make_path({1, 1, 1});
    MulticastTree t(net);
    t.seed_node(3);

    SUBCASE("joining node already in tree is a no-op graft") {
        const std::vector<int> path{3};
        CHECK(t.graft(path) == 0);
        CHECK(t.edge_count() == 0);
    }
    SUBCASE("detached path is rejected") {
        const std::vector<int> path{0, 1};
        CHECK_THROWS_AS((void)t.graft(path), PathDetached);
    }
    SUBCASE("full path grafts every edge") {
        t.mark_member(3);
        const std::vector<int> path{0, 1, 2, 3};
        CHECK(t.graft(path) == 3);
        CHECK(t.edge_count() == 3);
        t.mark_member(0);
        check_tree_invariants(t);
    }
    SUBCASE("graft truncates at the first tree node") {
        t.mark_member(3);
        const std::vector<int> p1{1, 2, 3};
        t.graft(p1);
        t.mark_member(1);
        const int edges_before = t.edge_count();
        const std::vector<int> p2{0, 1, 2, 3};
        CHECK(t.graft(p2) == 1); // only node 0 added
        CHECK(t.edge_count() == edges_before + 1);
        t.mark_member(0);
        check_tree_invariants(t);
    }
}

TEST_CASE("leave prunes relay chains back to the nearest branch point") {
    // Star with a two-hop arm: 0 center; arms 1, 2; chain 0-3-4.
    const Network net = testutil::make_network(
        {{0, 0}, {10, 0}, {0, 10}, {-10, 0}, {-20, 0}},
        {{0, 1}, {0, 2}, {0, 3}, {3, 4}});
    MulticastTree t(net);
    t.seed_node(0);
    t.mark_source(0);
    t.graft(std::vector<int>{1, 0});
    t.mark_member(1);
    t.graft(std::vector<int>{2, 0});
    t.mark_member(2);
    t.graft(std::vector<int>{4, 3, 0});
    t.mark_member(4);
    CHECK(t.node_count() == 5);

    SUBCASE("chain member leaves, relays go with it") {
        t.leave(4);
        CHECK(!t.in_tree(4));
        CHECK(!t.in_tree(3));
        CHECK(t.node_count() == 3);
        CHECK(edge_pairs(t) == prune_oracle(t));
        check_tree_invariants(t);
    }
    SUBCASE("interior node keeps its place when still relaying") {
        t.mark_member(0);
        t.leave(0); // 0 relays 1, 2, 4: stays in tree
        CHECK(t.in_tree(0));
        CHECK(!t.is_member(0));
        CHECK(t.node_count() == 5);
        check_tree_invariants(t);
    }
    SUBCASE("last member leaving reduces to the source-spanning subtree") {
        t.leave(1);
        t.leave(2);
        t.leave(4);
        CHECK(t.node_count() == 1);
        CHECK(t.in_tree(0));
        check_tree_invariants(t);
    }
    SUBCASE("leave of a non-member is rejected") {
        CHECK_THROWS_AS(t.leave(3), NotAMember);
    }
}

TEST_CASE("core anchors the tree against pruning") {
    const Network net = testutil::make_path({1, 1});
    MulticastTree t(net);
    t.seed_node(0);
    t.set_core(0);
    t.graft(std::vector<int>{2, 1, 0});
    t.mark_member(2);
    t.leave(2);
    CHECK(t.in_tree(0));
    CHECK(t.node_count() == 1);
}

TEST_CASE("tree distances match an independent accumulation") {
    const Network net = testutil::make_path({1.5, 2.5, 3.0});
    MulticastTree t(net);
    t.seed_node(0);
    t.graft(std::vector<int>{2, 1, 0});
    CHECK(t.tree_distance(0, 0) == 0.0);
    CHECK(t.tree_distance(0, 2) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)t.tree_distance(0, 3), NotInTree); // network node, not tree node
    CHECK_THROWS_AS((void)t.tree_distance(0, 99), NotInTree); // out of range
}

TEST_CASE("diameter trivials") {
    const Network net = testutil::make_path({1, 1, 1});
    MulticastTree t(net);
    t.seed_node(1);
    const auto single = t.tree_diameter();
    CHECK(single.delay == 0.0);
    CHECK(single.a == 1);
    CHECK(single.b == 1);
    t.graft(std::vector<int>{0, 1});
    t.graft(std::vector<int>{3, 2, 1});
    const auto dia = t.tree_diameter();
    CHECK(dia.delay == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(dia.a == 0);
    CHECK(dia.b == 3);
}

namespace {

// Random tree on a Waxman graph grown by random grafts.
MulticastTree random_tree(const Network& net, const DistanceTable& dt,
                          Xoshiro256ss& rng, int target_nodes) {
    MulticastTree t(net);
    const int first = static_cast<int>(rng.below(net.n));
    t.seed_node(first);
    t.mark_member(first);
    while (t.node_count() < target_nodes) {
        const int v = static_cast<int>(rng.below(net.n));
        if (t.in_tree(v)) {
            t.mark_member(v);
            continue;
        }
        const auto nodes = t.tree_nodes();
        const int a = nodes[rng.below(nodes.size())];
        t.graft(shortest_path(dt, v, a));
        t.mark_member(v);
    }
    return t;
}

double brute_force_diameter(const MulticastTree& t) {
    const auto lv = t.leaves();
    double best = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i)
        for (std::size_t j = i; j < lv.size(); ++j)
            best = std::max(best, t.tree_distance(lv[i], lv[j]));
    return best;
}

} // namespace

TEST_CASE("double-sweep diameter equals the all-leaf-pairs brute force") {
    Xoshiro256ss rng(2024);
    for (int iter = 0; iter < 50; ++iter) {
        const Network net =
            testutil::small_waxman(30, sub_seed(60, 1, iter), 0.6);
        const DistanceTable dt = build_distance_table(net);
        const MulticastTree t =
            random_tree(net, dt, rng, 5 + static_cast<int>(rng.below(20)));
        const auto dia = t.tree_diameter();
        CHECK(std::abs(dia.delay - brute_force_diameter(t)) < 1e-9);
        CHECK(std::abs(t.tree_distance(dia.a, dia.b) - dia.delay) < 1e-9);

        // Farthest node from any start sits at one end of a diameter.
        std::vector<double> d;
        for (int probe = 0; probe < 10; ++probe) {
            const auto nodes = t.tree_nodes();
            const int start = nodes[rng.below(nodes.size())];
            t.distances_from(start, d);
            int far = start;
            for (int v : nodes)
                if (d[v] > d[far]) far = v;
            double ecc = 0.0;
            for (int leaf : t.leaves())
                ecc = std::max(ecc, t.tree_distance(far, leaf));
            CHECK(std::abs(ecc - dia.delay) < 1e-9);
        }
    }
}

TEST_CASE("randomized graft/leave session holds invariants and restores state") {
    const Network net = testutil::small_waxman(40, 515, 0.5);
    const DistanceTable dt = build_distance_table(net);
    Xoshiro256ss rng(99);
    MulticastTree t(net);
    t.seed_node(7 % net.n);
    t.mark_source(7 % net.n);

    for (int step = 0; step < 2000; ++step) {
        const int v = static_cast<int>(rng.below(net.n));
        if (!t.is_member(v) && (rng.below(2) == 0 || t.member_count() == 0)) {
            const bool was_in_tree = t.in_tree(v);
            const auto before = edge_pairs(t);
            const auto nodes = t.tree_nodes();
            const int a = nodes[rng.below(nodes.size())];
            t.graft(shortest_path(dt, v, a));
            t.mark_member(v);
            if (!was_in_tree && rng.below(4) == 0) {
                // join immediately undone restores the exact edge set
                t.leave(v);
                CHECK(edge_pairs(t) == before);
                continue;
            }
        } else if (t.is_member(v)) {
            t.leave(v);
            CHECK(edge_pairs(t) == prune_oracle(t));
        }
        check_tree_invariants(t);
    }
}

TEST_CASE("dump format lists nodes with roles and 9-decimal edges") {
    const Network net = testutil::make_path({1, 1});
    MulticastTree t(net);
    t.seed_node(0);
    t.set_core(0);
    t.graft(std::vector<int>{2, 1, 0});
    t.mark_member(2);
    t.mark_source(0);
    std::ostringstream os;
    t.dump(os);
    CHECK(os.str() ==
          "tree\n"
          "node 0 source core\n"
          "node 1\n"
          "node 2 member\n"
          "edge 0 1 1.000000000\n"
          "edge 1 2 1.000000000\n");
}
