#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mcsim/attach_algos.hpp"
#include "mcsim/errors.hpp"
#include "mcsim/rng.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace mcsim;

TEST_CASE("algo names round-trip") {
    for (Algo a : {Algo::CBT, Algo::GRD, Algo::WGT, Algo::SOPT, Algo::TOPT,
                   Algo::MDT})
        CHECK(algo_from_string(to_string(a)) == a);
    CHECK(!algo_from_string("XYZ"));
}

TEST_CASE("omega ranges are enforced per algorithm") {
    CHECK_NOTHROW(validate({Algo::WGT, 0.5}));
    CHECK_THROWS_AS(validate({Algo::WGT, 0.6}), SimError);
    CHECK_THROWS_AS(validate({Algo::SOPT, -0.1}), SimError);
    CHECK_NOTHROW(validate({Algo::CBT, 99.0})); // ignored
}

TEST_CASE("weighted greedy weight formula") {
    // o at 0, a at 10, v at 14: d(a,o) = 10, d(v,a) = 4.
    const Network net = testutil::make_path({10, 4});
    const DistanceTable dt = build_distance_table(net);
    MulticastTree t(net);
    t.seed_node(0);
    t.set_core(0);
    t.graft(std::vector<int>{1, 0});
    CHECK(wgt_weight(dt, t, 1, 2, 0.3) == doctest::Approx(5.8).epsilon(1e-12));
    CHECK(wgt_weight(dt, t, 1, 2, 0.0) == grd_weight(dt, 1, 2));

    MulticastTree coreless(net);
    coreless.seed_node(0);
    CHECK_THROWS_AS((void)wgt_weight(dt, coreless, 0, 2, 0.3), CoreMissing);
}

TEST_CASE("source optimised weight formula") {
    // Tree edge 0-1 of length 3 (source at 0); v = node2 at 4 past node1.
    const Network net = testutil::make_path({3, 4});
    const DistanceTable dt = build_distance_table(net);
    MulticastTree t(net);
    t.seed_node(0);
    t.mark_source(0);
    t.graft(std::vector<int>{1, 0});
    const std::vector<int> sources{0};
    CHECK(sopt_weight(dt, t, 1, 2, 0.6, sources) ==
          doctest::Approx(5.8).epsilon(1e-12));
    CHECK(sopt_weight(dt, t, 1, 2, 0.0, sources) == grd_weight(dt, 1, 2));
    CHECK_THROWS_AS((void)sopt_weight(dt, t, 1, 2, 0.6, {}), NoSources);
}

TEST_CASE("topology weight formula uses the node's average distance") {
    // a=node0 at 0, v=node1 at 4, filler node2 at 26: avg_dist(a) = 10.
    const Network net = testutil::make_path({4, 22});
    const DistanceTable dt = build_distance_table(net);
    CHECK(dt.avg_dist[0] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(topt_weight(dt, 0, 1, 0.8) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(topt_weight(dt, 0, 1, 0.0) == grd_weight(dt, 0, 1));
}

TEST_CASE("minimum diameter weight uses tree-path leaf distances") {
    // Tree edge 0-1 of length 7; v = node2 at distance 4 beyond node1.
    const Network net = testutil::make_path({7, 4});
    const DistanceTable dt = build_distance_table(net);
    MulticastTree t(net);
    t.seed_node(0);
    t.graft(std::vector<int>{1, 0});
    CHECK(mdt_weight(dt, t, 1, 2, 0.4) == doctest::Approx(6.8).epsilon(1e-12));

    MulticastTree single(net);
    single.seed_node(1);
    CHECK(mdt_weight(dt, single, 1, 2, 0.9) == dt.d(2, 1));
}

TEST_CASE("selection trivials") {
    const Network net = testutil::make_path({1, 1});
    const DistanceTable dt = build_distance_table(net);
    MulticastTree t(net);
    t.seed_node(0);
    for (Algo a : {Algo::GRD, Algo::SOPT, Algo::TOPT, Algo::MDT}) {
        t.mark_source(0);
        CHECK(select_attachment({a, 0.5}, dt, t, 2) == 0);
    }
    MulticastTree empty(net);
    CHECK_THROWS_AS((void)select_attachment({Algo::GRD, 0}, dt, empty, 2),
                    SimError);
    CHECK_THROWS_AS((void)select_attachment({Algo::CBT, 0}, dt, t, 2),
                    CoreMissing);
}

TEST_CASE("exact weight ties resolve to the lower node id") {
    // Tree nodes 1 and 2 exactly equidistant from v = 3.
    const Network net = testutil::make_network(
        {{5, 5}, {0, 1}, {0, -1}, {1, 0}},
        {{1, 2}, {1, 3}, {2, 3}, {0, 1}});
    const DistanceTable dt = build_distance_table(net);
    MulticastTree t(net);
    t.seed_node(1);
    t.graft(std::vector<int>{2, 1});
    CHECK(dt.d(3, 1) == dt.d(3, 2));
    CHECK(select_attachment({Algo::GRD, 0}, dt, t, 3) == 1);
}

namespace {

struct SessionState {
    Network net;
    DistanceTable dt;
};

SessionState make_state(int n, std::uint64_t seed, double beta = 0.6) {
    SessionState st{testutil::small_waxman(n, seed, beta), {}};
    st.dt = build_distance_table(st.net);
    return st;
}

} // namespace

TEST_CASE("selection equals the brute-force oracle on randomized joins") {
    Xoshiro256ss rng(515);
    const AlgorithmConfig cfgs[] = {{Algo::GRD, 0.0},  {Algo::WGT, 0.3},
                                    {Algo::SOPT, 0.2}, {Algo::SOPT, 1.0},
                                    {Algo::TOPT, 0.6}, {Algo::MDT, 0.6},
                                    {Algo::MDT, 1.0}};
    for (const auto& cfg : cfgs) {
        int joins = 0;
        for (int g = 0; joins < 200; ++g) {
            const auto st = make_state(30, sub_seed(2000, 4, g));
            MulticastTree t(st.net);
            const int seed_node = static_cast<int>(rng.below(st.net.n));
            t.seed_node(seed_node);
            t.set_core(seed_node);
            t.mark_source(seed_node);
            for (int step = 0; step < 25; ++step) {
                const int v = static_cast<int>(rng.below(st.net.n));
                if (t.is_member(v)) {
                    t.leave(v);
                    continue;
                }
                CHECK(select_attachment(cfg, st.dt, t, v) ==
                      testutil::oracle_select(cfg, st.dt, t, v));
                ++joins;
                join(cfg, st.dt, t, v);
            }
        }
    }
}

TEST_CASE("omega zero collapses every weighted variant onto GRD") {
    Xoshiro256ss rng(77);
    for (int g = 0; g < 3; ++g) {
        const auto st = make_state(30, sub_seed(3000, 4, g));
        std::vector<MulticastTree> trees;
        const AlgorithmConfig cfgs[] = {
            {Algo::GRD, 0.0}, {Algo::SOPT, 0.0}, {Algo::TOPT, 0.0},
            {Algo::MDT, 0.0}};
        for (int i = 0; i < 4; ++i) {
            trees.emplace_back(st.net);
            trees.back().seed_node(3);
            trees.back().mark_source(3);
        }
        for (int step = 0; step < 120; ++step) {
            const int v = static_cast<int>(rng.below(st.net.n));
            const bool leave_now = trees[0].is_member(v);
            for (int i = 0; i < 4; ++i) {
                if (leave_now)
                    trees[i].leave(v);
                else
                    join(cfgs[i], st.dt, trees[i], v);
            }
            const auto base = trees[0].edge_list();
            for (int i = 1; i < 4; ++i) {
                const auto other = trees[i].edge_list();
                REQUIRE(other.size() == base.size());
                for (std::size_t k = 0; k < base.size(); ++k) {
                    CHECK(other[k].u == base[k].u);
                    CHECK(other[k].v == base[k].v);
                }
            }
        }
    }
}

TEST_CASE("selection is invariant under power-of-two coordinate scaling") {
    Xoshiro256ss rng(31);
    const auto st = make_state(25, 909);
    Network scaled = st.net;
    for (int i = 0; i < scaled.n; ++i) {
        scaled.xs[i] *= 4.0;
        scaled.ys[i] *= 4.0;
    }
    scaled.grid_w *= 4.0;
    scaled.grid_h *= 4.0;
    for (auto& e : scaled.edges) e.w *= 4.0;
    for (auto& nbrs : scaled.adj)
        for (auto& [w, wt] : nbrs) wt *= 4.0;
    const DistanceTable sdt = build_distance_table(scaled);

    const AlgorithmConfig cfgs[] = {{Algo::GRD, 0.0},  {Algo::WGT, 0.3},
                                    {Algo::SOPT, 0.6}, {Algo::TOPT, 0.8},
                                    {Algo::MDT, 0.4},  {Algo::CBT, 0.0}};
    MulticastTree t(st.net), ts(scaled);
    t.seed_node(0);
    ts.seed_node(0);
    t.set_core(0);
    ts.set_core(0);
    t.mark_source(0);
    ts.mark_source(0);
    for (int step = 0; step < 60; ++step) {
        const int v = static_cast<int>(rng.below(st.net.n));
        if (t.is_member(v)) {
            t.leave(v);
            ts.leave(v);
            continue;
        }
        for (const auto& cfg : cfgs)
            CHECK(select_attachment(cfg, st.dt, t, v) ==
                  select_attachment(cfg, sdt, ts, v));
        join({Algo::GRD, 0.0}, st.dt, t, v);
        join({Algo::GRD, 0.0}, sdt, ts, v);
    }
}

TEST_CASE("CBT joins reproduce unicast shortest paths to the core") {
    const auto st = make_state(30, 1212);
    MulticastTree t(st.net);
    t.seed_node(5);
    t.set_core(5);
    t.mark_source(5);
    Xoshiro256ss rng(4);
    for (int step = 0; step < 60; ++step) {
        const int v = static_cast<int>(rng.below(st.net.n));
        if (t.is_member(v)) {
            t.leave(v);
            continue;
        }
        CHECK(select_attachment({Algo::CBT, 0}, st.dt, t, v) == 5);
        join({Algo::CBT, 0}, st.dt, t, v);
        for (int m : t.members())
            CHECK(std::abs(t.tree_distance(5, m) - st.dt.d(5, m)) < 1e-9);
    }
}

TEST_CASE("SOPT at omega one attaches on the unicast path to the source") {
    // d(v,a*) + d(a*,s) == d(v,s) for single-source trees built at omega 1.
    Xoshiro256ss rng(808);
    int joins = 0;
    for (std::uint64_t g = 0; joins < 100; ++g) {
        const auto st = make_state(30, sub_seed(4100, 4, g));
        MulticastTree t(st.net);
        const int s = static_cast<int>(rng.below(st.net.n));
        t.seed_node(s);
        t.mark_source(s);
        for (int step = 0; step < 30; ++step) {
            const int v = static_cast<int>(rng.below(st.net.n));
            if (t.is_member(v)) {
                t.leave(v);
                continue;
            }
            const int a = select_attachment({Algo::SOPT, 1.0}, st.dt, t, v);
            CHECK(std::abs(st.dt.d(v, a) + st.dt.d(a, s) - st.dt.d(v, s)) <
                  1e-9);
            join({Algo::SOPT, 1.0}, st.dt, t, v);
            ++joins;
        }
    }
}

TEST_CASE("init_tree joins the remaining sources in ascending id order") {
    const auto st = make_state(20, 77);
    const std::vector<int> sources{3, 7, 9};
    const MulticastTree t =
        init_tree({Algo::GRD, 0.0}, st.dt, st.net, sources, 3);
    CHECK(t.in_tree(3));
    CHECK(t.in_tree(7));
    CHECK(t.in_tree(9));
    CHECK(t.edge_count() == t.node_count() - 1);
    CHECK(t.sources() == sources);
    CHECK(t.core() == -1); // greedy family drops the core anchor

    const MulticastTree solo =
        init_tree({Algo::CBT, 0.0}, st.dt, st.net, {}, 4);
    CHECK(solo.node_count() == 1);
    CHECK(solo.core() == 4);

    CHECK_THROWS_AS((void)init_tree({Algo::GRD, 0.0}, st.dt, st.net,
                                    std::vector<int>{1, 2}, 5),
                    SimError);
}
