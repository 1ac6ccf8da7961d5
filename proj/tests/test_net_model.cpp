#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "mcsim/errors.hpp"
#include "mcsim/net_model.hpp"
#include "mcsim/rng.hpp"
#include "test_util.hpp"

using namespace mcsim;

TEST_CASE("single node network is trivially connected") {
    WaxmanParams p;
    p.n = 1;
    p.beta = 0.5;
    p.seed = 3;
    const Network net = generate_waxman(p);
    CHECK(net.n == 1);
    CHECK(net.edges.empty());
    CHECK(is_connected(net));
    CHECK(average_degree(net) == 0.0);
}

TEST_CASE("coordinates stay on the grid") {
    WaxmanParams p;
    p.n = 200;
    p.beta = 0.5;
    p.seed = 7;
    const Network net = generate_waxman(p);
    CHECK(net.n == 200);
    for (int i = 0; i < net.n; ++i) {
        CHECK(net.xs[i] >= 0.0);
        CHECK(net.xs[i] <= 1000.0);
        CHECK(net.ys[i] >= 0.0);
        CHECK(net.ys[i] <= 1000.0);
    }
}

TEST_CASE("edges carry exact Euclidean weights, no loops or duplicates") {
    const Network net = testutil::small_waxman(60, 11);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : net.edges) {
        CHECK(e.u < e.v);
        CHECK(seen.insert({e.u, e.v}).second);
        CHECK(e.w == net.coord_distance(e.u, e.v));
    }
    CHECK(is_connected(net));
}

TEST_CASE("generation is deterministic per seed") {
    WaxmanParams p;
    p.n = 80;
    p.beta = 0.3;
    p.seed = 42;
    const Network a = generate_waxman(p);
    const Network b = generate_waxman(p);
    std::ostringstream sa, sb;
    save_network(a, sa);
    save_network(b, sb);
    CHECK(sa.str() == sb.str());

    p.seed = 43;
    const Network c = generate_waxman(p);
    std::ostringstream sc;
    save_network(c, sc);
    CHECK(sa.str() != sc.str());
}

TEST_CASE("average_degree trivials") {
    const auto triangle = testutil::make_network(
        {{0, 0}, {10, 0}, {0, 10}}, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(average_degree(triangle) == 2.0);
}

TEST_CASE("impossible connectivity raises ConnectivityExhausted") {
    WaxmanParams p;
    p.n = 50;
    p.beta = 1e-6;
    p.seed = 5;
    CHECK_THROWS_AS((void)generate_waxman(p), ConnectivityExhausted);
}

TEST_CASE("parameter validation") {
    WaxmanParams p;
    p.n = 0;
    CHECK_THROWS_AS((void)generate_waxman(p), ParseError);
    p.n = 5;
    p.alpha = 0.0;
    CHECK_THROWS_AS((void)generate_waxman(p), ParseError);
    p.alpha = 0.25;
    p.beta = 1.5;
    CHECK_THROWS_AS((void)generate_waxman(p), ParseError);
}

TEST_CASE("calibration hits the target degree distribution") {
    const int n = 30;
    const double target = 3.0;
    const double beta = calibrate_beta(n, 1000, 1000, 0.25, target, 99);
    CHECK(beta > 0.0);
    CHECK(beta <= 1.0);

    // Oracle: regenerate 100 fresh graphs and average 2|E|/n.
    double sum = 0.0;
    for (int g = 0; g < 100; ++g) {
        WaxmanParams p;
        p.beta = beta;
        p.n = n;
        p.seed = sub_seed(1234, kLaneNetwork, g);
        sum += average_degree(generate_waxman(p));
    }
    const double mean = sum / 100.0;
    CHECK(mean > target - 0.3);
    CHECK(mean < target + 0.3);
}

TEST_CASE("calibration reaches a tight band at full scale") {
    const double beta = calibrate_beta(200, 1000, 1000, 0.25, 5.0, 31);
    double sum = 0.0;
    for (int g = 0; g < 100; ++g) {
        WaxmanParams p;
        p.beta = beta;
        p.n = 200;
        p.seed = sub_seed(4321, kLaneNetwork, g);
        sum += average_degree(generate_waxman(p));
    }
    const double mean = sum / 100.0;
    CHECK(mean > 4.9);
    CHECK(mean < 5.1);
}

TEST_CASE("calibrated degree-4 graphs measure close to 4 individually") {
    const double beta = calibrate_beta(200, 1000, 1000, 0.25, 4.0, 55);
    int within_half = 0;
    double sum = 0.0;
    for (int g = 0; g < 20; ++g) {
        WaxmanParams p;
        p.beta = beta;
        p.n = 200;
        p.seed = sub_seed(777, kLaneNetwork, g);
        const double deg = average_degree(generate_waxman(p));
        sum += deg;
        if (deg > 3.5 && deg < 4.5) ++within_half;
    }
    CHECK(within_half >= 18); // per-graph degree noise is ~0.2 at this size
    CHECK(std::abs(sum / 20.0 - 4.0) < 0.25);
}

TEST_CASE("calibration is monotone in the target degree") {
    const double b_low = calibrate_beta(30, 1000, 1000, 0.25, 2.5, 7);
    const double b_high = calibrate_beta(30, 1000, 1000, 0.25, 4.5, 7);
    CHECK(b_low < b_high);
}

TEST_CASE("unreachable target degree raises CalibrationFailed") {
    CHECK_THROWS_AS((void)calibrate_beta(30, 1000, 1000, 0.25, 25.0, 1),
                    CalibrationFailed);
    CHECK_THROWS_AS((void)calibrate_beta(30, 1000, 1000, 0.25, 40.0, 1),
                    CalibrationFailed);
    CHECK_THROWS_AS((void)calibrate_beta(1, 1000, 1000, 0.25, 0.5, 1),
                    CalibrationFailed);
}

TEST_CASE("edge probability decays with distance") {
    // Pool pair (distance, linked) samples across graphs, bin by distance,
    // and expect non-increasing empirical link frequency.
    const double beta = 0.6;
    constexpr int kBins = 6;
    double hit[kBins] = {};
    double total[kBins] = {};
    long samples = 0;
    for (int g = 0; samples < 10000; ++g) {
        WaxmanParams p;
        p.beta = beta;
        p.n = 40;
        p.seed = sub_seed(5, kLaneNetwork, g);
        const Network net = generate_waxman(p);
        for (int u = 0; u < net.n; ++u) {
            for (int v = u + 1; v < net.n; ++v) {
                const double d = net.coord_distance(u, v);
                const int bin = std::min(
                    kBins - 1, static_cast<int>(d / (1414.2136 / kBins)));
                total[bin] += 1.0;
                if (net.edge_weight(u, v) >= 0.0) hit[bin] += 1.0;
                ++samples;
            }
        }
    }
    double prev = 1.0;
    for (int b = 0; b < kBins; ++b) {
        if (total[b] < 50) continue;
        const double freq = hit[b] / total[b];
        CHECK(freq <= prev + 0.02);
        prev = freq;
    }
}

TEST_CASE("network file round-trips byte-identically") {
    const Network net = testutil::small_waxman(40, 21);
    std::ostringstream first;
    save_network(net, first);
    std::istringstream in(first.str());
    const Network back = load_network(in);
    std::ostringstream second;
    save_network(back, second);
    CHECK(first.str() == second.str());
    CHECK(back.n == net.n);
    CHECK(back.edges.size() == net.edges.size());
    CHECK(back.seed == net.seed);
    for (int i = 0; i < net.n; ++i) {
        // 9 printed decimals bound the reload error by 5e-10 absolute
        CHECK(std::abs(back.xs[i] - net.xs[i]) < 1e-9);
        CHECK(std::abs(back.ys[i] - net.ys[i]) < 1e-9);
    }
}

TEST_CASE("loading rejects malformed or disconnected files") {
    CHECK_THROWS_AS(
        [] {
            std::istringstream in("bogus");
            return load_network(in);
        }(),
        ParseError);
    // Two nodes, no edges: parses but is disconnected.
    CHECK_THROWS_AS(
        [] {
            std::istringstream in(
                "n 2 grid 10 10 seed 1\nnode 0 1 1\nnode 1 2 2\n");
            return load_network(in);
        }(),
        ParseError);
    // Duplicate edge.
    CHECK_THROWS_AS(
        [] {
            std::istringstream in(
                "n 2 grid 10 10 seed 1\nnode 0 1 1\nnode 1 2 2\n"
                "edge 0 1 1.414213562\nedge 1 0 1.414213562\n");
            return load_network(in);
        }(),
        ParseError);
}
