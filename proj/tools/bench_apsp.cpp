// Benchmark for the all-pairs shortest-path kernel: serial Floyd-Warshall
// reference vs the per-row Dijkstra build, serial and OpenMP-parallel.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mcsim/net_model.hpp"
#include "mcsim/routing.hpp"
#include "mcsim/rng.hpp"
#include "ref/floyd_warshall.hpp"

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"APSP kernel benchmark: Floyd-Warshall reference vs "
                 "serial/parallel Dijkstra rows"};
    int n = 200;
    double degree = 4.0;
    std::uint64_t seed = 1;
    int rounds = 3;
    app.add_option("--n", n, "node count");
    app.add_option("--degree", degree, "target average degree");
    app.add_option("--seed", seed, "seed");
    app.add_option("--rounds", rounds, "timing rounds");
    CLI11_PARSE(app, argc, argv);

    const double beta = mcsim::calibrate_beta(
        n, 1000.0, 1000.0, 0.25, degree,
        mcsim::sub_seed(seed, mcsim::kLaneCalibration, 0));
    mcsim::WaxmanParams p;
    p.beta = beta;
    p.n = n;
    p.seed = mcsim::sub_seed(seed, mcsim::kLaneNetwork, 0);
    const mcsim::Network net = mcsim::generate_waxman(p);
    std::printf("network: n=%d edges=%zu avg degree=%.2f (beta=%.4f)\n", n,
                net.edges.size(), mcsim::average_degree(net), beta);

    double t_fw = 0.0, t_serial = 0.0, t_omp = 0.0;
    std::vector<double> fw;
    mcsim::DistanceTable serial, parallel;
    for (int r = 0; r < rounds; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fw = mcsim::ref::floyd_warshall(net);
        t_fw += ms_since(t0);

        t0 = std::chrono::steady_clock::now();
        serial = mcsim::build_distance_table_serial(net);
        t_serial += ms_since(t0);

        t0 = std::chrono::steady_clock::now();
        parallel = mcsim::build_distance_table(net);
        t_omp += ms_since(t0);
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < fw.size(); ++i) {
        worst = std::max(worst, std::abs(fw[i] - parallel.dist[i]));
        worst = std::max(worst, std::abs(serial.dist[i] - parallel.dist[i]));
    }

    std::printf("%-28s %10.2f ms\n", "floyd-warshall (reference)", t_fw / rounds);
    std::printf("%-28s %10.2f ms\n", "dijkstra rows (serial)", t_serial / rounds);
    std::printf("%-28s %10.2f ms  (speedup vs serial %.2fx)\n",
                "dijkstra rows (openmp)", t_omp / rounds, t_serial / t_omp);
    std::printf("max |diff| across methods: %.3e\n", worst);
    return worst < 1e-9 ? 0 : 1;
}
