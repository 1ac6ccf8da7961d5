#include "mcsim/exp_runner.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <string>

#include "mcsim/errors.hpp"
#include "mcsim/rng.hpp"

namespace mcsim {

namespace {

// Run fn(r) for every repeat on the worker pool; results land in repeat
// order and the first failure (by repeat index) is rethrown after the pool
// drains, so output never depends on scheduling.
template <typename T, typename Fn>
std::vector<T> parallel_repeats(int repeats, Fn&& fn) {
    std::vector<T> out(repeats);
    std::vector<std::exception_ptr> errors(repeats);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < repeats; ++r) {
        try {
            out[r] = fn(r);
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

Network repeat_network(const ExperimentSpec& spec, double beta,
                       std::uint64_t net_seed) {
    WaxmanParams p;
    p.alpha = spec.alpha;
    p.beta = beta;
    p.n = spec.nodes;
    p.grid_w = spec.grid_w;
    p.grid_h = spec.grid_h;
    p.seed = net_seed;
    return generate_waxman(p);
}

struct AggKey {
    int algo;
    double omega;
    double degree;
    int n_sources;
    double source_fraction;
    int group_size;
    auto operator<=>(const AggKey&) const = default;
};

struct AggAcc {
    long count = 0;
    double avg_delay = 0.0, max_delay = 0.0, link_count = 0.0;
    double bandwidth = 0.0, diameter = 0.0;
};

// Mean rows over warmup-filtered records; record order is repeat-major and
// therefore deterministic.
std::vector<MeasurementRecord> aggregate_rows(
    const std::vector<std::vector<MeasurementRecord>>& per_repeat,
    const ExperimentSpec& spec, const std::string& family) {
    std::map<AggKey, AggAcc> acc;
    for (const auto& batch : per_repeat) {
        for (const auto& rec : batch) {
            if (rec.event_index <= spec.warmup) continue;
            AggKey key{static_cast<int>(rec.algo), rec.omega,    rec.degree,
                       rec.n_sources,              rec.source_fraction,
                       rec.group_size};
            AggAcc& a = acc[key];
            ++a.count;
            a.avg_delay += rec.avg_delay;
            a.max_delay += rec.max_delay;
            a.link_count += rec.link_count;
            a.bandwidth += rec.bandwidth;
            a.diameter += rec.diameter;
        }
    }
    std::vector<MeasurementRecord> rows;
    rows.reserve(acc.size());
    for (const auto& [key, a] : acc) {
        MeasurementRecord rec;
        rec.family = family;
        rec.algo = static_cast<Algo>(key.algo);
        rec.omega = key.omega;
        rec.degree = key.degree;
        rec.n_sources = key.n_sources;
        rec.source_fraction = key.source_fraction;
        rec.group_size = key.group_size;
        rec.repeat = spec.repeats;
        rec.seed = spec.base_seed;
        rec.event_index = a.count;
        rec.avg_delay = a.avg_delay / a.count;
        rec.max_delay = a.max_delay / a.count;
        rec.link_count = a.link_count / a.count;
        rec.bandwidth = a.bandwidth / a.count;
        rec.diameter = a.diameter / a.count;
        rows.push_back(std::move(rec));
    }
    return rows;
}

double calibrated_beta(const ExperimentSpec& spec, double degree,
                       std::uint64_t index) {
    return calibrate_beta(spec.nodes, spec.grid_w, spec.grid_h, spec.alpha,
                          degree,
                          sub_seed(spec.base_seed, kLaneCalibration, index));
}

SessionContext make_ctx(const ExperimentSpec& spec, const std::string& family,
                        double degree, int repeat, std::uint64_t net_seed) {
    SessionContext ctx;
    ctx.family = family;
    ctx.degree = degree;
    ctx.repeat = repeat;
    ctx.seed = net_seed;
    ctx.source_rate = spec.source_rate;
    ctx.bandwidth_per_source = spec.bandwidth_per_source;
    return ctx;
}

} // namespace

SweepOmegaResult sweep_omega(const ExperimentSpec& spec) {
    for (Algo a : spec.algorithms)
        if (a != Algo::WGT && a != Algo::SOPT && a != Algo::TOPT &&
            a != Algo::MDT)
            throw SimError("sweep_omega: algorithms must be omega-weighted "
                           "(WGT, SOPT, TOPT, MDT)");
    if (spec.algorithms.empty() || spec.omega_grid.empty())
        throw SimError("sweep_omega: empty algorithm or omega grid");
    for (Algo a : spec.algorithms)
        for (double w : spec.omega_grid) validate({a, w});

    const double beta = calibrated_beta(spec, spec.degree, 0);
    auto per_repeat = parallel_repeats<std::vector<MeasurementRecord>>(
        spec.repeats, [&](int r) {
            const std::uint64_t net_seed =
                sub_seed(spec.base_seed, kLaneNetwork, r);
            const Network net = repeat_network(spec, beta, net_seed);
            const DistanceTable dt = build_distance_table(net);
            Scenario sc = spec.scenario;
            sc.seed = sub_seed(spec.base_seed, kLaneEvents, r);
            const EventStream events = gen_event_stream(sc, net.n);
            const SessionContext ctx =
                make_ctx(spec, "sweep-omega", spec.degree, r, net_seed);
            std::vector<MeasurementRecord> records;
            for (Algo a : spec.algorithms) {
                for (double w : spec.omega_grid) {
                    auto batch =
                        run_session_stream(net, dt, {a, w}, sc, events, ctx);
                    records.insert(records.end(), batch.begin(), batch.end());
                }
            }
            return records;
        });

    SweepOmegaResult result;
    result.rows = aggregate_rows(per_repeat, spec, "sweep-omega");

    // Per (algo, omega) means across every retained record.
    std::map<std::pair<int, double>, AggAcc> grid;
    for (const auto& batch : per_repeat) {
        for (const auto& rec : batch) {
            if (rec.event_index <= spec.warmup) continue;
            AggAcc& a = grid[{static_cast<int>(rec.algo), rec.omega}];
            ++a.count;
            a.avg_delay += rec.avg_delay;
            a.max_delay += rec.max_delay;
        }
    }
    for (Algo a : spec.algorithms) {
        OmegaOptimum opt;
        opt.algo = a;
        bool first = true;
        for (double w : spec.omega_grid) {
            const auto it = grid.find({static_cast<int>(a), w});
            if (it == grid.end() || it->second.count == 0) continue;
            const double mean_avg = it->second.avg_delay / it->second.count;
            const double mean_max = it->second.max_delay / it->second.count;
            if (first || mean_avg < opt.best_avg) {
                opt.best_avg = mean_avg;
                opt.omega_for_avg = w;
            }
            if (first || mean_max < opt.best_max) {
                opt.best_max = mean_max;
                opt.omega_for_max = w;
            }
            first = false;
        }
        result.optima.push_back(opt);
    }
    return result;
}

SweepDegreeResult sweep_degree(const ExperimentSpec& spec) {
    if (spec.degrees.empty() || spec.algorithms.empty())
        throw SimError("sweep_degree: empty degree or algorithm grid");
    std::vector<std::vector<MeasurementRecord>> all;
    for (std::size_t di = 0; di < spec.degrees.size(); ++di) {
        const double degree = spec.degrees[di];
        const double beta = calibrated_beta(spec, degree, di);
        auto per_repeat = parallel_repeats<std::vector<MeasurementRecord>>(
            spec.repeats, [&](int r) {
                const std::uint64_t net_seed = sub_seed(
                    spec.base_seed, kLaneNetwork, di * spec.repeats + r);
                const Network net = repeat_network(spec, beta, net_seed);
                const DistanceTable dt = build_distance_table(net);
                Scenario sc = spec.scenario;
                sc.seed = sub_seed(spec.base_seed, kLaneEvents, r);
                const EventStream events = gen_event_stream(sc, net.n);
                const SessionContext ctx =
                    make_ctx(spec, "sweep-degree", degree, r, net_seed);
                std::vector<MeasurementRecord> records;
                for (Algo a : spec.algorithms) {
                    auto batch = run_session_stream(
                        net, dt, {a, spec.omega_for(a)}, sc, events, ctx);
                    records.insert(records.end(), batch.begin(), batch.end());
                }
                return records;
            });
        all.insert(all.end(), per_repeat.begin(), per_repeat.end());
    }
    return {aggregate_rows(all, spec, "sweep-degree")};
}

GroupSizeResult sweep_group_size(const ExperimentSpec& spec) {
    if (spec.algorithms.empty())
        throw SimError("sweep_group_size: no algorithms");
    const double beta = calibrated_beta(spec, spec.degree, 0);
    auto per_repeat = parallel_repeats<std::vector<MeasurementRecord>>(
        spec.repeats, [&](int r) {
            const std::uint64_t net_seed =
                sub_seed(spec.base_seed, kLaneNetwork, r);
            const Network net = repeat_network(spec, beta, net_seed);
            const DistanceTable dt = build_distance_table(net);
            Scenario sc = spec.scenario;
            sc.seed = sub_seed(spec.base_seed, kLaneEvents, r);
            const EventStream events = gen_event_stream(sc, net.n);
            const SessionContext ctx =
                make_ctx(spec, "sweep-size", spec.degree, r, net_seed);
            std::vector<MeasurementRecord> records;
            for (Algo a : spec.algorithms) {
                auto batch = run_session_stream(
                    net, dt, {a, spec.omega_for(a)}, sc, events, ctx);
                records.insert(records.end(), batch.begin(), batch.end());
            }
            return records;
        });

    GroupSizeResult result;
    result.rows = aggregate_rows(per_repeat, spec, "sweep-size");
    for (Algo a : spec.algorithms) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& rec : result.rows)
            if (rec.algo == a)
                pts.emplace_back(rec.group_size, rec.avg_delay);
        std::sort(pts.begin(), pts.end());
        if (pts.size() >= 4)
            result.fits.emplace_back(a, fit_exponential(pts));
    }
    return result;
}

SweepSourcesResult sweep_sources(const ExperimentSpec& spec) {
    if (spec.source_counts.empty() || spec.algorithms.empty())
        throw SimError("sweep_sources: empty source or algorithm grid");
    const double beta = calibrated_beta(spec, spec.degree, 0);
    auto per_repeat = parallel_repeats<std::vector<MeasurementRecord>>(
        spec.repeats, [&](int r) {
            const std::uint64_t net_seed =
                sub_seed(spec.base_seed, kLaneNetwork, r);
            const Network net = repeat_network(spec, beta, net_seed);
            const DistanceTable dt = build_distance_table(net);
            std::vector<MeasurementRecord> records;
            for (int k : spec.source_counts) {
                Scenario sc = spec.scenario;
                sc.model = SourceModel::StaticSources;
                sc.n_sources = k;
                sc.seed = sub_seed(spec.base_seed, kLaneEvents, r);
                const EventStream events = gen_event_stream(sc, net.n);
                const SessionContext ctx =
                    make_ctx(spec, "sweep-sources", spec.degree, r, net_seed);
                for (Algo a : spec.algorithms) {
                    auto batch = run_session_stream(
                        net, dt, {a, spec.omega_for(a)}, sc, events, ctx);
                    records.insert(records.end(), batch.begin(), batch.end());
                }
            }
            return records;
        });
    return {aggregate_rows(per_repeat, spec, "sweep-sources")};
}

DynamicFractionResult run_dynamic_fraction(const ExperimentSpec& spec) {
    if (spec.fractions.empty() || spec.algorithms.empty())
        throw SimError("run_dynamic_fraction: empty fraction or algorithm grid");
    const double beta = calibrated_beta(spec, spec.degree, 0);
    auto per_repeat = parallel_repeats<std::vector<MeasurementRecord>>(
        spec.repeats, [&](int r) {
            const std::uint64_t net_seed =
                sub_seed(spec.base_seed, kLaneNetwork, r);
            const Network net = repeat_network(spec, beta, net_seed);
            const DistanceTable dt = build_distance_table(net);
            std::vector<MeasurementRecord> records;
            for (double f : spec.fractions) {
                Scenario sc = spec.scenario;
                sc.model = SourceModel::DynamicSources;
                sc.source_fraction = f;
                sc.seed = sub_seed(spec.base_seed, kLaneEvents, r);
                const EventStream events = gen_event_stream(sc, net.n);
                const SessionContext ctx =
                    make_ctx(spec, "dynamic", spec.degree, r, net_seed);
                for (Algo a : spec.algorithms) {
                    auto batch = run_session_stream(
                        net, dt, {a, spec.omega_for(a)}, sc, events, ctx);
                    records.insert(records.end(), batch.begin(), batch.end());
                }
            }
            return records;
        });
    return {aggregate_rows(per_repeat, spec, "dynamic")};
}

StabilityResult stability_run(const ExperimentSpec& spec) {
    if (spec.algorithms.empty()) throw SimError("stability_run: no algorithms");
    std::vector<Algo> algos = spec.algorithms;
    if (std::find(algos.begin(), algos.end(), Algo::CBT) == algos.end())
        algos.push_back(Algo::CBT); // reference levels always available

    const double beta = calibrated_beta(spec, spec.degree, 0);
    using Traces = std::vector<std::vector<std::pair<long, double>>>;
    struct RepeatOut {
        Traces traces;
        std::uint64_t net_seed = 0;
    };
    auto per_repeat = parallel_repeats<RepeatOut>(spec.repeats, [&](int r) {
        RepeatOut out;
        out.net_seed = sub_seed(spec.base_seed, kLaneNetwork, r);
        const Network net = repeat_network(spec, beta, out.net_seed);
        const DistanceTable dt = build_distance_table(net);
        Scenario sc = spec.scenario;
        sc.seed = sub_seed(spec.base_seed, kLaneEvents, r);
        for (Algo a : algos)
            out.traces.push_back(trace_max_delay(net, dt, {a, spec.omega_for(a)},
                                                 sc, spec.sample_every));
        return out;
    });

    auto level_of = [](const std::vector<std::pair<long, double>>& trace) {
        if (trace.empty()) return 0.0;
        double sum = 0.0;
        for (const auto& [x, y] : trace) sum += y;
        return sum / static_cast<double>(trace.size());
    };

    StabilityResult result;
    for (std::size_t ai = 0; ai < algos.size(); ++ai) {
        StabilityTraces st;
        st.algo = algos[ai];
        for (int r = 0; r < spec.repeats; ++r) {
            const double level = level_of(per_repeat[r].traces[ai]);
            if (r == 0 || level > st.worst_level) {
                st.worst_level = level;
                st.worst_repeat = r;
            }
            if (r == 0 || level < st.best_level) {
                st.best_level = level;
                st.best_repeat = r;
            }
        }
        st.worst = per_repeat[st.worst_repeat].traces[ai];
        st.best = per_repeat[st.best_repeat].traces[ai];
        if (st.algo == Algo::CBT) {
            result.cbt_avg_worst = st.worst_level;
            result.cbt_avg_best = st.best_level;
        }
        result.per_algo.push_back(std::move(st));
    }

    auto trace_rows = [&](const StabilityTraces& st, bool worst) {
        const auto& trace = worst ? st.worst : st.best;
        const int repeat = worst ? st.worst_repeat : st.best_repeat;
        for (const auto& [x, y] : trace) {
            MeasurementRecord rec;
            rec.family = worst ? "stability-worst" : "stability-best";
            rec.algo = st.algo;
            rec.omega = spec.omega_for(st.algo);
            rec.degree = spec.degree;
            if (spec.scenario.model == SourceModel::StaticSources)
                rec.n_sources = spec.scenario.n_sources;
            else
                rec.source_fraction = spec.scenario.source_fraction;
            rec.repeat = repeat;
            rec.seed = per_repeat[repeat].net_seed;
            rec.event_index = x;
            rec.max_delay = y;
            result.rows.push_back(std::move(rec));
        }
    };
    for (const auto& st : result.per_algo) {
        trace_rows(st, true);
        trace_rows(st, false);
    }
    for (bool worst : {true, false}) {
        MeasurementRecord rec;
        rec.family = worst ? "stability-cbt-avg-worst" : "stability-cbt-avg-best";
        rec.algo = Algo::CBT;
        rec.degree = spec.degree;
        if (spec.scenario.model == SourceModel::StaticSources)
            rec.n_sources = spec.scenario.n_sources;
        else
            rec.source_fraction = spec.scenario.source_fraction;
        rec.repeat = spec.repeats;
        rec.seed = spec.base_seed;
        rec.max_delay = worst ? result.cbt_avg_worst : result.cbt_avg_best;
        result.rows.push_back(std::move(rec));
    }
    return result;
}

} // namespace mcsim
