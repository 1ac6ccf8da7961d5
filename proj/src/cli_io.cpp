#include "mcsim/cli_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "mcsim/errors.hpp"
#include "mcsim/rng.hpp"

namespace mcsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_long(const std::string& s, long& out) {
    try {
        std::size_t used = 0;
        out = std::stol(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    try {
        std::size_t used = 0;
        out = std::stoull(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<std::string> issues;
    std::map<std::string, int> key_line;

    using Setter = std::function<bool(const std::string&)>;
    auto num = [&](double& field, double lo, double hi) {
        return Setter([&field, lo, hi](const std::string& v) {
            double d;
            if (!parse_double(v, d) || d < lo || d > hi) return false;
            field = d;
            return true;
        });
    };
    auto integer = [&](int& field, int lo, int hi) {
        return Setter([&field, lo, hi](const std::string& v) {
            long l;
            if (!parse_long(v, l) || l < lo || l > hi) return false;
            field = static_cast<int>(l);
            return true;
        });
    };
    auto longint = [&](long& field, long lo) {
        return Setter([&field, lo](const std::string& v) {
            long l;
            if (!parse_long(v, l) || l < lo) return false;
            field = l;
            return true;
        });
    };
    auto text_field = [&](std::string& field) {
        return Setter([&field](const std::string& v) {
            field = v;
            return true;
        });
    };
    auto double_list = [&](std::vector<double>& field, double lo) {
        return Setter([&field, lo](const std::string& v) {
            std::vector<double> vals;
            for (const auto& item : split_list(v)) {
                double d;
                if (!parse_double(item, d) || d < lo) return false;
                vals.push_back(d);
            }
            if (vals.empty()) return false;
            field = std::move(vals);
            return true;
        });
    };
    auto int_list = [&](std::vector<int>& field, int lo) {
        return Setter([&field, lo](const std::string& v) {
            std::vector<int> vals;
            for (const auto& item : split_list(v)) {
                long l;
                if (!parse_long(item, l) || l < lo) return false;
                vals.push_back(static_cast<int>(l));
            }
            if (vals.empty()) return false;
            field = std::move(vals);
            return true;
        });
    };

    std::map<std::string, Setter> setters;
    setters["algo"] = Setter([&](const std::string& v) {
        if (!algo_from_string(v)) return false;
        cfg.algo = v;
        return true;
    });
    setters["algos"] = Setter([&](const std::string& v) {
        std::vector<std::string> names = split_list(v);
        if (names.empty()) return false;
        for (const auto& n : names)
            if (!algo_from_string(n)) return false;
        cfg.algos = std::move(names);
        cfg.algos_set = true;
        return true;
    });
    setters["omega"] = Setter([&](const std::string& v) {
        double d;
        if (!parse_double(v, d) || d < 0.0) return false;
        cfg.omega = d;
        cfg.omega_set = true;
        return true;
    });
    setters["omega_wgt"] = num(cfg.omega_wgt, 0.0, 0.5);
    setters["omega_sopt"] = num(cfg.omega_sopt, 0.0, 1e9);
    setters["omega_topt"] = num(cfg.omega_topt, 0.0, 1e9);
    setters["omega_mdt"] = num(cfg.omega_mdt, 0.0, 1e9);
    setters["omegas"] = double_list(cfg.omegas, 0.0);
    setters["degree"] = num(cfg.degree, 1e-9, 1e9);
    setters["degrees"] = double_list(cfg.degrees, 1e-9);
    setters["nodes"] = integer(cfg.nodes, 1, 100000);
    setters["grid_w"] = num(cfg.grid_w, 1e-9, 1e12);
    setters["grid_h"] = num(cfg.grid_h, 1e-9, 1e12);
    setters["alpha"] = num(cfg.alpha, 1e-12, 1.0);
    setters["beta"] = Setter([&](const std::string& v) {
        double d;
        if (!parse_double(v, d) || !(d > 0.0) || d > 1.0) return false;
        cfg.beta = d;
        cfg.beta_set = true;
        return true;
    });
    setters["seed"] = Setter([&](const std::string& v) {
        return parse_u64(v, cfg.seed);
    });
    setters["repeats"] = integer(cfg.repeats, 1, 1000000);
    setters["events"] = longint(cfg.events, 0);
    setters["warmup"] = longint(cfg.warmup, 0);
    setters["size_min"] = integer(cfg.size_min, 1, 1000000);
    setters["size_max"] = integer(cfg.size_max, 1, 1000000);
    setters["targets"] = int_list(cfg.targets, 1);
    setters["model"] = Setter([&](const std::string& v) {
        if (v != "static" && v != "dynamic") return false;
        cfg.model = v;
        return true;
    });
    setters["n_sources"] = integer(cfg.n_sources, 1, 1000000);
    setters["sources_list"] = int_list(cfg.sources_list, 1);
    setters["fraction"] = num(cfg.fraction, 0.0, 1.0);
    setters["fractions"] = double_list(cfg.fractions, 0.0);
    setters["sample_every"] = longint(cfg.sample_every, 1);
    setters["source_rate"] = num(cfg.source_rate, 0.0, 1e12);
    setters["bandwidth_per_source"] = Setter([&](const std::string& v) {
        if (v != "0" && v != "1") return false;
        cfg.bandwidth_per_source = v == "1";
        return true;
    });
    setters["measure_down"] = Setter([&](const std::string& v) {
        if (v != "0" && v != "1") return false;
        cfg.measure_down = v == "1";
        return true;
    });
    setters["measure_first"] = Setter([&](const std::string& v) {
        if (v != "0" && v != "1") return false;
        cfg.measure_first = v == "1";
        return true;
    });
    setters["precision"] = integer(cfg.precision, 0, 17);
    setters["out"] = text_field(cfg.out);
    setters["network"] = text_field(cfg.network);
    setters["in"] = text_field(cfg.in);
    setters["fit_x"] = text_field(cfg.fit_x);
    setters["fit_y"] = text_field(cfg.fit_y);
    setters["fit_algo"] = text_field(cfg.fit_algo);

    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(line_no) +
                             ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            issues.push_back("line " + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
            continue;
        }
        key_line[key] = line_no;
        if (!it->second(value))
            issues.push_back("line " + std::to_string(line_no) + ": invalid " +
                             key + " value '" + value + "'");
    }

    auto cross = [&](const std::string& key, const std::string& msg) {
        const auto it = key_line.find(key);
        const std::string prefix =
            it != key_line.end() ? "line " + std::to_string(it->second) + ": "
                                 : "";
        issues.push_back(prefix + msg);
    };
    if (cfg.size_max < cfg.size_min)
        cross("size_max", "size_max must be >= size_min");
    for (int t : cfg.targets)
        if (t < cfg.size_min || t > cfg.size_max) {
            cross("targets", "targets must lie within [size_min, size_max]");
            break;
        }
    if (cfg.omega_set) {
        const auto kind = algo_from_string(cfg.algo);
        if (kind) {
            try {
                validate({*kind, cfg.omega});
            } catch (const SimError& e) {
                cross("omega", e.what());
            }
        }
    }
    if (!issues.empty()) throw ParseError(issues);
    return cfg;
}

Scenario scenario_from(const RunConfig& cfg) {
    Scenario sc;
    sc.model = cfg.model == "dynamic" ? SourceModel::DynamicSources
                                      : SourceModel::StaticSources;
    sc.n_sources = cfg.n_sources;
    sc.source_fraction = cfg.model == "dynamic" ? cfg.fraction : 0.0;
    sc.size_min = cfg.size_min;
    sc.size_max = cfg.size_max;
    sc.target_sizes = cfg.targets;
    sc.event_count = cfg.events;
    sc.measure_down = cfg.measure_down;
    sc.measure_first_only = cfg.measure_first;
    sc.seed = 0; // filled per repeat / per run
    return sc;
}

ExperimentSpec spec_from(const RunConfig& cfg, Family family) {
    ExperimentSpec spec;
    spec.family = family;
    if (cfg.algos_set) {
        for (const auto& name : cfg.algos)
            spec.algorithms.push_back(*algo_from_string(name));
    } else if (family == Family::OmegaSweep) {
        spec.algorithms = {Algo::SOPT, Algo::TOPT, Algo::MDT};
    } else {
        for (const auto& name : cfg.algos)
            spec.algorithms.push_back(*algo_from_string(name));
    }
    spec.omega_grid = cfg.omegas;
    spec.degrees = cfg.degrees;
    spec.source_counts = cfg.sources_list;
    spec.fractions = cfg.fractions;
    spec.repeats = cfg.repeats;
    spec.base_seed = cfg.seed;
    spec.scenario = scenario_from(cfg);
    spec.nodes = cfg.nodes;
    spec.grid_w = cfg.grid_w;
    spec.grid_h = cfg.grid_h;
    spec.alpha = cfg.alpha;
    spec.degree = cfg.degree;
    spec.omega_wgt = cfg.omega_wgt;
    spec.omega_sopt = cfg.omega_sopt;
    spec.omega_topt = cfg.omega_topt;
    spec.omega_mdt = cfg.omega_mdt;
    spec.sample_every = cfg.sample_every;
    spec.warmup = cfg.warmup;
    spec.source_rate = cfg.source_rate;
    spec.bandwidth_per_source = cfg.bandwidth_per_source;
    return spec;
}

namespace {

std::string fmt_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

struct RowKey {
    std::string algo;
    double omega, degree;
    int group_size, repeat, n_sources;
    double source_fraction;
    std::string family;
    long event_index;
    auto operator<=>(const RowKey&) const = default;
};

RowKey key_of(const MeasurementRecord& r) {
    return {to_string(r.algo), r.omega,     r.degree,          r.group_size,
            r.repeat,          r.n_sources, r.source_fraction, r.family,
            r.event_index};
}

} // namespace

std::string render_csv(const std::vector<MeasurementRecord>& records,
                       int precision) {
    std::vector<const MeasurementRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const MeasurementRecord* a, const MeasurementRecord* b) {
                         return key_of(*a) < key_of(*b);
                     });
    std::string out =
        "family,algo,omega,degree,n_sources,source_fraction,group_size,"
        "repeat,seed,event_index,avg_delay,max_delay,link_count,bandwidth,"
        "diameter\n";
    for (const auto* r : sorted) {
        out += r->family;
        out += ',';
        out += to_string(r->algo);
        out += ',';
        out += fmt_double(r->omega, precision);
        out += ',';
        out += fmt_double(r->degree, precision);
        out += ',';
        out += std::to_string(r->n_sources);
        out += ',';
        out += fmt_double(r->source_fraction, precision);
        out += ',';
        out += std::to_string(r->group_size);
        out += ',';
        out += std::to_string(r->repeat);
        out += ',';
        out += std::to_string(r->seed);
        out += ',';
        out += std::to_string(r->event_index);
        out += ',';
        out += fmt_double(r->avg_delay, precision);
        out += ',';
        out += fmt_double(r->max_delay, precision);
        out += ',';
        out += fmt_double(r->link_count, precision);
        out += ',';
        out += fmt_double(r->bandwidth, precision);
        out += ',';
        out += fmt_double(r->diameter, precision);
        out += '\n';
    }
    return out;
}

std::size_t emit_csv(const std::vector<MeasurementRecord>& records,
                     const std::string& path, int precision) {
    const std::string body = render_csv(records, precision);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open output file: " + path);
    os << body;
    os.flush();
    if (!os) throw IoError("write failed: " + path);
    return body.size();
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) return parse_config("");
    return parse_config(read_file(path));
}

Network make_network(const RunConfig& cfg) {
    if (!cfg.network.empty()) {
        std::ifstream is(cfg.network);
        if (!is) throw IoError("cannot open network file: " + cfg.network);
        return load_network(is);
    }
    const double beta =
        cfg.beta_set ? cfg.beta
                     : calibrate_beta(cfg.nodes, cfg.grid_w, cfg.grid_h,
                                      cfg.alpha, cfg.degree,
                                      sub_seed(cfg.seed, kLaneCalibration, 0));
    WaxmanParams p;
    p.alpha = cfg.alpha;
    p.beta = beta;
    p.n = cfg.nodes;
    p.grid_w = cfg.grid_w;
    p.grid_h = cfg.grid_h;
    p.seed = sub_seed(cfg.seed, kLaneNetwork, 0);
    return generate_waxman(p);
}

AlgorithmConfig algo_config(const RunConfig& cfg) {
    const Algo kind = *algo_from_string(cfg.algo);
    double omega = cfg.omega;
    if (!cfg.omega_set) {
        switch (kind) {
            case Algo::WGT: omega = cfg.omega_wgt; break;
            case Algo::SOPT: omega = cfg.omega_sopt; break;
            case Algo::TOPT: omega = cfg.omega_topt; break;
            case Algo::MDT: omega = cfg.omega_mdt; break;
            default: omega = 0.0; break;
        }
    }
    AlgorithmConfig ac{kind, omega};
    validate(ac);
    return ac;
}

std::string default_out(const std::string& name) { return name; }

int run_gen(const RunConfig& cfg) {
    const Network net = make_network(cfg);
    const std::string path = cfg.out.empty() ? "network.txt" : cfg.out;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open output file: " + path);
    save_network(net, os);
    os.flush();
    if (!os) throw IoError("write failed: " + path);
    std::cout << "wrote " << path << " (n=" << net.n
              << ", edges=" << net.edges.size()
              << ", avg degree=" << average_degree(net) << ")\n";
    return 0;
}

int run_single(const RunConfig& cfg) {
    const Network net = make_network(cfg);
    const DistanceTable dt = build_distance_table(net);
    Scenario sc = scenario_from(cfg);
    sc.seed = sub_seed(cfg.seed, kLaneEvents, 0);
    SessionContext ctx;
    ctx.family = "run";
    ctx.degree = cfg.network.empty() ? cfg.degree : average_degree(net);
    ctx.repeat = 0;
    ctx.seed = net.seed;
    ctx.source_rate = cfg.source_rate;
    ctx.bandwidth_per_source = cfg.bandwidth_per_source;
    const auto records = run_session(net, dt, algo_config(cfg), sc, ctx);
    const std::string path = cfg.out.empty() ? "run.csv" : cfg.out;
    const auto bytes = emit_csv(records, path, cfg.precision);
    std::cout << "wrote " << path << " (" << records.size() << " records, "
              << bytes << " bytes)\n";
    return 0;
}

int run_family(const RunConfig& cfg, Family family, const std::string& name) {
    const ExperimentSpec spec = spec_from(cfg, family);
    std::vector<MeasurementRecord> rows;
    switch (family) {
        case Family::OmegaSweep: {
            auto res = sweep_omega(spec);
            rows = std::move(res.rows);
            for (const auto& opt : res.optima) {
                std::cout << "optimum " << to_string(opt.algo)
                          << " avg_delay omega "
                          << fmt_double(opt.omega_for_avg, cfg.precision)
                          << " (mean "
                          << fmt_double(opt.best_avg, cfg.precision)
                          << "), max_delay omega "
                          << fmt_double(opt.omega_for_max, cfg.precision)
                          << " (mean "
                          << fmt_double(opt.best_max, cfg.precision) << ")\n";
            }
            break;
        }
        case Family::DegreeSweep:
            rows = sweep_degree(spec).rows;
            break;
        case Family::GroupSizeCurve: {
            auto res = sweep_group_size(spec);
            rows = std::move(res.rows);
            for (const auto& [algo, fit] : res.fits) {
                std::cout << "fit " << to_string(algo) << " h,a,b,rms: "
                          << fmt_double(fit.h, cfg.precision) << ","
                          << fmt_double(fit.a, cfg.precision) << ","
                          << fmt_double(fit.b, cfg.precision) << ","
                          << fmt_double(fit.rms_residual, cfg.precision)
                          << "\n";
            }
            break;
        }
        case Family::SourceCountCompare:
            rows = sweep_sources(spec).rows;
            break;
        case Family::DynamicFraction:
            rows = run_dynamic_fraction(spec).rows;
            break;
        case Family::StabilityTrace: {
            auto res = stability_run(spec);
            rows = std::move(res.rows);
            std::cout << "cbt_avg_worst "
                      << fmt_double(res.cbt_avg_worst, cfg.precision)
                      << " cbt_avg_best "
                      << fmt_double(res.cbt_avg_best, cfg.precision) << "\n";
            break;
        }
    }
    const std::string path = cfg.out.empty() ? default_out(name + ".csv")
                                             : cfg.out;
    const auto bytes = emit_csv(rows, path, cfg.precision);
    std::cout << "wrote " << path << " (" << rows.size() << " rows, " << bytes
              << " bytes)\n";
    return 0;
}

int run_fit(const RunConfig& cfg) {
    if (cfg.in.empty()) throw ParseError("fit: missing 'in' (input CSV path)");
    std::istringstream is(read_file(cfg.in));
    std::string header;
    if (!std::getline(is, header)) throw ParseError("fit: empty CSV");
    const auto cols = split_list(header);
    int xi = -1, yi = -1, ai = -1;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == cfg.fit_x) xi = static_cast<int>(i);
        if (cols[i] == cfg.fit_y) yi = static_cast<int>(i);
        if (cols[i] == "algo") ai = static_cast<int>(i);
    }
    if (xi < 0 || yi < 0)
        throw ParseError("fit: columns '" + cfg.fit_x + "'/'" + cfg.fit_y +
                         "' not found in CSV header");
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_list(line);
        const std::size_t need = static_cast<std::size_t>(
            std::max({xi, yi, cfg.fit_algo.empty() ? 0 : ai}));
        if (fields.size() <= need)
            throw ParseError("fit: row with too few columns");
        if (!cfg.fit_algo.empty() && ai >= 0 &&
            fields[static_cast<std::size_t>(ai)] != cfg.fit_algo)
            continue;
        double x, y;
        if (!parse_double(fields[static_cast<std::size_t>(xi)], x) ||
            !parse_double(fields[static_cast<std::size_t>(yi)], y))
            throw ParseError("fit: non-numeric data in selected columns");
        pts.emplace_back(x, y);
    }
    FitResult fit;
    try {
        fit = fit_exponential(pts);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("fit: ") + e.what());
    }
    std::cout << "h,a,b,rms\n"
              << fmt_double(fit.h, cfg.precision) << ","
              << fmt_double(fit.a, cfg.precision) << ","
              << fmt_double(fit.b, cfg.precision) << ","
              << fmt_double(fit.rms_residual, cfg.precision) << "\n";
    return 0;
}

int run_replay(const RunConfig& cfg, const std::string& golden) {
    Scenario sc = scenario_from(cfg);
    sc.seed = sub_seed(cfg.seed, kLaneEvents, 0);
    const EventStream events = gen_event_stream(sc, cfg.nodes);
    std::ostringstream body;
    save_events(events, body);
    if (!cfg.out.empty()) {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) throw IoError("cannot open output file: " + cfg.out);
        os << body.str();
        os.flush();
        if (!os) throw IoError("write failed: " + cfg.out);
        std::cout << "wrote " << cfg.out << " (" << events.size()
                  << " events)\n";
    }
    if (!golden.empty()) {
        const std::string expected = read_file(golden);
        if (expected != body.str()) {
            std::cerr << "replay mismatch against " << golden << "\n";
            return 1;
        }
        std::cout << "replay matches " << golden << " (" << events.size()
                  << " events)\n";
    }
    if (cfg.out.empty() && golden.empty()) std::cout << body.str();
    return 0;
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"shared multicast tree routing simulator"};
    app.require_subcommand(1);

    std::string config_path, out_override, golden;
    std::string fit_in, fit_algo, fit_x, fit_y;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "key = value config file");
        sub->add_option("-o,--out", out_override, "output path override");
        return sub;
    };
    CLI::App* gen = add_common(app.add_subcommand("gen", "generate a network file"));
    CLI::App* run = add_common(app.add_subcommand("run", "single churn session -> CSV"));
    CLI::App* sw_omega = add_common(app.add_subcommand("sweep-omega", "omega grid sweep"));
    CLI::App* sw_degree = add_common(app.add_subcommand("sweep-degree", "network degree sweep"));
    CLI::App* sw_size = add_common(app.add_subcommand("sweep-size", "group size curve + fits"));
    CLI::App* sw_sources = add_common(app.add_subcommand("sweep-sources", "static source count compare"));
    CLI::App* dynamic = add_common(app.add_subcommand("dynamic", "dynamic source fraction compare"));
    CLI::App* stability = add_common(app.add_subcommand("stability", "worst/best stability traces"));
    CLI::App* fit = add_common(app.add_subcommand("fit", "fit y = h - a*exp(-x/b) to CSV columns"));
    fit->add_option("--in", fit_in, "input CSV");
    fit->add_option("--algo", fit_algo, "filter rows by algo column");
    fit->add_option("--x", fit_x, "x column (default group_size)");
    fit->add_option("--y", fit_y, "y column (default avg_delay)");
    CLI::App* replay = add_common(app.add_subcommand("replay", "emit or check an event stream"));
    replay->add_option("--golden", golden, "stream file to compare against");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out = out_override;
        if (!fit_in.empty()) cfg.in = fit_in;
        if (!fit_algo.empty()) cfg.fit_algo = fit_algo;
        if (!fit_x.empty()) cfg.fit_x = fit_x;
        if (!fit_y.empty()) cfg.fit_y = fit_y;

        if (gen->parsed()) return run_gen(cfg);
        if (run->parsed()) return run_single(cfg);
        if (sw_omega->parsed())
            return run_family(cfg, Family::OmegaSweep, "sweep-omega");
        if (sw_degree->parsed())
            return run_family(cfg, Family::DegreeSweep, "sweep-degree");
        if (sw_size->parsed())
            return run_family(cfg, Family::GroupSizeCurve, "sweep-size");
        if (sw_sources->parsed())
            return run_family(cfg, Family::SourceCountCompare, "sweep-sources");
        if (dynamic->parsed())
            return run_family(cfg, Family::DynamicFraction, "dynamic");
        if (stability->parsed())
            return run_family(cfg, Family::StabilityTrace, "stability");
        if (fit->parsed()) return run_fit(cfg);
        if (replay->parsed()) return run_replay(cfg, golden);
        return 2;
    } catch (const ParseError& e) {
        for (const auto& issue : e.issues()) std::cerr << "error: " << issue << "\n";
        return 2;
    } catch (const ConnectivityExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CalibrationFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace mcsim
