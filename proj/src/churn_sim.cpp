#include "mcsim/churn_sim.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "mcsim/errors.hpp"
#include "mcsim/rng.hpp"

namespace mcsim {

namespace {

Scenario normalized(const Scenario& sc) {
    Scenario out = sc;
    if (out.model == SourceModel::DynamicSources && out.source_fraction <= 0.0) {
        out.model = SourceModel::StaticSources;
        out.n_sources = 1;
        out.source_fraction = 0.0;
    }
    return out;
}

void validate_scenario(const Scenario& sc, int net_size) {
    std::vector<std::string> issues;
    if (sc.size_min < 1) issues.push_back("size_min must be >= 1");
    if (sc.size_max < sc.size_min) issues.push_back("size_max must be >= size_min");
    for (int t : sc.target_sizes)
        if (t < sc.size_min || t > sc.size_max)
            issues.push_back("target size " + std::to_string(t) +
                             " outside [size_min, size_max]");
    if (sc.event_count < 0) issues.push_back("event_count must be >= 0");
    // A degenerate size range only supports the initial monotone build; any
    // further event would need a fresh target different from the current
    // size, which cannot exist.
    if (sc.size_min == sc.size_max && sc.event_count > sc.size_max)
        issues.push_back(
            "size_min == size_max supports at most size_max events");
    if (sc.model == SourceModel::StaticSources) {
        if (sc.n_sources < 1) issues.push_back("n_sources must be >= 1");
        if (net_size <= sc.size_max + sc.n_sources)
            issues.push_back(
                "network too small: need n > size_max + n_sources so joins "
                "always have candidates");
    } else {
        if (sc.source_fraction < 0.0 || sc.source_fraction > 1.0)
            issues.push_back("source_fraction must be in [0, 1]");
        if (net_size <= sc.size_max)
            issues.push_back("network too small: need n > size_max");
    }
    if (!issues.empty()) throw ParseError(issues);
}

// Constant-time uniform sampling over a dynamic set.
class IndexedSet {
public:
    explicit IndexedSet(int capacity) : pos_(capacity, -1) {}

    void insert(int v) {
        pos_[v] = static_cast<int>(items_.size());
        items_.push_back(v);
    }
    void erase(int v) {
        const int p = pos_[v];
        const int last = items_.back();
        items_[p] = last;
        pos_[last] = p;
        items_.pop_back();
        pos_[v] = -1;
    }
    bool contains(int v) const { return pos_[v] >= 0; }
    int size() const { return static_cast<int>(items_.size()); }
    int at(int i) const { return items_[i]; }

private:
    std::vector<int> items_;
    std::vector<int> pos_;
};

} // namespace

EventStream gen_event_stream(const Scenario& scenario, int net_size) {
    const Scenario sc = normalized(scenario);
    validate_scenario(sc, net_size);

    Xoshiro256ss rng(sc.seed);
    EventStream out;
    long index = 0;

    IndexedSet members(net_size);
    IndexedSet joinable(net_size);
    std::vector<char> is_static_source(net_size, 0);

    if (sc.model == SourceModel::StaticSources) {
        std::vector<int> sources;
        while (static_cast<int>(sources.size()) < sc.n_sources) {
            const int v = static_cast<int>(rng.below(net_size));
            if (!is_static_source[v]) {
                is_static_source[v] = 1;
                sources.push_back(v);
            }
        }
        std::sort(sources.begin(), sources.end());
        for (int s : sources) out.push_back({Event::Op::Join, s, true, index++});
        for (int v = 0; v < net_size; ++v)
            if (!is_static_source[v]) joinable.insert(v);
    } else {
        for (int v = 0; v < net_size; ++v) joinable.insert(v);
    }

    const bool dynamic = sc.model == SourceModel::DynamicSources;
    long emitted = 0;
    int target = -1;
    while (emitted < sc.event_count) {
        if (target < 0 || members.size() == target) {
            do {
                target = sc.size_min +
                         static_cast<int>(rng.below(
                             static_cast<std::uint64_t>(sc.size_max - sc.size_min + 1)));
            } while (target == members.size());
        }
        if (members.size() < target) {
            const int v = joinable.at(static_cast<int>(rng.below(joinable.size())));
            const bool flag = dynamic && rng.uniform() < sc.source_fraction;
            out.push_back({Event::Op::Join, v, flag, index++});
            joinable.erase(v);
            members.insert(v);
        } else {
            const int v = members.at(static_cast<int>(rng.below(members.size())));
            out.push_back({Event::Op::Leave, v, false, index++});
            members.erase(v);
            joinable.insert(v);
        }
        ++emitted;
    }
    return out;
}

void save_events(const EventStream& events, std::ostream& os) {
    for (const auto& e : events) {
        if (e.op == Event::Op::Join)
            os << "J " << e.node << (e.as_source ? " S" : "") << "\n";
        else
            os << "L " << e.node << "\n";
    }
}

EventStream load_events(std::istream& is) {
    EventStream out;
    std::string line;
    long index = 0;
    long line_no = 0;
    std::vector<std::string> issues;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        Event e;
        char op = 0;
        char flag[8] = {};
        const int got = std::sscanf(line.c_str(), "%c %d %7s", &op, &e.node, flag);
        if (got < 2 || (op != 'J' && op != 'L')) {
            issues.push_back("event line " + std::to_string(line_no) +
                             ": expected 'J <node> [S]' or 'L <node>'");
            continue;
        }
        e.op = op == 'J' ? Event::Op::Join : Event::Op::Leave;
        e.as_source = got == 3 && flag[0] == 'S';
        e.index = index++;
        out.push_back(e);
    }
    if (!issues.empty()) throw ParseError(issues);
    return out;
}

namespace {

// Early-exit signal once a first-hit-only session has every record.
struct SessionDone {};

MeasurementRecord make_record(const MulticastTree& tree,
                              const AlgorithmConfig& cfg, const Scenario& sc,
                              const SessionContext& ctx, long events_applied) {
    MeasurementRecord rec;
    rec.family = ctx.family;
    rec.algo = cfg.kind;
    rec.omega = cfg.omega;
    rec.degree = ctx.degree;
    if (sc.model == SourceModel::StaticSources) {
        rec.n_sources = sc.n_sources;
        rec.source_fraction = 0.0;
    } else {
        rec.n_sources = 0;
        rec.source_fraction = sc.source_fraction;
    }
    rec.group_size = tree.member_count();
    rec.repeat = ctx.repeat;
    rec.seed = ctx.seed;
    rec.event_index = events_applied;
    const DelayStats st = delay_stats(tree);
    rec.avg_delay = st.avg;
    rec.max_delay = st.max;
    rec.link_count = static_cast<double>(link_usage(tree));
    rec.bandwidth = bandwidth_usage(
        tree, ctx.source_rate, ctx.bandwidth_per_source ? tree.source_count() : 1);
    rec.diameter = tree.empty() ? 0.0 : tree.tree_diameter().delay;
    return rec;
}

// Shared session driver; `on_churn_applied` fires after each churn event.
template <typename Callback>
void drive_session(const DistanceTable& dt, const AlgorithmConfig& cfg,
                   const Scenario& sc, const EventStream& events,
                   MulticastTree& tree, Callback&& on_churn_applied) {
    validate(cfg);
    const bool is_static = sc.model == SourceModel::StaticSources;
    const long preamble = is_static ? sc.n_sources : 0;
    const bool keeps_core = cfg.kind == Algo::CBT || cfg.kind == Algo::WGT;

    long applied = 0;
    for (const auto& e : events) {
        const bool is_preamble = e.index < preamble;
        if (e.op == Event::Op::Join) {
            const bool as_member = !is_preamble || !is_static;
            const bool as_source = e.as_source;
            if (tree.empty()) {
                tree.seed_node(e.node);
                if (keeps_core) tree.set_core(e.node);
                if (as_member) tree.mark_member(e.node);
                if (as_source) tree.mark_source(e.node);
            } else {
                join(cfg, dt, tree, e.node, as_member, as_source);
            }
        } else {
            if (!is_static && tree.is_source(e.node)) tree.unmark_source(e.node);
            tree.leave(e.node);
        }
        if (!is_preamble) {
            ++applied;
            on_churn_applied(applied, e);
        }
    }
}

} // namespace

std::vector<MeasurementRecord> run_session_stream(
    const Network& net, const DistanceTable& dt, const AlgorithmConfig& cfg,
    const Scenario& scenario, const EventStream& events,
    const SessionContext& ctx) {
    const Scenario sc = normalized(scenario);
    validate_scenario(sc, net.n);

    std::vector<char> is_target(sc.size_max + 1, 0);
    for (int t : sc.target_sizes) is_target[t] = 1;
    std::vector<char> pending = is_target;
    const std::size_t target_count = sc.target_sizes.size();

    std::vector<MeasurementRecord> records;
    MulticastTree tree(net);
    try {
        drive_session(dt, cfg, sc, events, tree,
                  [&](long applied, const Event& e) {
                      const bool upward = e.op == Event::Op::Join;
                      if (!upward && !sc.measure_down) return;
                      const int size = tree.member_count();
                      if (size > sc.size_max || !is_target[size]) return;
                      if (sc.measure_first_only) {
                          if (!pending[size]) return;
                          pending[size] = 0;
                      }
                      records.push_back(
                          make_record(tree, cfg, sc, ctx, applied));
                      if (sc.measure_first_only &&
                          records.size() == target_count)
                          throw SessionDone{};
                  });
    } catch (const SessionDone&) {
    }
    if (records.empty() && !tree.empty()) {
        const long churn =
            static_cast<long>(events.size()) -
            (sc.model == SourceModel::StaticSources ? sc.n_sources : 0);
        if (churn == 0) records.push_back(make_record(tree, cfg, sc, ctx, 0));
    }
    return records;
}

std::vector<MeasurementRecord> run_session(const Network& net,
                                           const DistanceTable& dt,
                                           const AlgorithmConfig& cfg,
                                           const Scenario& scenario,
                                           const SessionContext& ctx) {
    SessionContext c = ctx;
    if (c.seed == 0) c.seed = scenario.seed;
    if (c.degree == 0.0) c.degree = average_degree(net);
    const EventStream events = gen_event_stream(scenario, net.n);
    return run_session_stream(net, dt, cfg, scenario, events, c);
}

std::vector<std::pair<long, double>> trace_max_delay(
    const Network& net, const DistanceTable& dt, const AlgorithmConfig& cfg,
    const Scenario& scenario, long sample_every) {
    if (sample_every < 1) throw SimError("trace: sample_every must be >= 1");
    const Scenario sc = normalized(scenario);
    validate_scenario(sc, net.n);
    const EventStream events = gen_event_stream(sc, net.n);

    std::vector<std::pair<long, double>> points;
    MulticastTree tree(net);
    drive_session(dt, cfg, sc, events, tree,
                  [&](long applied, const Event&) {
                      if (applied % sample_every == 0)
                          points.emplace_back(applied, delay_stats(tree).max);
                  });
    return points;
}

} // namespace mcsim
