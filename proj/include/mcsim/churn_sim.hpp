#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mcsim/metrics_fit.hpp"
#include "mcsim/routing.hpp"

namespace mcsim {

enum class SourceModel { StaticSources, DynamicSources };

/// Membership-churn scenario. Static model: n_sources fixed nodes join
/// first as sources and never leave; receivers churn. Dynamic model: every
/// participant is a receiver and each join is independently flagged source
/// with probability source_fraction; sources churn like anyone else. A
/// dynamic scenario with source_fraction == 0 degenerates to the static
/// single-source model.
struct Scenario {
    SourceModel model = SourceModel::StaticSources;
    int n_sources = 1;
    double source_fraction = 0.0;
    int size_min = 5;
    int size_max = 90;
    std::vector<int> target_sizes = {10, 20, 40, 80};
    long event_count = 20000;
    std::uint64_t seed = 0;
    // Measurement trigger: upward crossings by default; downward crossings
    // and first-hit-only are the alternative readings.
    bool measure_down = false;
    bool measure_first_only = false;
};

struct Event {
    enum class Op { Join, Leave };
    Op op = Op::Join;
    int node = 0;
    bool as_source = false;
    long index = 0;
};

using EventStream = std::vector<Event>;

/// Deterministic churn stream: repeatedly draw a fresh target size in
/// [size_min, size_max] and emit joins (uniform over eligible non-members)
/// or leaves (uniform over members) until the group reaches it, for
/// event_count churn events. Static-model source joins precede the churn
/// events and do not count toward event_count.
EventStream gen_event_stream(const Scenario& scenario, int net_size);

/// `J <node>` / `L <node>` lines; source-flagged joins carry a trailing S.
void save_events(const EventStream& events, std::ostream& os);
EventStream load_events(std::istream& is);

/// Fields copied into the records a session emits.
struct SessionContext {
    std::string family = "run";
    double degree = 0.0;
    int repeat = 0;
    std::uint64_t seed = 0;
    double source_rate = 1.0;
    bool bandwidth_per_source = false;
};

/// Apply a pre-generated stream. Records a MeasurementRecord at every
/// upward crossing of a target group size (record.event_index = number of
/// churn events applied). A session with no churn events emits one record
/// of the initial tree. Deterministic for fixed inputs.
std::vector<MeasurementRecord> run_session_stream(const Network& net,
                                                  const DistanceTable& dt,
                                                  const AlgorithmConfig& cfg,
                                                  const Scenario& scenario,
                                                  const EventStream& events,
                                                  const SessionContext& ctx);

/// Generate the scenario's stream and run it.
std::vector<MeasurementRecord> run_session(const Network& net,
                                           const DistanceTable& dt,
                                           const AlgorithmConfig& cfg,
                                           const Scenario& scenario,
                                           const SessionContext& ctx = {});

/// Maximum-delay trace sampled every sample_every churn events; points are
/// (events applied, max delay). Yields event_count / sample_every points.
std::vector<std::pair<long, double>> trace_max_delay(
    const Network& net, const DistanceTable& dt, const AlgorithmConfig& cfg,
    const Scenario& scenario, long sample_every);

} // namespace mcsim
