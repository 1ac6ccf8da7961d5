#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcsim/mcast_tree.hpp"
#include "mcsim/routing.hpp"

namespace mcsim {

enum class Algo { CBT, GRD, WGT, SOPT, TOPT, MDT };

const char* to_string(Algo a);
std::optional<Algo> algo_from_string(const std::string& name);

/// Attachment policy plus its weight constant. omega is ignored for CBT and
/// GRD, must lie in [0, 0.5] for WGT, and must be >= 0 for SOPT/TOPT/MDT.
struct AlgorithmConfig {
    Algo kind = Algo::GRD;
    double omega = 0.0;
};

/// Throws SimError when omega is outside the valid range for the kind.
void validate(const AlgorithmConfig& cfg);

/// Candidate weights. `a` is the candidate attachment point (a tree node),
/// `v` the joining node.
double grd_weight(const DistanceTable& dt, int a, int v);

/// (1-omega)*d(v,a) + omega*d(a,core). Throws CoreMissing.
double wgt_weight(const DistanceTable& dt, const MulticastTree& tree, int a,
                  int v, double omega);

/// d(v,a) + omega * max over sources of the tree-path delay from s to a
/// (source delays are observed through the shared tree, not the unicast
/// table). Throws NoSources when the source span is empty.
double sopt_weight(const DistanceTable& dt, const MulticastTree& tree, int a,
                   int v, double omega, std::span<const int> sources);

/// d(v,a) + 2*omega*avg_dist(a).
double topt_weight(const DistanceTable& dt, int a, int v, double omega);

/// d(v,a) + omega * max over tree leaves of tree-path delay to a. The leaf
/// term is evaluated through the tree, not the unicast table; by the tree
/// diameter property it equals the larger of a's distances to the two
/// diameter endpoints.
double mdt_weight(const DistanceTable& dt, const MulticastTree& tree, int a,
                  int v, double omega);

/// Weight slack under which two candidates count as tied; ties resolve to
/// the lower node id.
inline constexpr double kWeightSlack = 1e-12;

/// Argmin of the configured weight over all tree nodes (ascending id scan,
/// kWeightSlack tie rule). CBT returns the core. SOPT on a tree that
/// currently has no sources degenerates to the plain nearest-node weight.
int select_attachment(const AlgorithmConfig& cfg, const DistanceTable& dt,
                      const MulticastTree& tree, int v);

/// Select an attachment for v, graft the (truncated) shortest path toward
/// it, and mark v with the requested roles. CBT grafts toward the core.
void join(const AlgorithmConfig& cfg, const DistanceTable& dt,
          MulticastTree& tree, int v, bool as_member = true,
          bool as_source = false);

/// Tree over `core` with the remaining sources joined one at a time in
/// ascending id order via the configured algorithm. Core must be one of
/// `sources` when the set is nonempty; the core anchor is kept only for CBT
/// and WGT.
MulticastTree init_tree(const AlgorithmConfig& cfg, const DistanceTable& dt,
                        const Network& net, std::span<const int> sources,
                        int core);

} // namespace mcsim
