#pragma once

#include "swarmplan/network.hpp"
#include "swarmplan/topology.hpp"

#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

namespace swarmplan {

/// Cost-direction convention. Default inverts the printed load ratio and
/// reliability measure so that better-resourced, more reliable nodes cost
/// less inside the argmin; StrictPaper reproduces the printed formulas
/// (G/C and R = 1 - uptime) verbatim.
enum class Mode { Default, StrictPaper };

/// R_A from uptime: identity in Default mode, 1 - uptime in StrictPaper.
double reliability(double uptime, Mode mode = Mode::Default);

/// Routing cost exponents plus the prefix window size alpha of the
/// recursive sequence rule: a candidate is charged transfer terms against
/// the last (context_alpha + 1) chosen nodes.
struct RoutingParams {
    double gamma = 1.0;
    double beta = 1.0;
    double alpha_rel = 1.0;
    std::size_t context_alpha = 0;
};

void validate_params(const RoutingParams& params);

struct MetricsOptions {
    Mode mode = Mode::Default;
    /// Uniform payload D for every ordered pair until a plan-derived
    /// boundary size is installed via set_payload.
    double default_payload = 1.0;
    /// Smoothing floor for the computational load C (keeps C positive).
    double load_floor = 1e-6;
};

/// Immutable snapshot of the per-node and pairwise routing metrics derived
/// from a NetworkState. Reliability values can be rescaled (ph adjustment)
/// and payloads overridden per ordered pair.
class NodeMetrics {
public:
    static NodeMetrics from_network(const NetworkState& network, const MetricsOptions& opts = {});

    std::size_t size() const { return ids_.size(); }
    const std::vector<NodeId>& ids() const { return ids_; }
    bool contains(NodeId id) const { return index_.count(id) != 0; }
    Mode mode() const { return mode_; }

    double gpu_free(NodeId id) const { return gpu_free_[index(id)]; }
    double load(NodeId id) const { return load_[index(id)]; }
    double uptime(NodeId id) const { return uptime_[index(id)]; }
    double rel(NodeId id) const { return rel_[index(id)]; }
    void set_reliability(NodeId id, double value) { rel_[index(id)] = value; }

    bool linked(NodeId from, NodeId to) const;
    double payload(NodeId from, NodeId to) const;
    double bandwidth(NodeId from, NodeId to) const;
    double latency(NodeId from, NodeId to) const;
    void set_payload(NodeId from, NodeId to, double bytes);

private:
    std::size_t index(NodeId id) const;

    Mode mode_ = Mode::Default;
    std::vector<NodeId> ids_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::vector<double> gpu_free_, load_, uptime_, rel_;
    std::vector<double> payload_, bandwidth_, latency_; // n*n, NaN = no link
};

/// Multi-term candidate cost: windowed transfer terms + load ratio +
/// reliability term. Returns +infinity for unusable candidates (no GPU
/// headroom in Default mode, missing link in the window).
double node_cost(const NodeMetrics& metrics, NodeId candidate, std::span<const NodeId> prefix,
                 const RoutingParams& params);

struct CostBreakdown {
    double transfer = 0.0;
    double load = 0.0;
    double reliability = 0.0;
    double total = 0.0;
};
CostBreakdown node_cost_breakdown(const NodeMetrics& metrics, NodeId candidate,
                                  std::span<const NodeId> prefix, const RoutingParams& params);

/// argmin of node_cost over `available`; ties broken by ascending node id.
/// NoCandidates when the pool is empty or entirely infeasible.
NodeId select_next(const NodeMetrics& metrics, std::span<const NodeId> prefix,
                   std::span<const NodeId> available, const RoutingParams& params);

struct Swarm {
    std::vector<NodeId> sequence;
    std::size_t shard_count() const { return sequence.size(); }
};

/// Minimum-capability gate applied before any selection.
struct EligibilityPolicy {
    double min_uptime = 0.0;
    double min_gpu_free = 0.0;
};

/// Greedy recursive construction: the first node minimizes the prefix-free
/// cost, each later node is select_next over the window of previously
/// chosen nodes.
Swarm form_swarm(const NodeMetrics& metrics, std::size_t p, const RoutingParams& params,
                 const EligibilityPolicy& eligibility = {});
Swarm form_swarm(const NetworkState& network, std::size_t p, const RoutingParams& params,
                 const MetricsOptions& opts = {}, const EligibilityPolicy& eligibility = {});

/// Thresholds defining when a held position is degraded and must be
/// re-filled; defaults never fire, so only failures force changes.
struct RebalancePolicy {
    double max_latency = std::numeric_limits<double>::infinity();
    double min_bandwidth = 0.0;
    double min_uptime = 0.0;
    double min_gpu_free = 0.0;
};

struct Trigger {
    enum class Kind { NodeFailure, MetricRefresh, Manual };
    Kind kind = Kind::MetricRefresh;
    NodeId failed_node = -1;

    static Trigger node_failure(NodeId id) { return {Kind::NodeFailure, id}; }
    static Trigger metric_refresh() { return {Kind::MetricRefresh, -1}; }
    static Trigger manual() { return {Kind::Manual, -1}; }
};

/// Re-fills failed or threshold-violating positions by select_next while
/// holding unaffected positions fixed; a swarm with no violations is
/// returned unchanged. Idempotent under unchanged metrics.
Swarm rebalance(const Swarm& swarm, const NodeMetrics& metrics, const RoutingParams& params,
                const Trigger& trigger, const EligibilityPolicy& eligibility = {},
                const RebalancePolicy& policy = {});

/// Reliability boost from topological stability: R' = min(1, R * (1 +
/// kappa * lifetime / max-finite-H0-death)). Lifetimes come from
/// compute_ph0 on the same snapshot.
NodeMetrics ph_adjust_reliability(const NodeMetrics& metrics, const PersistenceDiagram& diagram,
                                  const std::unordered_map<NodeId, double>& lifetimes,
                                  double kappa = 0.25);

} // namespace swarmplan
