#include "swarmplan/routing.hpp"

#include <algorithm>
#include <cmath>

namespace swarmplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool eligible(const NodeMetrics& m, NodeId id, const EligibilityPolicy& policy) {
    return m.uptime(id) >= policy.min_uptime && m.gpu_free(id) >= policy.min_gpu_free;
}

} // namespace

double reliability(double uptime, Mode mode) {
    if (!(uptime >= 0.0 && uptime <= 1.0))
        throw OutOfRange("uptime must lie in [0, 1], got " + std::to_string(uptime));
    return mode == Mode::Default ? uptime : 1.0 - uptime;
}

void validate_params(const RoutingParams& params) {
    for (double e : {params.gamma, params.beta, params.alpha_rel})
        if (!(e > 0.0) || !std::isfinite(e))
            throw ValidationError("routing exponents must be positive and finite");
}

NodeMetrics NodeMetrics::from_network(const NetworkState& network, const MetricsOptions& opts) {
    if (!(opts.default_payload >= 0.0))
        throw ValidationError("default payload must be non-negative");
    NodeMetrics m;
    m.mode_ = opts.mode;
    const std::size_t n = network.size();
    m.ids_.reserve(n);
    for (const NetworkNode& node : network.nodes()) {
        m.index_.emplace(node.id, m.ids_.size());
        m.ids_.push_back(node.id);
        m.gpu_free_.push_back(node.gpu_total - node.gpu_used);
        m.load_.push_back(std::max(node.load, opts.load_floor));
        m.uptime_.push_back(node.uptime);
        m.rel_.push_back(reliability(node.uptime, opts.mode));
    }
    m.payload_.assign(n * n, opts.default_payload);
    m.bandwidth_.assign(n * n, kNan);
    m.latency_.assign(n * n, kNan);
    for (const NetworkLink& l : network.links()) {
        const std::size_t a = network.index_of(l.u), b = network.index_of(l.v);
        m.bandwidth_[a * n + b] = m.bandwidth_[b * n + a] = l.bandwidth;
        m.latency_[a * n + b] = m.latency_[b * n + a] = l.latency;
    }
    return m;
}

std::size_t NodeMetrics::index(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw ValidationError("unknown node id " + std::to_string(id) + " in metrics");
    return it->second;
}

bool NodeMetrics::linked(NodeId from, NodeId to) const {
    return !std::isnan(bandwidth_[index(from) * ids_.size() + index(to)]);
}
double NodeMetrics::payload(NodeId from, NodeId to) const {
    return payload_[index(from) * ids_.size() + index(to)];
}
double NodeMetrics::bandwidth(NodeId from, NodeId to) const {
    return bandwidth_[index(from) * ids_.size() + index(to)];
}
double NodeMetrics::latency(NodeId from, NodeId to) const {
    return latency_[index(from) * ids_.size() + index(to)];
}
void NodeMetrics::set_payload(NodeId from, NodeId to, double bytes) {
    if (!(bytes >= 0.0) || !std::isfinite(bytes))
        throw ValidationError("payload must be non-negative and finite");
    payload_[index(from) * ids_.size() + index(to)] = bytes;
}

CostBreakdown node_cost_breakdown(const NodeMetrics& metrics, NodeId candidate,
                                  std::span<const NodeId> prefix, const RoutingParams& params) {
    validate_params(params);
    for (NodeId p : prefix)
        if (p == candidate)
            throw ValidationError("candidate " + std::to_string(candidate) +
                                  " already appears in the prefix");

    CostBreakdown out;
    const std::size_t window = std::min(prefix.size(), params.context_alpha + 1);
    for (std::size_t w = prefix.size() - window; w < prefix.size(); ++w) {
        const NodeId j = prefix[w];
        if (!metrics.linked(j, candidate)) {
            out.transfer = kInf;
            break;
        }
        const double base =
            metrics.payload(j, candidate) / metrics.bandwidth(j, candidate) +
            metrics.latency(j, candidate);
        out.transfer += std::pow(base, params.gamma);
    }

    const double g = metrics.gpu_free(candidate);
    const double c = metrics.load(candidate);
    if (metrics.mode() == Mode::Default) {
        // ZeroGpu: no headroom means the candidate is unusable
        out.load = g > 0.0 ? std::pow(c / g, params.beta) : kInf;
    } else {
        out.load = std::pow(g / c, params.beta);
    }

    out.reliability = std::pow(1.0 / (metrics.rel(candidate) + 1.0), params.alpha_rel);
    out.total = out.transfer + out.load + out.reliability;
    return out;
}

double node_cost(const NodeMetrics& metrics, NodeId candidate, std::span<const NodeId> prefix,
                 const RoutingParams& params) {
    return node_cost_breakdown(metrics, candidate, prefix, params).total;
}

NodeId select_next(const NodeMetrics& metrics, std::span<const NodeId> prefix,
                   std::span<const NodeId> available, const RoutingParams& params) {
    if (available.empty()) throw NoCandidates("no candidate nodes available");
    NodeId best = -1;
    double best_cost = kInf;
    std::vector<NodeId> sorted(available.begin(), available.end());
    std::sort(sorted.begin(), sorted.end());
    for (NodeId id : sorted) {
        const double cost = node_cost(metrics, id, prefix, params);
        if (cost < best_cost) {
            best_cost = cost;
            best = id;
        }
    }
    if (best < 0) throw NoCandidates("all candidates are infeasible (infinite cost)");
    return best;
}

Swarm form_swarm(const NodeMetrics& metrics, std::size_t p, const RoutingParams& params,
                 const EligibilityPolicy& eligibility) {
    validate_params(params);
    if (p == 0) throw ValidationError("shard count p must be positive");
    std::vector<NodeId> pool;
    for (NodeId id : metrics.ids())
        if (eligible(metrics, id, eligibility)) pool.push_back(id);
    if (pool.size() < p)
        throw InsufficientNodes("need " + std::to_string(p) + " eligible nodes, have " +
                                std::to_string(pool.size()));

    Swarm swarm;
    while (swarm.sequence.size() < p) {
        const NodeId chosen = select_next(metrics, swarm.sequence, pool, params);
        swarm.sequence.push_back(chosen);
        pool.erase(std::find(pool.begin(), pool.end(), chosen));
    }
    return swarm;
}

Swarm form_swarm(const NetworkState& network, std::size_t p, const RoutingParams& params,
                 const MetricsOptions& opts, const EligibilityPolicy& eligibility) {
    return form_swarm(NodeMetrics::from_network(network, opts), p, params, eligibility);
}

namespace {

bool position_violates(const NodeMetrics& metrics, const std::vector<NodeId>& seq,
                       std::size_t i, const Trigger& trigger, const EligibilityPolicy& elig,
                       const RebalancePolicy& policy) {
    const NodeId id = seq[i];
    if (trigger.kind == Trigger::Kind::NodeFailure && id == trigger.failed_node) return true;
    if (!metrics.contains(id)) return true;
    if (metrics.uptime(id) < std::max(elig.min_uptime, policy.min_uptime)) return true;
    if (metrics.gpu_free(id) < std::max(elig.min_gpu_free, policy.min_gpu_free)) return true;
    if (i > 0) {
        const NodeId prev = seq[i - 1];
        if (!metrics.contains(prev)) return false; // handled at position i-1
        if (!metrics.linked(prev, id)) return true;
        if (metrics.latency(prev, id) > policy.max_latency) return true;
        if (metrics.bandwidth(prev, id) < policy.min_bandwidth) return true;
    }
    return false;
}

} // namespace

namespace {

/// A replacement must satisfy every threshold itself, or rebalancing could
/// oscillate between equally bad candidates.
bool satisfies_position(const NodeMetrics& metrics, NodeId id, const NodeId* prev,
                        const EligibilityPolicy& elig, const RebalancePolicy& policy) {
    if (!eligible(metrics, id, elig)) return false;
    if (metrics.uptime(id) < policy.min_uptime) return false;
    if (metrics.gpu_free(id) < policy.min_gpu_free) return false;
    if (prev != nullptr) {
        if (!metrics.linked(*prev, id)) return false;
        if (metrics.latency(*prev, id) > policy.max_latency) return false;
        if (metrics.bandwidth(*prev, id) < policy.min_bandwidth) return false;
    }
    return true;
}

} // namespace

Swarm rebalance(const Swarm& swarm, const NodeMetrics& metrics, const RoutingParams& params,
                const Trigger& trigger, const EligibilityPolicy& eligibility,
                const RebalancePolicy& policy) {
    validate_params(params);
    std::vector<NodeId> seq = swarm.sequence;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!position_violates(metrics, seq, i, trigger, eligibility, policy)) continue;

        const NodeId* prev = i > 0 && metrics.contains(seq[i - 1]) ? &seq[i - 1] : nullptr;
        std::vector<NodeId> pool;
        for (NodeId id : metrics.ids()) {
            if (trigger.kind == Trigger::Kind::NodeFailure && id == trigger.failed_node)
                continue;
            if (std::find(seq.begin(), seq.end(), id) != seq.end()) continue;
            if (!satisfies_position(metrics, id, prev, eligibility, policy)) continue;
            pool.push_back(id);
        }
        if (pool.empty())
            throw InsufficientNodes("no replacement available for position " +
                                    std::to_string(i + 1));
        const std::span<const NodeId> prefix(seq.data(), i);
        seq[i] = select_next(metrics, prefix, pool, params);
    }
    return Swarm{std::move(seq)};
}

NodeMetrics ph_adjust_reliability(const NodeMetrics& metrics, const PersistenceDiagram& diagram,
                                  const std::unordered_map<NodeId, double>& lifetimes,
                                  double kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw ValidationError("kappa must be non-negative and finite");
    double max_death = 0.0;
    for (const PersistencePair& p : diagram.h0)
        if (p.finite()) max_death = std::max(max_death, p.death);

    NodeMetrics adjusted = metrics;
    for (NodeId id : metrics.ids()) {
        auto it = lifetimes.find(id);
        if (it == lifetimes.end()) continue;
        const double normalized = max_death > 0.0 ? it->second / max_death : 1.0;
        const double boosted = std::min(1.0, metrics.rel(id) * (1.0 + kappa * normalized));
        adjusted.set_reliability(id, boosted);
    }
    return adjusted;
}

} // namespace swarmplan
