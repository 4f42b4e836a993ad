#pragma once

#include "swarmplan/partition.hpp"
#include "swarmplan/routing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace swarmplan {

struct ModelDims {
    std::uint64_t head_dim = 1;
    std::uint64_t n_heads = 1;
    std::uint64_t n_layers = 1;
};

struct SessionSpec {
    std::uint64_t tokens_to_generate = 1; // per sequence in the batch
    std::uint64_t batch_size = 1;
    std::uint64_t sequence_context = 1;
    std::uint64_t precision_bytes = 2;
    ModelDims model_dims;
};

void validate_spec(const SessionSpec& spec);

/// Key/value cache elements stored per generated token:
/// 2 * head_dim * n_heads * n_layers.
std::uint64_t kv_cache_per_token(std::uint64_t head_dim, std::uint64_t n_heads,
                                 std::uint64_t n_layers);

/// Total cache footprint: per-token elements * context * batch * precision.
std::uint64_t kv_cache_bytes(const SessionSpec& spec);

/// One pipeline stage: the node, its assigned block, per-micro-step compute
/// time t(b) = base + slope * b, and the transfer time to the next stage
/// (zero for the last stage).
struct Stage {
    NodeId node = -1;
    std::vector<NodeId> block;
    double compute_base = 0.0;
    double compute_batch_slope = 0.0;
    double hop_time = 0.0;
};

struct StagePlan {
    std::vector<Stage> stages;
};

struct StagePlanOptions {
    /// Per-stage affine batch coefficient c in t(b) = t0 + c * b.
    double batch_slope = 0.0;
    OverflowMode overflow_mode = OverflowMode::Clamped;
};

/// Activation bytes crossing each hop of the partition: outputs produced at
/// or before block i and consumed after it, each producer counted once.
/// Length is block_count - 1.
std::vector<double> boundary_bytes(const CompGraph& graph, const Partition& partition);

/// Maps partition blocks onto the swarm sequence. Stage compute time is the
/// block cost under the node's own memory capacity (falling back to the
/// global spec) with the stage's KV-cache share counted against fast
/// memory; hop time is boundary activation bytes / link bandwidth + link
/// latency. The KV cache is apportioned by each block's share of total
/// parameter bytes (evenly when the model has none).
StagePlan build_stage_plan(const CompGraph& graph, const Partition& partition,
                           const Swarm& swarm, const NetworkState& network,
                           const SessionSpec& spec, const MemorySpec& default_mem,
                           const StagePlanOptions& opts = {});

struct TraceEvent {
    double time = 0.0;
    std::size_t stage = 0;
    std::string kind; // start | complete | send | token | failure | rebalance
};

struct SessionTrace {
    std::vector<TraceEvent> events;
    double tokens_per_second = 0.0; // steady-state rate of the final plan
    double total_time = 0.0;
    double downtime = 0.0;
    std::uint64_t tokens_completed = 0;
    double period = 0.0;       // bottleneck micro-step period of the final plan
    double fill_latency = 0.0; // pipeline fill of the final plan
    bool aborted = false;
    std::string abort_reason;
};

/// Synchronous micro-step pipeline: the period is the max over stages of
/// compute + outgoing hop; steady-state tokens/sec is batch / period; the
/// fill latency is the sum over stages. Fully deterministic.
SessionTrace simulate(const StagePlan& plan, const SessionSpec& spec);

struct FailureEvent {
    NodeId node = -1;
    double time = 0.0;
};

struct FailureScenario {
    const CompGraph* graph = nullptr;
    Partition partition;
    Swarm swarm;
    const NetworkState* network = nullptr;
    SessionSpec spec;
    MemorySpec mem;
    StagePlanOptions plan_opts;
    RoutingParams params;
    MetricsOptions metrics_opts;
    EligibilityPolicy eligibility;
    double rebalance_downtime = 5.0;
};

/// simulate with mid-session node failures: on each failure the pipeline
/// pauses, the swarm is rebalanced (node_failure trigger), the plan is
/// rebuilt and the remaining tokens run on it after a fixed downtime.
/// InsufficientNodes aborts with a partial trace instead of throwing.
SessionTrace simulate_with_failures(const FailureScenario& scenario,
                                    std::span<const FailureEvent> failures);

/// Trace CSV: header "time,stage,kind", one row per event.
std::string trace_to_csv(const SessionTrace& trace);

} // namespace swarmplan
