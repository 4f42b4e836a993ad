#include "swarmplan/simulator.hpp"

#include "swarmplan/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swarmplan {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
    if (a != 0 && b > UINT64_MAX / a)
        throw ValidationError(std::string(what) + ": size overflows 64 bits");
    return a * b;
}

double stage_compute(const Stage& s, std::uint64_t batch) {
    return s.compute_base + s.compute_batch_slope * static_cast<double>(batch);
}

} // namespace

void validate_spec(const SessionSpec& spec) {
    if (spec.tokens_to_generate == 0 || spec.batch_size == 0 || spec.sequence_context == 0 ||
        spec.precision_bytes == 0)
        throw ValidationError("session counts must be positive");
    if (spec.model_dims.head_dim == 0 || spec.model_dims.n_heads == 0 ||
        spec.model_dims.n_layers == 0)
        throw ValidationError("model dimensions must be positive");
}

std::uint64_t kv_cache_per_token(std::uint64_t head_dim, std::uint64_t n_heads,
                                 std::uint64_t n_layers) {
    if (head_dim == 0 || n_heads == 0 || n_layers == 0)
        throw ValidationError("model dimensions must be positive");
    return checked_mul(checked_mul(checked_mul(2, head_dim, "kv cache"), n_heads, "kv cache"),
                       n_layers, "kv cache");
}

std::uint64_t kv_cache_bytes(const SessionSpec& spec) {
    validate_spec(spec);
    const std::uint64_t per_token = kv_cache_per_token(
        spec.model_dims.head_dim, spec.model_dims.n_heads, spec.model_dims.n_layers);
    return checked_mul(
        checked_mul(checked_mul(per_token, spec.sequence_context, "kv cache"), spec.batch_size,
                    "kv cache"),
        spec.precision_bytes, "kv cache");
}

std::vector<double> boundary_bytes(const CompGraph& graph, const Partition& partition) {
    validate_partition(graph, partition);
    const std::size_t stages = partition.block_count();
    std::vector<double> out;
    out.reserve(stages == 0 ? 0 : stages - 1);
    for (std::size_t i = 0; i + 1 < stages; ++i) {
        std::vector<char> later(graph.size(), 0);
        for (std::size_t j = i + 1; j < stages; ++j)
            for (NodeId id : partition.block(j)) later[graph.index_of(id)] = 1;
        double bytes = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            for (NodeId id : partition.block(j)) {
                const std::size_t idx = graph.index_of(id);
                for (std::size_t w : graph.out_neighbors(idx)) {
                    if (later[w]) {
                        bytes += graph.node_at(idx).size_out;
                        break;
                    }
                }
            }
        }
        out.push_back(bytes);
    }
    return out;
}

StagePlan build_stage_plan(const CompGraph& graph, const Partition& partition,
                           const Swarm& swarm, const NetworkState& network,
                           const SessionSpec& spec, const MemorySpec& default_mem,
                           const StagePlanOptions& opts) {
    validate_spec(spec);
    validate_partition(graph, partition);
    const std::size_t stages = partition.block_count();
    if (stages != swarm.shard_count())
        throw MismatchedCounts("partition has " + std::to_string(stages) + " blocks but swarm has " +
                               std::to_string(swarm.shard_count()) + " nodes");

    double param_total = 0.0;
    for (const OpNode& n : graph.nodes()) param_total += n.size_param;
    const double kv_total = static_cast<double>(kv_cache_bytes(spec));
    const std::vector<double> hop_bytes = boundary_bytes(graph, partition);

    StagePlan plan;
    plan.stages.resize(stages);
    for (std::size_t i = 0; i < stages; ++i) {
        Stage& stage = plan.stages[i];
        stage.node = swarm.sequence[i];
        const NetworkNode& node = network.node(stage.node);
        auto block = partition.block(i);
        stage.block.assign(block.begin(), block.end());

        double block_param = 0.0;
        for (NodeId id : block) block_param += graph.node(id).size_param;
        const double kv_share = param_total > 0.0
                                    ? kv_total * (block_param / param_total)
                                    : kv_total / static_cast<double>(stages);

        MemorySpec mem{node.mem_capacity >= 0.0 ? node.mem_capacity : default_mem.capacity,
                       default_mem.bandwidth};
        CostOptions cost_opts;
        cost_opts.overflow_mode = opts.overflow_mode;
        cost_opts.extra_bytes = kv_share;
        stage.compute_base = block_cost(graph, block, mem, cost_opts);
        stage.compute_batch_slope = opts.batch_slope;

        if (i + 1 < stages) {
            const NodeId next = swarm.sequence[i + 1];
            if (!network.has_link(stage.node, next))
                throw ValidationError("no network link between consecutive swarm nodes " +
                                      std::to_string(stage.node) + " and " + std::to_string(next));
            stage.hop_time = hop_bytes[i] / network.bandwidth(stage.node, next) +
                             network.latency(stage.node, next);
        }
    }
    return plan;
}

SessionTrace simulate(const StagePlan& plan, const SessionSpec& spec) {
    validate_spec(spec);
    if (plan.stages.empty()) throw ValidationError("stage plan has no stages");
    const std::size_t stages = plan.stages.size();
    const std::uint64_t steps = spec.tokens_to_generate;
    const std::uint64_t batch = spec.batch_size;

    std::vector<double> stage_total(stages), prefix(stages, 0.0);
    double period = 0.0, fill = 0.0;
    for (std::size_t s = 0; s < stages; ++s) {
        const double c = stage_compute(plan.stages[s], batch);
        if (!(c >= 0.0) || !(plan.stages[s].hop_time >= 0.0))
            throw ValidationError("stage times must be non-negative");
        stage_total[s] = c + plan.stages[s].hop_time;
        prefix[s] = fill;
        fill += stage_total[s];
        period = std::max(period, stage_total[s]);
    }
    if (!(period > 0.0)) throw ValidationError("pipeline period must be positive");

    SessionTrace trace;
    trace.period = period;
    trace.fill_latency = fill;
    trace.tokens_per_second = static_cast<double>(batch) / period;
    for (std::uint64_t m = 0; m < steps; ++m) {
        const double base = static_cast<double>(m) * period;
        for (std::size_t s = 0; s < stages; ++s) {
            const double start = prefix[s] + base;
            const double done = start + stage_compute(plan.stages[s], batch);
            trace.events.push_back({start, s, "start"});
            trace.events.push_back({done, s, "complete"});
            if (s + 1 < stages)
                trace.events.push_back({done + plan.stages[s].hop_time, s, "send"});
        }
        trace.events.push_back({prefix[stages - 1] + base + stage_compute(plan.stages[stages - 1], batch),
                                stages - 1, "token"});
        trace.tokens_completed += batch;
    }
    trace.total_time = fill + static_cast<double>(steps - 1) * period;
    return trace;
}

SessionTrace simulate_with_failures(const FailureScenario& scenario,
                                    std::span<const FailureEvent> failures) {
    if (scenario.graph == nullptr || scenario.network == nullptr)
        throw ValidationError("failure scenario requires a graph and a network");
    validate_spec(scenario.spec);
    if (!(scenario.rebalance_downtime >= 0.0))
        throw ValidationError("rebalance downtime must be non-negative");

    std::vector<FailureEvent> pending(failures.begin(), failures.end());
    std::sort(pending.begin(), pending.end(),
              [](const FailureEvent& a, const FailureEvent& b) { return a.time < b.time; });

    NetworkState network = *scenario.network;
    Swarm swarm = scenario.swarm;
    std::uint64_t remaining = scenario.spec.tokens_to_generate;
    double offset = 0.0;

    SessionTrace combined;
    auto append_shifted = [&](const SessionTrace& segment, double shift) {
        for (const TraceEvent& e : segment.events)
            combined.events.push_back({e.time + shift, e.stage, e.kind});
        combined.tokens_completed += segment.tokens_completed;
    };

    for (FailureEvent failure : pending) {
        if (remaining == 0) break;
        // a failure during a rebalance window takes effect once it ends
        failure.time = std::max(failure.time, offset);
        SessionSpec spec = scenario.spec;
        spec.tokens_to_generate = remaining;
        const StagePlan plan = build_stage_plan(*scenario.graph, scenario.partition, swarm,
                                                network, spec, scenario.mem, scenario.plan_opts);
        const SessionTrace full = simulate(plan, spec);

        // micro-steps whose final token left the pipeline before the failure
        const double first_token = full.fill_latency - plan.stages.back().hop_time;
        std::uint64_t done = 0;
        while (done < remaining &&
               offset + first_token + static_cast<double>(done) * full.period <= failure.time)
            ++done;
        if (done == remaining) {
            // session finished before this failure
            append_shifted(full, offset);
            combined.total_time = offset + full.total_time;
            combined.tokens_per_second = full.tokens_per_second;
            combined.period = full.period;
            combined.fill_latency = full.fill_latency;
            remaining = 0;
            break;
        }

        auto at = std::find(swarm.sequence.begin(), swarm.sequence.end(), failure.node);
        if (at == swarm.sequence.end())
            throw ValidationError("failed node " + std::to_string(failure.node) +
                                  " is not in the swarm");
        const std::size_t position =
            static_cast<std::size_t>(at - swarm.sequence.begin());

        if (done > 0) {
            SessionSpec done_spec = spec;
            done_spec.tokens_to_generate = done;
            append_shifted(simulate(plan, done_spec), offset);
        }
        combined.events.push_back({failure.time, position, "failure"});

        network = network.without_node(failure.node);
        const NodeMetrics metrics = NodeMetrics::from_network(network, scenario.metrics_opts);
        try {
            swarm = rebalance(swarm, metrics, scenario.params,
                              Trigger::node_failure(failure.node), scenario.eligibility);
        } catch (const InsufficientNodes& e) {
            combined.aborted = true;
            combined.abort_reason = e.what();
            combined.total_time = failure.time;
            combined.period = full.period;
            combined.fill_latency = full.fill_latency;
            combined.tokens_per_second = full.tokens_per_second;
            return combined;
        }
        combined.events.push_back({failure.time, position, "rebalance"});
        combined.downtime += scenario.rebalance_downtime;
        offset = failure.time + scenario.rebalance_downtime;
        remaining -= done;
    }

    if (remaining > 0) {
        SessionSpec spec = scenario.spec;
        spec.tokens_to_generate = remaining;
        const StagePlan plan = build_stage_plan(*scenario.graph, scenario.partition, swarm,
                                                network, spec, scenario.mem, scenario.plan_opts);
        const SessionTrace tail = simulate(plan, spec);
        append_shifted(tail, offset);
        combined.total_time = offset + tail.total_time;
        combined.tokens_per_second = tail.tokens_per_second;
        combined.period = tail.period;
        combined.fill_latency = tail.fill_latency;
    }
    return combined;
}

std::string trace_to_csv(const SessionTrace& trace) {
    std::ostringstream os;
    os << "time,stage,kind\n";
    for (const TraceEvent& e : trace.events)
        os << format_double(e.time) << "," << e.stage << "," << e.kind << "\n";
    return os.str();
}

} // namespace swarmplan
