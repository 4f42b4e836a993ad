#pragma once

#include "swarmplan/compgraph.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace swarmplan {

/// Per-node fast-memory capacity M (bytes) and streaming/transfer bandwidth
/// B (bytes per time unit).
struct MemorySpec {
    double capacity = 0.0;  // M
    double bandwidth = 1.0; // B, > 0
};

enum class OverflowMode {
    Clamped,    // max(0, sizeparam(S) + peak(S) - M) / B
    StrictPaper // (sizeparam(S) + peak(S) - M) + peak(S) / B, as printed
};

/// Peak-activation model: per-node liveness value; peak(S) is the max over
/// the block. The default charges a node its own output plus all inputs it
/// holds live while executing. Swappable for other liveness models.
using LivenessModel = std::function<double(const CompGraph&, std::size_t idx)>;

double single_op_liveness(const CompGraph& graph, std::size_t idx);

/// Liveness of every node under `model` (default single_op_liveness),
/// aligned with the graph's node order.
std::vector<double> node_liveness(const CompGraph& graph, const LivenessModel& model = {});

struct CostOptions {
    OverflowMode overflow_mode = OverflowMode::Clamped;
    /// Extra bytes resident in fast memory besides parameters/activations
    /// (e.g. a KV-cache share); participates in the overflow term.
    double extra_bytes = 0.0;
    LivenessModel liveness_model; // empty = single_op_liveness
};

/// Transfer cost between disjoint node sets: (1/B) times the total
/// output size of producers in `from` consumed by `to`, each counted once.
double io_cost(const CompGraph& graph, std::span<const NodeId> from,
               std::span<const NodeId> to, double bandwidth);

/// Time to stream parameters beyond the fast-memory limit.
double overflow_cost(const CompGraph& graph, std::span<const NodeId> block,
                     const MemorySpec& mem, const CostOptions& opts = {});

struct BlockCostBreakdown {
    double io_in = 0.0;
    double work = 0.0;
    double overflow = 0.0;
    double io_out = 0.0;
    double total = 0.0;
};

/// Full block cost: incoming transfers + work + overflow + outgoing
/// transfers. `block` is an ordered node sequence; sums accumulate in the
/// given order, so callers that need bit-identical results across routes
/// must present blocks in the same order (segments are always passed in
/// topological-order position).
BlockCostBreakdown block_cost_breakdown(const CompGraph& graph, std::span<const NodeId> block,
                                        const MemorySpec& mem, const CostOptions& opts = {});
double block_cost(const CompGraph& graph, std::span<const NodeId> block,
                  const MemorySpec& mem, const CostOptions& opts = {});

/// Contiguous split of a topological order. `cuts` are prefix lengths
/// (strictly increasing, each in [1, n-1]): a cut at c separates order
/// position c-1 from position c, 0-based; "cut after position c" in 1-based
/// speak. k blocks = k-1 cuts.
struct Partition {
    std::vector<NodeId> order;
    std::vector<std::size_t> cuts;
    double bottleneck = 0.0;

    std::size_t block_count() const { return cuts.size() + 1; }
    std::span<const NodeId> block(std::size_t i) const;
    std::vector<std::vector<NodeId>> blocks() const;
};

/// Throws ValidationError unless blocks are non-empty contiguous segments
/// covering a valid topological order of the graph.
void validate_partition(const CompGraph& graph, const Partition& partition);

/// Max block cost over the partition's blocks.
double bottleneck_cost(const CompGraph& graph, const Partition& partition,
                       const MemorySpec& mem, const CostOptions& opts = {});

/// Precomputed cost of every contiguous segment [l, r] (1-based, inclusive)
/// of a topological order. Query(l, r) is bit-identical to from-scratch
/// block_cost on the same segment: both paths accumulate node sums in
/// order-position order and boundary-transfer sums in ascending node id.
class SegmentCostOracle {
public:
    std::size_t size() const { return n_; }
    double query(std::size_t l, std::size_t r) const;

private:
    friend SegmentCostOracle build_segment_cost(const CompGraph&, const TopoOrder&,
                                                const MemorySpec&, const CostOptions&);
    SegmentCostOracle(std::size_t n) : n_(n), table_(n * (n + 1) / 2, 0.0) {}
    std::size_t cell(std::size_t l, std::size_t r) const;

    std::size_t n_;
    std::vector<double> table_;
};

/// O(n^2) construction by incremental segment extension.
SegmentCostOracle build_segment_cost(const CompGraph& graph, const TopoOrder& order,
                                     const MemorySpec& mem, const CostOptions& opts = {});

struct SliceResult {
    double bottleneck = 0.0;
    std::vector<std::size_t> cuts;
};

/// Optional hook applied to max(DP(l, k-1), Query(l+1, r)) inside the DP
/// minimization; arguments are (candidate value, closing segment length).
/// Identity (no hook) preserves exact optimality.
using HeuristicAdjustment = std::function<double(double, std::size_t)>;

struct SliceOptions {
    HeuristicAdjustment heuristic_adjustment;
};

/// Multiplicative penalty on deviation from balanced segment length n/k.
HeuristicAdjustment make_imbalance_penalty(double factor, std::size_t n, std::size_t k);

/// Minimum-bottleneck split of the order into at most k contiguous blocks;
/// O(n^2 k) dynamic program over the segment-cost oracle. Returns the
/// lexicographically smallest optimal cut set (with no heuristic hook).
SliceResult slice_graph_dp(const SegmentCostOracle& oracle, std::size_t n, std::size_t k,
                           const SliceOptions& opts = {});

/// Exhaustive split enumeration, the test oracle for the DP. Lexicographic
/// enumeration with strict improvement keeps the lexicographically smallest
/// optimal cut set.
SliceResult brute_force_mtpp(const CompGraph& graph, const TopoOrder& order, std::size_t k,
                             const MemorySpec& mem, const CostOptions& opts = {},
                             std::size_t node_limit = 14);

/// Plan document I/O:
///   {"order": [...], "cuts": [...], "blocks": [[ids]],
///    "bottleneck": v, "mem": {"capacity": M, "bandwidth": B}}
std::string serialize_plan(const Partition& partition, const MemorySpec& mem);
std::pair<Partition, MemorySpec> parse_plan(const std::string& text,
                                            const std::string& origin = "<string>");
std::pair<Partition, MemorySpec> load_plan(const std::filesystem::path& file);
void save_plan(const Partition& partition, const MemorySpec& mem,
               const std::filesystem::path& file);

} // namespace swarmplan
