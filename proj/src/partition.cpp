#include "swarmplan/partition.hpp"

#include "swarmplan/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace swarmplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Shared accumulator for a block's cost. Node-wise sums fold in insertion
/// order; boundary-transfer sums are recomputed over id-sorted contributor
/// sets, so the incremental oracle and from-scratch evaluation execute the
/// same floating-point expression tree.
struct SegmentState {
    double work_sum = 0.0;
    double param_sum = 0.0;
    double peak = 0.0;
    std::set<std::size_t> in_contrib;  // producers outside the block feeding it
    std::set<std::size_t> out_contrib; // members with a consumer outside the block
};

double sum_size_out(const CompGraph& graph, const std::set<std::size_t>& contributors) {
    double sum = 0.0;
    for (std::size_t idx : contributors) sum += graph.node_at(idx).size_out;
    return sum;
}

BlockCostBreakdown finalize_cost(const CompGraph& graph, const SegmentState& st,
                                 const MemorySpec& mem, const CostOptions& opts) {
    BlockCostBreakdown out;
    out.io_in = sum_size_out(graph, st.in_contrib) / mem.bandwidth;
    out.io_out = sum_size_out(graph, st.out_contrib) / mem.bandwidth;
    out.work = st.work_sum;
    const double demand = (st.param_sum + st.peak) + opts.extra_bytes;
    if (opts.overflow_mode == OverflowMode::Clamped) {
        const double excess = demand - mem.capacity;
        out.overflow = excess > 0.0 ? excess / mem.bandwidth : 0.0;
    } else {
        out.overflow = (demand - mem.capacity) + st.peak / mem.bandwidth;
    }
    out.total = ((out.io_in + out.work) + out.overflow) + out.io_out;
    return out;
}

double liveness_of(const CompGraph& graph, std::size_t idx, const LivenessModel& model) {
    return model ? model(graph, idx) : single_op_liveness(graph, idx);
}

void check_mem(const MemorySpec& mem) {
    if (!(mem.bandwidth > 0.0) || !std::isfinite(mem.bandwidth))
        throw ValidationError("bandwidth must be positive and finite");
    if (mem.capacity < 0.0 || !std::isfinite(mem.capacity))
        throw ValidationError("memory capacity must be non-negative and finite");
}

std::vector<std::size_t> to_indices(const CompGraph& graph, std::span<const NodeId> ids,
                                    const char* what) {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    std::vector<char> seen(graph.size(), 0);
    for (NodeId id : ids) {
        std::size_t idx = graph.index_of(id);
        if (seen[idx]) throw ValidationError(std::string(what) + ": duplicate node id " +
                                             std::to_string(id));
        seen[idx] = 1;
        out.push_back(idx);
    }
    return out;
}

} // namespace

double single_op_liveness(const CompGraph& graph, std::size_t idx) {
    double live = graph.node_at(idx).size_out;
    for (std::size_t u : graph.in_neighbors(idx)) live += graph.node_at(u).size_out;
    return live;
}

std::vector<double> node_liveness(const CompGraph& graph, const LivenessModel& model) {
    std::vector<double> live(graph.size());
    for (std::size_t i = 0; i < graph.size(); ++i) live[i] = liveness_of(graph, i, model);
    return live;
}

double io_cost(const CompGraph& graph, std::span<const NodeId> from,
               std::span<const NodeId> to, double bandwidth) {
    if (!(bandwidth > 0.0)) throw ValidationError("io_cost: bandwidth must be positive");
    std::vector<char> in_from(graph.size(), 0), in_to(graph.size(), 0);
    for (std::size_t idx : to_indices(graph, from, "io_cost(from)")) in_from[idx] = 1;
    for (std::size_t idx : to_indices(graph, to, "io_cost(to)")) {
        if (in_from[idx])
            throw ValidationError("io_cost: sets must be disjoint (node " +
                                  std::to_string(graph.id_at(idx)) + " in both)");
        in_to[idx] = 1;
    }
    std::set<std::size_t> contributors;
    for (std::size_t v = 0; v < graph.size(); ++v) {
        if (!in_from[v]) continue;
        for (std::size_t w : graph.out_neighbors(v)) {
            if (in_to[w]) {
                contributors.insert(v);
                break;
            }
        }
    }
    return sum_size_out(graph, contributors) / bandwidth;
}

BlockCostBreakdown block_cost_breakdown(const CompGraph& graph, std::span<const NodeId> block,
                                        const MemorySpec& mem, const CostOptions& opts) {
    check_mem(mem);
    if (block.empty()) throw ValidationError("block_cost: block must be non-empty");
    const std::vector<std::size_t> members = to_indices(graph, block, "block_cost");
    std::vector<char> member(graph.size(), 0);
    for (std::size_t idx : members) member[idx] = 1;

    SegmentState st;
    for (std::size_t idx : members) {
        const OpNode& n = graph.node_at(idx);
        st.work_sum += n.work;
        st.param_sum += n.size_param;
        st.peak = std::max(st.peak, liveness_of(graph, idx, opts.liveness_model));
    }
    for (std::size_t idx : members) {
        for (std::size_t u : graph.in_neighbors(idx))
            if (!member[u]) st.in_contrib.insert(u);
        for (std::size_t w : graph.out_neighbors(idx)) {
            if (!member[w]) {
                st.out_contrib.insert(idx);
                break;
            }
        }
    }
    return finalize_cost(graph, st, mem, opts);
}

double block_cost(const CompGraph& graph, std::span<const NodeId> block,
                  const MemorySpec& mem, const CostOptions& opts) {
    return block_cost_breakdown(graph, block, mem, opts).total;
}

double overflow_cost(const CompGraph& graph, std::span<const NodeId> block,
                     const MemorySpec& mem, const CostOptions& opts) {
    return block_cost_breakdown(graph, block, mem, opts).overflow;
}

std::span<const NodeId> Partition::block(std::size_t i) const {
    const std::size_t begin = i == 0 ? 0 : cuts[i - 1];
    const std::size_t end = i == cuts.size() ? order.size() : cuts[i];
    return std::span<const NodeId>(order).subspan(begin, end - begin);
}

std::vector<std::vector<NodeId>> Partition::blocks() const {
    std::vector<std::vector<NodeId>> out;
    for (std::size_t i = 0; i < block_count(); ++i) {
        auto b = block(i);
        out.emplace_back(b.begin(), b.end());
    }
    return out;
}

void validate_partition(const CompGraph& graph, const Partition& partition) {
    TopoOrder order{partition.order};
    if (!is_topo_order(graph, order))
        throw ValidationError("partition order is not a topological order of the graph");
    std::size_t prev = 0;
    for (std::size_t c : partition.cuts) {
        if (c <= prev || c >= partition.order.size())
            throw ValidationError("partition cuts must be strictly increasing within (0, n)");
        prev = c;
    }
}

double bottleneck_cost(const CompGraph& graph, const Partition& partition,
                       const MemorySpec& mem, const CostOptions& opts) {
    validate_partition(graph, partition);
    double worst = -kInf;
    for (std::size_t i = 0; i < partition.block_count(); ++i)
        worst = std::max(worst, block_cost(graph, partition.block(i), mem, opts));
    return worst;
}

std::size_t SegmentCostOracle::cell(std::size_t l, std::size_t r) const {
    return (l - 1) * (n_ + 1) - l * (l - 1) / 2 + (r - l);
}

double SegmentCostOracle::query(std::size_t l, std::size_t r) const {
    if (l < 1 || r < l || r > n_)
        throw ValidationError("segment query (" + std::to_string(l) + ", " +
                              std::to_string(r) + ") outside 1 <= l <= r <= " +
                              std::to_string(n_));
    return table_[cell(l, r)];
}

SegmentCostOracle build_segment_cost(const CompGraph& graph, const TopoOrder& order,
                                     const MemorySpec& mem, const CostOptions& opts) {
    check_mem(mem);
    if (!is_topo_order(graph, order))
        throw ValidationError("segment-cost oracle requires a valid topological order");
    const std::size_t n = graph.size();
    SegmentCostOracle oracle(n);

    const std::vector<double> live = node_liveness(graph, opts.liveness_model);
    std::vector<std::size_t> pos_idx(n); // order position -> node index
    for (std::size_t p = 0; p < n; ++p) pos_idx[p] = graph.index_of(order.order[p]);

    std::vector<char> member(n, 0);
    std::vector<std::size_t> outside_consumers(n, 0);
    for (std::size_t l = 1; l <= n; ++l) {
        SegmentState st;
        std::fill(member.begin(), member.end(), 0);
        for (std::size_t r = l; r <= n; ++r) {
            const std::size_t x = pos_idx[r - 1];
            const OpNode& nx = graph.node_at(x);
            st.work_sum += nx.work;
            st.param_sum += nx.size_param;
            st.peak = std::max(st.peak, live[x]);

            st.in_contrib.erase(x);
            for (std::size_t u : graph.in_neighbors(x))
                if (!member[u]) st.in_contrib.insert(u);
            member[x] = 1;

            std::size_t inside = 0;
            for (std::size_t w : graph.out_neighbors(x))
                if (member[w]) ++inside;
            outside_consumers[x] = graph.out_neighbors(x).size() - inside;
            if (outside_consumers[x] > 0) st.out_contrib.insert(x);
            for (std::size_t u : graph.in_neighbors(x)) {
                if (member[u] && u != x && --outside_consumers[u] == 0)
                    st.out_contrib.erase(u);
            }

            oracle.table_[oracle.cell(l, r)] = finalize_cost(graph, st, mem, opts).total;
        }
    }
    return oracle;
}

HeuristicAdjustment make_imbalance_penalty(double factor, std::size_t n, std::size_t k) {
    const double target = static_cast<double>(n) / static_cast<double>(k == 0 ? 1 : k);
    return [factor, target, n](double value, std::size_t seg_len) {
        const double imbalance =
            std::abs(static_cast<double>(seg_len) - target) / static_cast<double>(n);
        return value * (1.0 + factor * imbalance);
    };
}

namespace {

/// Lexicographically smallest cut set achieving bottleneck `opt` with at
/// most k blocks: prefer stopping (prefix order), otherwise the smallest
/// feasible next cut.
std::vector<std::size_t> reconstruct_lex_cuts(const SegmentCostOracle& oracle, std::size_t n,
                                              std::size_t k, double opt) {
    const std::size_t big = n + 2;
    std::vector<std::size_t> minblk(n + 2, big);
    minblk[n + 1] = 0;
    for (std::size_t i = n; i >= 1; --i) {
        for (std::size_t j = i; j <= n; ++j) {
            if (oracle.query(i, j) <= opt && minblk[j + 1] + 1 < minblk[i])
                minblk[i] = minblk[j + 1] + 1;
        }
    }

    std::vector<std::size_t> cuts;
    std::size_t pos = 1, used = 0;
    while (true) {
        if (used + 1 <= k && oracle.query(pos, n) <= opt) break;
        bool advanced = false;
        for (std::size_t c = pos; c + 1 <= n; ++c) {
            if (oracle.query(pos, c) <= opt && used + 1 + minblk[c + 1] <= k) {
                cuts.push_back(c);
                pos = c + 1;
                ++used;
                advanced = true;
                break;
            }
        }
        if (!advanced)
            throw Error("internal: failed to reconstruct optimal cuts"); // unreachable
    }
    return cuts;
}

} // namespace

SliceResult slice_graph_dp(const SegmentCostOracle& oracle, std::size_t n, std::size_t k,
                           const SliceOptions& opts) {
    if (n == 0 || n != oracle.size())
        throw ValidationError("slice_graph_dp: n must match the oracle");
    if (k < 1 || k > n)
        throw InvalidBudget("block budget k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(n) + "]");
    const auto& adjust = opts.heuristic_adjustment;
    auto adj = [&](double value, std::size_t seg_len) {
        return adjust ? adjust(value, seg_len) : value;
    };

    // dp over exactly-kp blocks; best over kp <= k gives the at-most-k optimum
    std::vector<std::vector<double>> dp;
    dp.emplace_back(); // unused kp = 0 slot
    dp.emplace_back(n + 1, kInf);
    for (std::size_t r = 1; r <= n; ++r) dp[1][r] = oracle.query(1, r);

    double best = dp[1][n];
    std::size_t best_kp = 1;
    for (std::size_t kp = 2; kp <= k; ++kp) {
        dp.emplace_back(n + 1, kInf);
        auto& cur = dp[kp];
        const auto& prev = dp[kp - 1];
        for (std::size_t r = kp; r <= n; ++r) {
            double ans = kInf;
            for (std::size_t l = kp - 1; l + 1 <= r; ++l) {
                const double candidate =
                    adj(std::max(prev[l], oracle.query(l + 1, r)), r - l);
                ans = std::min(ans, candidate);
            }
            cur[r] = ans;
        }
        if (cur[n] < best) {
            best = cur[n];
            best_kp = kp;
        }
    }

    SliceResult result;
    result.bottleneck = best;
    if (!adjust) {
        result.cuts = reconstruct_lex_cuts(oracle, n, k, best);
    } else {
        // backtrack on the dp table; lexicographic tie-break not guaranteed
        // under a non-identity hook
        std::vector<std::size_t> rev;
        std::size_t r = n;
        for (std::size_t kp = best_kp; kp >= 2; --kp) {
            for (std::size_t l = kp - 1; l + 1 <= r; ++l) {
                const double candidate =
                    adj(std::max(dp[kp - 1][l], oracle.query(l + 1, r)), r - l);
                if (candidate == dp[kp][r]) {
                    rev.push_back(l);
                    r = l;
                    break;
                }
            }
        }
        result.cuts.assign(rev.rbegin(), rev.rend());
    }
    return result;
}

SliceResult brute_force_mtpp(const CompGraph& graph, const TopoOrder& order, std::size_t k,
                             const MemorySpec& mem, const CostOptions& opts,
                             std::size_t node_limit) {
    const std::size_t n = graph.size();
    if (n == 0) throw ValidationError("brute_force_mtpp: empty graph");
    if (n > node_limit)
        throw TooLarge("brute_force_mtpp: " + std::to_string(n) + " nodes exceeds limit " +
                       std::to_string(node_limit));
    if (k < 1) throw InvalidBudget("block budget must be at least 1");
    if (!is_topo_order(graph, order))
        throw ValidationError("brute_force_mtpp requires a valid topological order");
    const std::size_t max_cuts = std::min(k, n) - 1;
    const std::span<const NodeId> seq(order.order);

    SliceResult best;
    best.bottleneck = kInf;
    std::vector<std::size_t> cuts;

    auto evaluate = [&]() {
        double bottleneck = -kInf;
        std::size_t begin = 0;
        for (std::size_t i = 0; i <= cuts.size(); ++i) {
            const std::size_t end = i == cuts.size() ? n : cuts[i];
            bottleneck =
                std::max(bottleneck, block_cost(graph, seq.subspan(begin, end - begin), mem, opts));
            begin = end;
        }
        if (bottleneck < best.bottleneck) {
            best.bottleneck = bottleneck;
            best.cuts = cuts;
        }
    };

    // depth-first over cut sets, visiting every prefix before its
    // extensions: lexicographic order over cut sequences
    auto dfs = [&](auto&& self, std::size_t from) -> void {
        evaluate();
        if (cuts.size() >= max_cuts) return;
        for (std::size_t c = from; c + 1 <= n; ++c) {
            cuts.push_back(c);
            self(self, c + 1);
            cuts.pop_back();
        }
    };
    dfs(dfs, 1);
    return best;
}

std::string serialize_plan(const Partition& partition, const MemorySpec& mem) {
    ordered_json doc;
    doc["order"] = partition.order;
    doc["cuts"] = partition.cuts;
    doc["blocks"] = partition.blocks();
    doc["bottleneck"] = partition.bottleneck;
    doc["mem"] = {{"M", mem.capacity}, {"B", mem.bandwidth}};
    return doc.dump(2) + "\n";
}

std::pair<Partition, MemorySpec> parse_plan(const std::string& text, const std::string& origin) {
    json doc = parse_json_document(text, origin);
    require_object(doc, origin, {"order", "cuts", "blocks", "bottleneck", "mem"});
    Partition p;
    for (const json& v : require_array(doc, "order", origin)) {
        if (!v.is_number_integer()) throw ParseError(origin + ": order entries must be ids");
        p.order.push_back(v.get<NodeId>());
    }
    for (const json& v : require_array(doc, "cuts", origin)) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw ParseError(origin + ": cuts entries must be non-negative positions");
        p.cuts.push_back(v.get<std::size_t>());
    }
    p.bottleneck = require_number(doc, "bottleneck", origin);
    const json& jm = require_field(doc, "mem", origin);
    require_object(jm, origin + ": mem", {"M", "B"});
    MemorySpec mem;
    mem.capacity = require_number(jm, "M", origin + ": mem");
    mem.bandwidth = require_number(jm, "B", origin + ": mem");
    check_mem(mem);

    std::size_t prev = 0;
    for (std::size_t c : p.cuts) {
        if (c <= prev || c >= p.order.size())
            throw ValidationError(origin + ": cuts must be strictly increasing within (0, n)");
        prev = c;
    }
    const json& jb = require_array(doc, "blocks", origin);
    if (jb.size() != p.block_count())
        throw ValidationError(origin + ": blocks field inconsistent with cuts");
    for (std::size_t i = 0; i < jb.size(); ++i) {
        auto b = p.block(i);
        if (!jb[i].is_array() || jb[i].size() != b.size())
            throw ValidationError(origin + ": blocks field inconsistent with cuts");
        for (std::size_t j = 0; j < b.size(); ++j)
            if (jb[i][j].get<NodeId>() != b[j])
                throw ValidationError(origin + ": blocks field inconsistent with order/cuts");
    }
    return {std::move(p), mem};
}

std::pair<Partition, MemorySpec> load_plan(const std::filesystem::path& file) {
    return parse_plan(read_text_file(file), file.string());
}

void save_plan(const Partition& partition, const MemorySpec& mem,
               const std::filesystem::path& file) {
    write_text_file(file, serialize_plan(partition, mem));
}

} // namespace swarmplan
