#include "swarmplan/partition.hpp"

#include "support/generators.hpp"

#include <doctest.h>

using namespace swarmplan;
using swarmplan::testing::chain_graph;
using swarmplan::testing::random_dag;

namespace {

const MemorySpec kRoomy{1e9, 1.0};

std::vector<NodeId> segment(const TopoOrder& order, std::size_t l, std::size_t r) {
    return std::vector<NodeId>(order.order.begin() + l - 1, order.order.begin() + r);
}

} // namespace

TEST_CASE("io cost of a single edge") {
    CompGraph g({{0, 0, 0, 10}, {1, 0, 0, 0}}, {{0, 1}});
    const NodeId s[] = {0}, t[] = {1};
    CHECK(io_cost(g, s, t, 5.0) == 2.0);
}

TEST_CASE("io cost with no crossing edges is zero") {
    CompGraph g({{0, 0, 0, 10}, {1, 0, 0, 10}}, {});
    const NodeId s[] = {0}, t[] = {1};
    CHECK(io_cost(g, s, t, 5.0) == 0.0);
}

TEST_CASE("a producer feeding two consumers is counted once") {
    CompGraph g({{0, 0, 0, 6}, {1, 0, 0, 0}, {2, 0, 0, 0}}, {{0, 1}, {0, 2}});
    const NodeId s[] = {0}, t[] = {1, 2};
    CHECK(io_cost(g, s, t, 3.0) == 2.0);
}

TEST_CASE("io cost requires disjoint sets") {
    CompGraph g({{0, 0, 0, 1}, {1, 0, 0, 1}}, {{0, 1}});
    const NodeId s[] = {0, 1}, t[] = {1};
    CHECK_THROWS_AS(io_cost(g, s, t, 1.0), ValidationError);
}

TEST_CASE("overflow cost modes") {
    // single node, sizeout 4 -> peak 4 under the single-op liveness model
    auto graph_with_param = [](double param) {
        return CompGraph({{0, 0, param, 4}}, {});
    };
    const NodeId block[] = {0};
    const MemorySpec mem{16.0, 2.0};

    CHECK(overflow_cost(graph_with_param(8), block, mem) == 0.0);
    CHECK(overflow_cost(graph_with_param(20), block, mem) == 4.0); // (20+4-16)/2
    CostOptions strict;
    strict.overflow_mode = OverflowMode::StrictPaper;
    CHECK(overflow_cost(graph_with_param(20), block, mem, strict) == 10.0); // (20+4-16)+4/2
}

TEST_CASE("clamped overflow is zero exactly when the block fits") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const double param = rng.uniform(0.0, 30.0);
        const double out = rng.uniform(0.0, 10.0);
        const MemorySpec mem{rng.uniform(0.0, 40.0), rng.uniform(0.5, 4.0)};
        CompGraph g({{0, 0, param, out}}, {});
        const NodeId block[] = {0};
        const double v = overflow_cost(g, block, mem);
        CHECK(v >= 0.0);
        CHECK((v == 0.0) == (param + out <= mem.capacity));
    }
}

TEST_CASE("block cost of an isolated node is its work") {
    CompGraph g({{0, 7, 0, 0}}, {});
    const NodeId block[] = {0};
    CHECK(block_cost(g, block, kRoomy) == 7.0);
}

TEST_CASE("block cost of a chain middle node") {
    CompGraph g({{0, 0, 0, 4}, {1, 1, 0, 6}, {2, 0, 0, 0}}, {{0, 1}, {1, 2}});
    const NodeId block[] = {1};
    const MemorySpec mem{1e9, 2.0};
    CHECK(block_cost(g, block, mem) == doctest::Approx(6.0)); // 4/2 + 1 + 6/2
    const BlockCostBreakdown b = block_cost_breakdown(g, block, mem);
    CHECK(b.io_in == 2.0);
    CHECK(b.work == 1.0);
    CHECK(b.io_out == 3.0);
    CHECK(b.overflow == 0.0);
}

TEST_CASE("whole graph block has zero io terms") {
    Rng rng(5);
    const CompGraph g = random_dag(7, 0.4, rng);
    const TopoOrder order = kahn_topo_sort(g);
    const BlockCostBreakdown b = block_cost_breakdown(g, order.order, kRoomy);
    CHECK(b.io_in == 0.0);
    CHECK(b.io_out == 0.0);
    double work = 0.0;
    for (const OpNode& n : g.nodes()) work += n.work;
    CHECK(b.work == doctest::Approx(work));
}

TEST_CASE("bottleneck of the works-[3,1,2,2] chain") {
    const CompGraph g = chain_graph({3, 1, 2, 2});
    Partition cut2{{0, 1, 2, 3}, {2}, 0.0};
    CHECK(bottleneck_cost(g, cut2, kRoomy) == 4.0);
    Partition cut1{{0, 1, 2, 3}, {1}, 0.0};
    CHECK(bottleneck_cost(g, cut1, kRoomy) == 5.0);
    Partition whole{{0, 1, 2, 3}, {}, 0.0};
    CHECK(bottleneck_cost(g, whole, kRoomy) == 8.0);
}

TEST_CASE("segment oracle matches from-scratch block cost exactly") {
    Rng rng(21);
    const CompGraph g = random_dag(6, 0.45, rng, 10.0);
    const TopoOrder order = kahn_topo_sort(g);
    const MemorySpec mem{12.0, 3.0};
    const SegmentCostOracle oracle = build_segment_cost(g, order, mem);
    for (std::size_t l = 1; l <= g.size(); ++l)
        for (std::size_t r = l; r <= g.size(); ++r) {
            const double direct = block_cost(g, segment(order, l, r), mem);
            CHECK(oracle.query(l, r) == direct); // bitwise equality
        }
}

TEST_CASE("oracle full segment and singletons") {
    Rng rng(22);
    const CompGraph g = random_dag(6, 0.4, rng);
    const TopoOrder order = kahn_topo_sort(g);
    const SegmentCostOracle oracle = build_segment_cost(g, order, kRoomy);
    CHECK(oracle.query(1, g.size()) == block_cost(g, order.order, kRoomy));
    for (std::size_t i = 1; i <= g.size(); ++i)
        CHECK(oracle.query(i, i) == block_cost(g, segment(order, i, i), kRoomy));
}

TEST_CASE("dp on the works-[3,1,2,2] chain") {
    const CompGraph g = chain_graph({3, 1, 2, 2});
    const TopoOrder order = kahn_topo_sort(g);
    const SegmentCostOracle oracle = build_segment_cost(g, order, kRoomy);

    const SliceResult k2 = slice_graph_dp(oracle, 4, 2);
    CHECK(k2.bottleneck == 4.0);
    CHECK(k2.cuts == std::vector<std::size_t>{2});

    const SliceResult k1 = slice_graph_dp(oracle, 4, 1);
    CHECK(k1.bottleneck == oracle.query(1, 4));
    CHECK(k1.cuts.empty());

    const SliceResult k4 = slice_graph_dp(oracle, 4, 4);
    CHECK(k4.bottleneck == 3.0); // singletons are optimal with zero io
}

TEST_CASE("invalid budgets are rejected") {
    const CompGraph g = chain_graph({1, 1});
    const TopoOrder order = kahn_topo_sort(g);
    const SegmentCostOracle oracle = build_segment_cost(g, order, kRoomy);
    CHECK_THROWS_AS(slice_graph_dp(oracle, 2, 0), InvalidBudget);
    CHECK_THROWS_AS(slice_graph_dp(oracle, 2, 3), InvalidBudget);
    CHECK_THROWS_AS(brute_force_mtpp(g, order, 0, kRoomy), InvalidBudget);
}

TEST_CASE("brute force handles edge budgets") {
    const CompGraph g = chain_graph({5});
    const TopoOrder order = kahn_topo_sort(g);
    const SliceResult r = brute_force_mtpp(g, order, 1, kRoomy);
    CHECK(r.bottleneck == 5.0);
    CHECK(r.cuts.empty());

    const CompGraph g2 = chain_graph({3, 1, 2, 2});
    const TopoOrder order2 = kahn_topo_sort(g2);
    CHECK(brute_force_mtpp(g2, order2, 10, kRoomy).bottleneck ==
          brute_force_mtpp(g2, order2, 4, kRoomy).bottleneck);
}

TEST_CASE("brute force size limit") {
    Rng rng(3);
    const CompGraph g = random_dag(15, 0.2, rng);
    CHECK_THROWS_AS(brute_force_mtpp(g, kahn_topo_sort(g), 2, kRoomy), TooLarge);
}

TEST_CASE("dp equals brute force on random instances, cuts included") {
    Rng rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(9);
        const CompGraph g = random_dag(n, 0.35, rng);
        const TopoOrder order = kahn_topo_sort(g);
        const MemorySpec mem{rng.uniform(0.0, 30.0), rng.uniform(0.5, 4.0)};
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(4, n));
        const SegmentCostOracle oracle = build_segment_cost(g, order, mem);
        const SliceResult dp = slice_graph_dp(oracle, n, k);
        const SliceResult bf = brute_force_mtpp(g, order, k, mem);
        CHECK(dp.bottleneck == bf.bottleneck); // exact
        CHECK(dp.cuts == bf.cuts);             // both lexicographically smallest
    }
}

TEST_CASE("dp bottleneck is non-increasing in k") {
    Rng rng(77);
    const CompGraph g = random_dag(9, 0.3, rng);
    const TopoOrder order = kahn_topo_sort(g);
    const MemorySpec mem{10.0, 2.0};
    const SegmentCostOracle oracle = build_segment_cost(g, order, mem);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= g.size(); ++k) {
        const double cur = slice_graph_dp(oracle, g.size(), k).bottleneck;
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("contiguous blocks induce an acyclic quotient graph") {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + rng.below(8);
        const CompGraph g = random_dag(n, 0.4, rng);
        const TopoOrder order = kahn_topo_sort(g);
        const std::size_t k = 2 + rng.below(3);
        const SegmentCostOracle oracle = build_segment_cost(g, order, kRoomy);
        const SliceResult sliced = slice_graph_dp(oracle, n, std::min(k, n));
        Partition p{order.order, sliced.cuts, sliced.bottleneck};

        // quotient graph: one node per block, edges between distinct blocks
        std::unordered_map<NodeId, NodeId> block_of;
        for (std::size_t b = 0; b < p.block_count(); ++b)
            for (NodeId id : p.block(b)) block_of[id] = static_cast<NodeId>(b);
        std::vector<OpNode> qnodes;
        for (std::size_t b = 0; b < p.block_count(); ++b)
            qnodes.push_back({static_cast<NodeId>(b), 0, 0, 0});
        EdgeList qedges;
        for (const auto& [u, v] : g.edges())
            if (block_of[u] != block_of[v]) qedges.emplace_back(block_of[u], block_of[v]);
        CHECK_NOTHROW(CompGraph(qnodes, qedges)); // validation includes cycle detection
    }
}

TEST_CASE("heuristic adjustment hook is exercised") {
    const CompGraph g = chain_graph({3, 1, 2, 2});
    const TopoOrder order = kahn_topo_sort(g);
    const SegmentCostOracle oracle = build_segment_cost(g, order, kRoomy);
    SliceOptions opts;
    opts.heuristic_adjustment = make_imbalance_penalty(0.5, 4, 2);
    const SliceResult adjusted = slice_graph_dp(oracle, 4, 2, opts);
    // balanced split [2] has zero imbalance, so it stays optimal
    CHECK(adjusted.cuts == std::vector<std::size_t>{2});
    CHECK(adjusted.bottleneck == 4.0);
}

TEST_CASE("plan document round-trips") {
    const CompGraph g = chain_graph({3, 1, 2, 2}, 1.0, 2.0);
    const TopoOrder order = kahn_topo_sort(g);
    const MemorySpec mem{8.0, 2.0};
    const SegmentCostOracle oracle = build_segment_cost(g, order, mem);
    const SliceResult sliced = slice_graph_dp(oracle, 4, 2);
    Partition p{order.order, sliced.cuts, sliced.bottleneck};

    const std::string text = serialize_plan(p, mem);
    auto [loaded, loaded_mem] = parse_plan(text);
    CHECK(loaded.order == p.order);
    CHECK(loaded.cuts == p.cuts);
    CHECK(loaded.bottleneck == p.bottleneck);
    CHECK(loaded_mem.capacity == mem.capacity);
    CHECK(loaded_mem.bandwidth == mem.bandwidth);
    CHECK(serialize_plan(loaded, loaded_mem) == text);
}

TEST_CASE("plan documents with inconsistent fields are rejected") {
    CHECK_THROWS_AS(parse_plan(R"({"order": [0, 1], "cuts": [1], "blocks": [[0, 1]],
                                   "bottleneck": 1, "mem": {"M": 0, "B": 1}})"),
                    ValidationError); // blocks disagree with cuts
    CHECK_THROWS_AS(parse_plan(R"({"order": [0, 1], "cuts": [5], "blocks": [[0], [1]],
                                   "bottleneck": 1, "mem": {"M": 0, "B": 1}})"),
                    ValidationError); // cut beyond the order
    CHECK_THROWS_AS(parse_plan(R"({"order": [0, 1], "cuts": [], "blocks": [[0, 1]],
                                   "bottleneck": 1, "mem": {"M": 0, "B": 0}})"),
                    ValidationError); // bandwidth must be positive
    CHECK_THROWS_AS(parse_plan(R"({"order": [], "cuts": [], "blocks": [[]],
                                   "bottleneck": 1, "mem": {"M": 0, "B": 1}, "extra": 2})"),
                    ParseError); // unknown field
}
