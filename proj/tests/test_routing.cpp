#include "swarmplan/routing.hpp"

#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace swarmplan;
using swarmplan::testing::random_network;

namespace {

NetworkNode capacity_node(NodeId id, double gpu_total, double gpu_used, double load,
                          double uptime) {
    NetworkNode n;
    n.id = id;
    n.gpu_total = gpu_total;
    n.gpu_used = gpu_used;
    n.load = load;
    n.uptime = uptime;
    return n;
}

/// Complete 4-node fixture with distinct capacities and latencies; payload
/// 10 over bandwidth 10 makes each transfer term (1 + L)^gamma.
NetworkState four_node_fixture() {
    std::vector<NetworkNode> nodes{
        capacity_node(0, 5, 1, 2, 0.9),  // C/G = 0.5
        capacity_node(1, 3, 1, 2, 0.5),  // C/G = 1.0
        capacity_node(2, 9, 1, 2, 0.8),  // C/G = 0.25
        capacity_node(3, 2, 1, 3, 0.99), // C/G = 3.0
    };
    std::vector<NetworkLink> links{
        {0, 1, 0.3, 10},  {0, 2, 0.1, 10},  {0, 3, 0.2, 10},
        {1, 2, 0.05, 10}, {1, 3, 0.15, 10}, {2, 3, 0.01, 10},
    };
    return NetworkState(std::move(nodes), std::move(links));
}

NodeMetrics fixture_metrics(Mode mode = Mode::Default) {
    MetricsOptions opts;
    opts.mode = mode;
    opts.default_payload = 10.0;
    return NodeMetrics::from_network(four_node_fixture(), opts);
}

} // namespace

TEST_CASE("network snapshot round-trips") {
    Rng rng(271);
    for (int trial = 0; trial < 10; ++trial) {
        const NetworkState net = random_network(1 + rng.below(8), 0.5, rng);
        const NetworkState back = parse_network(serialize_network(net));
        CHECK(serialize_network(back) == serialize_network(net));
    }
    CHECK_THROWS_AS(parse_network(R"({"nodes": [], "links": [], "oops": 1})"), ParseError);
    CHECK_THROWS_AS(
        parse_network(
            R"({"nodes": [{"id": 0, "gpu_total": 1, "gpu_used": 2, "load": 0, "uptime": 1}],
                "links": []})"),
        ValidationError);
}

TEST_CASE("reliability directions") {
    CHECK(reliability(1.0) == 1.0);
    CHECK(reliability(0.0) == 0.0);
    CHECK(reliability(0.9, Mode::StrictPaper) == doctest::Approx(0.1));
    CHECK_THROWS_AS(reliability(1.5), OutOfRange);
    CHECK_THROWS_AS(reliability(-0.1), OutOfRange);
}

TEST_CASE("node cost combines transfer, load and reliability terms") {
    std::vector<NetworkNode> nodes{capacity_node(0, 4, 0, 1, 1.0),
                                   capacity_node(1, 6, 2, 2, 0.9)};
    std::vector<NetworkLink> links{{0, 1, 0.5, 10}};
    const NetworkState net(std::move(nodes), std::move(links));
    MetricsOptions opts;
    opts.default_payload = 10.0;
    const NodeMetrics metrics = NodeMetrics::from_network(net, opts);

    const NodeId prefix[] = {0};
    const RoutingParams params{1.0, 1.0, 1.0, 0};
    const CostBreakdown c = node_cost_breakdown(metrics, 1, prefix, params);
    CHECK(c.transfer == doctest::Approx(1.5));
    CHECK(c.load == doctest::Approx(0.5));
    CHECK(c.reliability == doctest::Approx(1.0 / 1.9));
    CHECK(c.total == doctest::Approx(10.0 / 10.0 + 0.5 + 2.0 / 4.0 + 1.0 / 1.9));
}

TEST_CASE("empty prefix leaves only load and reliability terms") {
    const NodeMetrics metrics = fixture_metrics();
    const RoutingParams params{1.0, 1.0, 1.0, 0};
    const CostBreakdown c = node_cost_breakdown(metrics, 2, {}, params);
    CHECK(c.transfer == 0.0);
    CHECK(c.total == doctest::Approx(2.0 / 8.0 + 1.0 / 1.8));
}

TEST_CASE("higher latency strictly increases cost") {
    auto cost_with_latency = [](double latency) {
        std::vector<NetworkNode> nodes{capacity_node(0, 4, 0, 1, 1.0),
                                       capacity_node(1, 6, 2, 2, 0.9)};
        std::vector<NetworkLink> links{{0, 1, latency, 10}};
        const NetworkState net(std::move(nodes), std::move(links));
        const NodeMetrics metrics = NodeMetrics::from_network(net, {});
        const NodeId prefix[] = {0};
        return node_cost(metrics, 1, prefix, RoutingParams{1, 1, 1, 0});
    };
    CHECK(cost_with_latency(1.0) > cost_with_latency(0.5));
}

TEST_CASE("candidate inside the prefix is rejected") {
    const NodeMetrics metrics = fixture_metrics();
    const NodeId prefix[] = {1};
    CHECK_THROWS_AS(node_cost(metrics, 1, prefix, RoutingParams{}), ValidationError);
}

TEST_CASE("zero free gpu means infinite cost in default mode") {
    std::vector<NetworkNode> nodes{capacity_node(0, 4, 4, 1, 1.0)};
    const NetworkState net(std::move(nodes), {});
    const NodeMetrics metrics = NodeMetrics::from_network(net, {});
    CHECK(std::isinf(node_cost(metrics, 0, {}, RoutingParams{})));
}

TEST_CASE("select_next prefers the cheaper candidate and breaks ties by id") {
    // candidates 1 and 2 identical except latency to the prefix node
    std::vector<NetworkNode> nodes{capacity_node(0, 4, 0, 1, 1.0),
                                   capacity_node(1, 6, 2, 2, 0.9),
                                   capacity_node(2, 6, 2, 2, 0.9)};
    std::vector<NetworkLink> links{{0, 1, 0.5, 10}, {0, 2, 1.0, 10}};
    const NetworkState net(std::move(nodes), std::move(links));
    MetricsOptions opts;
    opts.default_payload = 10.0;
    const NodeMetrics metrics = NodeMetrics::from_network(net, opts);
    const NodeId prefix[] = {0};
    const NodeId avail[] = {1, 2};
    CHECK(select_next(metrics, prefix, avail, RoutingParams{1, 1, 1, 0}) == 1);

    // identical metrics: lowest id wins
    std::vector<NetworkNode> twins{capacity_node(0, 4, 0, 1, 1.0),
                                   capacity_node(5, 6, 2, 2, 0.9),
                                   capacity_node(7, 6, 2, 2, 0.9)};
    std::vector<NetworkLink> twin_links{{0, 5, 0.5, 10}, {0, 7, 0.5, 10}};
    const NetworkState twin_net(std::move(twins), std::move(twin_links));
    const NodeMetrics twin_metrics = NodeMetrics::from_network(twin_net, opts);
    const NodeId twin_avail[] = {5, 7};
    CHECK(select_next(twin_metrics, prefix, twin_avail, RoutingParams{1, 1, 1, 0}) == 5);

    CHECK_THROWS_AS(select_next(metrics, prefix, {}, RoutingParams{}), NoCandidates);
}

TEST_CASE("a dominated node is never selected") {
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const NetworkState net = random_network(5, 1.0, rng);
        const NodeMetrics metrics = NodeMetrics::from_network(net, {});
        const RoutingParams params{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                   rng.uniform(0.5, 2.0), 0};
        std::vector<NodeId> avail{1, 2, 3, 4};
        const NodeId prefix[] = {0};
        const NodeId chosen = select_next(metrics, prefix, avail, params);
        for (NodeId other : avail)
            CHECK(node_cost(metrics, chosen, prefix, params) <=
                  node_cost(metrics, other, prefix, params));
    }
}

TEST_CASE("form_swarm follows the hand-traced argmin sequence") {
    const NodeMetrics metrics = fixture_metrics();
    const RoutingParams params{1.0, 1.0, 1.0, 0};
    const Swarm swarm = form_swarm(metrics, 3, params);

    // step 1: load + reliability only
    const double base0 = 2.0 / 4.0 + 1.0 / 1.9;
    const double base1 = 2.0 / 2.0 + 1.0 / 1.5;
    const double base2 = 2.0 / 8.0 + 1.0 / 1.8;
    const double base3 = 3.0 / 1.0 + 1.0 / 1.99;
    CHECK(base2 < std::min({base0, base1, base3}));
    // step 2 from node 2: transfer (1 + L(2, x))
    const double step2_0 = (1.0 + 0.1) + base0;
    const double step2_1 = (1.0 + 0.05) + base1;
    const double step2_3 = (1.0 + 0.01) + base3;
    CHECK(step2_0 < std::min(step2_1, step2_3));
    // step 3 from node 0
    const double step3_1 = (1.0 + 0.3) + base1;
    const double step3_3 = (1.0 + 0.2) + base3;
    CHECK(step3_1 < step3_3);

    CHECK(swarm.sequence == std::vector<NodeId>{2, 0, 1});
}

TEST_CASE("form_swarm basics") {
    const NodeMetrics metrics = fixture_metrics();
    const Swarm one = form_swarm(metrics, 1, RoutingParams{1, 1, 1, 0});
    CHECK(one.sequence == std::vector<NodeId>{2}); // cheapest load+reliability

    const Swarm full = form_swarm(metrics, 4, RoutingParams{1, 1, 1, 1});
    CHECK(full.sequence.size() == 4);
    std::vector<NodeId> sorted = full.sequence;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());

    CHECK_THROWS_AS(form_swarm(metrics, 5, RoutingParams{1, 1, 1, 0}), InsufficientNodes);
}

TEST_CASE("strict-paper mode selects differently on a reliability fixture") {
    // node 1: reliable and well-resourced; node 2: unreliable and loaded
    std::vector<NetworkNode> nodes{capacity_node(1, 9, 1, 1, 0.99),
                                   capacity_node(2, 3, 1, 4, 0.01)};
    const NetworkState net(std::move(nodes), {});
    MetricsOptions default_opts, strict_opts;
    strict_opts.mode = Mode::StrictPaper;
    const NodeMetrics dm = NodeMetrics::from_network(net, default_opts);
    const NodeMetrics sm = NodeMetrics::from_network(net, strict_opts);
    const RoutingParams params{1, 1, 1, 0};
    const NodeId avail[] = {1, 2};
    CHECK(select_next(dm, {}, avail, params) == 1);
    CHECK(select_next(sm, {}, avail, params) == 2);
}

TEST_CASE("rebalance replaces a failed position and keeps the rest") {
    const NodeMetrics metrics = fixture_metrics();
    const RoutingParams params{1.0, 1.0, 1.0, 0};
    const Swarm swarm{{2, 0, 1}};
    const Swarm fixed = rebalance(swarm, metrics, params, Trigger::node_failure(0));
    CHECK(fixed.sequence == std::vector<NodeId>{2, 3, 1}); // only spare is 3
}

TEST_CASE("rebalance is a fixed point without violations") {
    const NodeMetrics metrics = fixture_metrics();
    const RoutingParams params{1.0, 1.0, 1.0, 0};
    const Swarm swarm{{2, 0, 1}};
    const Swarm same = rebalance(swarm, metrics, params, Trigger::metric_refresh());
    CHECK(same.sequence == swarm.sequence);
    const Swarm manual = rebalance(swarm, metrics, params, Trigger::manual());
    CHECK(manual.sequence == swarm.sequence);
}

TEST_CASE("rebalance without spares is infeasible") {
    const NodeMetrics metrics = fixture_metrics();
    const Swarm swarm{{2, 0, 1, 3}};
    CHECK_THROWS_AS(rebalance(swarm, metrics, RoutingParams{1, 1, 1, 0},
                              Trigger::node_failure(0)),
                    InsufficientNodes);
}

TEST_CASE("rebalance is idempotent on random networks") {
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const NetworkState net = random_network(6, 1.0, rng);
        const NodeMetrics metrics = NodeMetrics::from_network(net, {});
        const RoutingParams params{1, 1, 1, 1};
        Swarm swarm;
        try {
            swarm = form_swarm(metrics, 4, params);
        } catch (const Error&) {
            continue;
        }
        RebalancePolicy policy;
        policy.min_uptime = 0.2;
        try {
            const Swarm once =
                rebalance(swarm, metrics, params, Trigger::metric_refresh(), {}, policy);
            const Swarm twice =
                rebalance(once, metrics, params, Trigger::metric_refresh(), {}, policy);
            CHECK(twice.sequence == once.sequence);
        } catch (const InsufficientNodes&) {
            // no healthy spare for a degraded position; nothing to iterate
        }
    }
}

TEST_CASE("higher uptime and more free gpu never increase a cost") {
    Rng rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const double uptime = rng.uniform(0.0, 0.9);
        const double used = rng.uniform(0.0, 3.0);
        auto cost_for = [&](double up, double gpu_used) {
            std::vector<NetworkNode> nodes{capacity_node(0, 8, gpu_used, 2, up)};
            const NetworkState net(std::move(nodes), {});
            const NodeMetrics m = NodeMetrics::from_network(net, {});
            return node_cost(m, 0, {}, RoutingParams{1.5, 1.5, 1.5, 0});
        };
        CHECK(cost_for(uptime + 0.1, used) < cost_for(uptime, used));
        CHECK(cost_for(uptime, used) <= cost_for(uptime, used + 0.5));
    }
}

TEST_CASE("eligibility thresholds filter the pool") {
    const NodeMetrics metrics = fixture_metrics();
    EligibilityPolicy policy;
    policy.min_uptime = 0.85; // only nodes 0 (0.9) and 3 (0.99) qualify
    const Swarm swarm = form_swarm(metrics, 2, RoutingParams{1, 1, 1, 0}, policy);
    for (NodeId id : swarm.sequence) CHECK((id == 0 || id == 3));
    CHECK_THROWS_AS(form_swarm(metrics, 3, RoutingParams{1, 1, 1, 0}, policy),
                    InsufficientNodes);
}

TEST_CASE("ph adjustment boosts stable regions more") {
    const NodeMetrics metrics = fixture_metrics();
    PersistenceDiagram diagram;
    diagram.h0 = {{0.0, 1.0}, {0.0, 10.0}, {0.0, kInfDeath}};
    std::unordered_map<NodeId, double> lifetimes{{0, 1.0}, {1, 10.0}, {2, 10.0}, {3, 1.0}};

    const NodeMetrics boosted = ph_adjust_reliability(metrics, diagram, lifetimes, 0.25);
    // short-lived component -> smaller boost
    CHECK(boosted.rel(0) / metrics.rel(0) < boosted.rel(1) / metrics.rel(1));
    CHECK(boosted.rel(1) == doctest::Approx(std::min(1.0, metrics.rel(1) * 1.25)));
    for (NodeId id : metrics.ids()) CHECK(boosted.rel(id) <= 1.0);

    // kappa = 0 changes nothing
    const NodeMetrics untouched = ph_adjust_reliability(metrics, diagram, lifetimes, 0.0);
    for (NodeId id : metrics.ids()) CHECK(untouched.rel(id) == metrics.rel(id));
}

TEST_CASE("uniform lifetimes keep the argmin unchanged") {
    const NodeMetrics metrics = fixture_metrics();
    PersistenceDiagram diagram;
    diagram.h0 = {{0.0, 2.0}, {0.0, kInfDeath}};
    std::unordered_map<NodeId, double> lifetimes{{0, 2.0}, {1, 2.0}, {2, 2.0}, {3, 2.0}};
    const NodeMetrics boosted = ph_adjust_reliability(metrics, diagram, lifetimes, 0.5);
    const RoutingParams params{1, 1, 1, 0};
    const NodeId avail[] = {0, 1, 2, 3};
    CHECK(select_next(metrics, {}, avail, params) == select_next(boosted, {}, avail, params));
}
