#include "swarmplan/brkga.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace swarmplan;
using swarmplan::testing::chain_graph;
using swarmplan::testing::random_dag;

namespace {

const MemorySpec kRoomy{1e9, 1.0};

BrkgaConfig small_config(std::size_t k, std::uint64_t seed) {
    BrkgaConfig c;
    c.population_size = 20;
    c.generations = 15;
    c.k = k;
    c.rng_seed = seed;
    c.stagnation_limit = 0;
    return c;
}

} // namespace

TEST_CASE("decode on a chain ignores the keys") {
    const CompGraph g = chain_graph({3, 1, 2, 2});
    const DecodedPlan a = decode({{0.9, 0.1, 0.5, 0.2}}, g, 2, kRoomy);
    const DecodedPlan b = decode({{0.1, 0.9, 0.2, 0.5}}, g, 2, kRoomy);
    CHECK(a.bottleneck == 4.0);
    CHECK(a.partition.order == b.partition.order);
    CHECK(a.partition.cuts == b.partition.cuts);
}

TEST_CASE("decode follows keys on the diamond") {
    CompGraph g({{0, 1, 0, 0}, {1, 1, 0, 0}, {2, 1, 0, 0}, {3, 1, 0, 0}},
                {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    const DecodedPlan plan = decode({{0.5, 0.2, 0.9, 0.5}}, g, 2, kRoomy);
    CHECK(plan.partition.order == std::vector<NodeId>{0, 2, 1, 3});
}

TEST_CASE("equal keys fall back to ascending ids") {
    CompGraph g({{0, 1, 0, 0}, {1, 1, 0, 0}, {2, 1, 0, 0}, {3, 1, 0, 0}},
                {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    const DecodedPlan plan = decode({{0.5, 0.5, 0.5, 0.5}}, g, 1, kRoomy);
    CHECK(plan.partition.order == std::vector<NodeId>{0, 1, 2, 3});
}

TEST_CASE("decode rejects malformed chromosomes") {
    const CompGraph g = chain_graph({1, 1});
    CHECK_THROWS_AS(decode({{0.5}}, g, 1, kRoomy), LengthMismatch);
    CHECK_THROWS_AS(decode({{0.5, 1.5}}, g, 1, kRoomy), ValidationError);
}

TEST_CASE("crossover blends and respects boundaries") {
    const Chromosome p1{{0.2, 0.8}}, p2{{0.6, 0.0}};
    CHECK(crossover(p1, p2, 1.0).keys == p1.keys);
    CHECK(crossover(p1, p2, 0.0).keys == p2.keys);
    const Chromosome mid = crossover(p1, p2, 0.5);
    CHECK(mid.keys[0] == doctest::Approx(0.4));
    CHECK(mid.keys[1] == doctest::Approx(0.4));
    CHECK_THROWS_AS(crossover(p1, Chromosome{{0.1}}, 0.5), LengthMismatch);
}

TEST_CASE("crossover output stays within parental bounds") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Chromosome a{{rng.uniform01(), rng.uniform01(), rng.uniform01()}};
        Chromosome b{{rng.uniform01(), rng.uniform01(), rng.uniform01()}};
        const Chromosome child = crossover(a, b, rng.uniform01());
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(child.keys[i] >= std::min(a.keys[i], b.keys[i]));
            CHECK(child.keys[i] <= std::max(a.keys[i], b.keys[i]));
            CHECK(child.keys[i] >= 0.0);
            CHECK(child.keys[i] <= 1.0);
        }
    }
}

TEST_CASE("evolve on a chain hits the dp optimum immediately") {
    const CompGraph g = chain_graph({3, 1, 2, 2});
    const EvolveResult r = evolve(g, kRoomy, small_config(2, 9));
    CHECK(r.history.front() == 4.0);
    CHECK(r.best.bottleneck == 4.0);
}

TEST_CASE("evolve history is monotone non-increasing") {
    Rng rng(13);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CompGraph g = random_dag(8, 0.35, rng);
        const EvolveResult r = evolve(g, kRoomy, small_config(3, seed));
        for (std::size_t i = 1; i < r.history.size(); ++i)
            CHECK(r.history[i] <= r.history[i - 1]);
    }
}

TEST_CASE("evolve is reproducible for a fixed seed") {
    Rng rng(17);
    const CompGraph g = random_dag(7, 0.4, rng);
    const EvolveResult a = evolve(g, kRoomy, small_config(3, 42));
    const EvolveResult b = evolve(g, kRoomy, small_config(3, 42));
    CHECK(a.history == b.history);
    CHECK(a.best_keys.keys == b.best_keys.keys);
    CHECK(a.best.partition.order == b.best.partition.order);
    CHECK(a.best.partition.cuts == b.best.partition.cuts);
}

TEST_CASE("generations=0 returns the best of the initial population") {
    Rng rng(19);
    const CompGraph g = random_dag(6, 0.4, rng);
    BrkgaConfig c = small_config(2, 5);
    c.generations = 0;
    const EvolveResult r = evolve(g, kRoomy, c);
    CHECK(r.history.size() == 1);
    CHECK(r.best.bottleneck == r.history.front());
}

TEST_CASE("decode never beats the exhaustive optimum over all orders") {
    Rng rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 3 + rng.below(5); // n <= 7
        const CompGraph g = random_dag(n, 0.35, rng);
        const MemorySpec mem{rng.uniform(0.0, 20.0), rng.uniform(0.5, 3.0)};
        const std::size_t k = 1 + rng.below(n);
        const double global = testing::global_optimum_over_orders(g, k, mem);
        for (int probe = 0; probe < 10; ++probe) {
            Chromosome c;
            for (std::size_t i = 0; i < n; ++i) c.keys.push_back(rng.uniform01());
            CHECK(decode(c, g, k, mem).bottleneck >= global);
        }
    }
}

TEST_CASE("per-gene crossover variant works and is reproducible") {
    Rng rng(29);
    const CompGraph g = random_dag(6, 0.4, rng);
    BrkgaConfig c = small_config(2, 77);
    c.per_gene_crossover = true;
    const EvolveResult a = evolve(g, kRoomy, c);
    const EvolveResult b = evolve(g, kRoomy, c);
    CHECK(a.history == b.history);
    for (std::size_t i = 1; i < a.history.size(); ++i)
        CHECK(a.history[i] <= a.history[i - 1]);
}

TEST_CASE("config validation") {
    const CompGraph g = chain_graph({1, 1});
    BrkgaConfig c;
    c.k = 1;
    c.elite_fraction = 0.6;
    c.mutant_fraction = 0.5;
    CHECK_THROWS_AS(validate_config(c, g.size()), ValidationError);
    c = BrkgaConfig{};
    c.k = 5;
    CHECK_THROWS_AS(validate_config(c, g.size()), InvalidBudget);
}

TEST_CASE("stagnation stop cuts the run short") {
    const CompGraph g = chain_graph({3, 1, 2, 2}); // single order: immediate stagnation
    BrkgaConfig c = small_config(2, 3);
    c.generations = 100;
    c.stagnation_limit = 4;
    const EvolveResult r = evolve(g, kRoomy, c);
    CHECK(r.history.size() == 5); // initial + 4 stagnant generations
}
