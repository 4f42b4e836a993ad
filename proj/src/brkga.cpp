#include "swarmplan/brkga.hpp"

#include "swarmplan/rng.hpp"

#include <algorithm>
#include <cmath>

namespace swarmplan {

namespace {

struct Individual {
    Chromosome chrom;
    double fitness = 0.0;
};

Chromosome random_keys(std::size_t n, Rng& rng) {
    Chromosome c;
    c.keys.resize(n);
    for (double& k : c.keys) k = rng.uniform01();
    return c;
}

/// Roulette over 1/(1+fitness) within [begin, end) of a fitness-sorted
/// population; lower fitness gets more mass.
std::size_t roulette_pick(const std::vector<Individual>& pop, std::size_t begin,
                          std::size_t end, Rng& rng) {
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) total += 1.0 / (1.0 + pop[i].fitness);
    const double target = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        acc += 1.0 / (1.0 + pop[i].fitness);
        if (target < acc) return i;
    }
    return end - 1;
}

} // namespace

void validate_config(const BrkgaConfig& config, std::size_t node_count) {
    if (node_count == 0) throw ValidationError("brkga: empty graph");
    if (config.population_size < 2)
        throw ValidationError("brkga: population_size must be at least 2");
    if (config.elite_fraction <= 0.0 || config.elite_fraction >= 1.0 ||
        config.mutant_fraction <= 0.0 || config.mutant_fraction >= 1.0)
        throw ValidationError("brkga: elite and mutant fractions must lie in (0, 1)");
    if (config.elite_fraction + config.mutant_fraction >= 1.0)
        throw ValidationError("brkga: elite_fraction + mutant_fraction must be below 1");
    if (config.crossover_alpha < 0.0 || config.crossover_alpha > 1.0)
        throw ValidationError("brkga: crossover_alpha must lie in [0, 1]");
    if (config.k < 1 || config.k > node_count)
        throw InvalidBudget("brkga: block budget k outside [1, n]");
}

DecodedPlan decode(const Chromosome& chromosome, const CompGraph& graph, std::size_t k,
                   const MemorySpec& mem, const CostOptions& opts) {
    if (chromosome.keys.size() != graph.size())
        throw LengthMismatch("chromosome has " + std::to_string(chromosome.keys.size()) +
                             " keys for " + std::to_string(graph.size()) + " nodes");
    for (double key : chromosome.keys)
        if (!(key >= 0.0 && key <= 1.0))
            throw ValidationError("chromosome keys must lie in [0, 1]");

    const TopoOrder order = kahn_topo_sort(graph, chromosome.keys);
    const SegmentCostOracle oracle = build_segment_cost(graph, order, mem, opts);
    const SliceResult sliced = slice_graph_dp(oracle, graph.size(), k);

    DecodedPlan plan;
    plan.partition.order = order.order;
    plan.partition.cuts = sliced.cuts;
    plan.partition.bottleneck = sliced.bottleneck;
    plan.bottleneck = sliced.bottleneck;
    return plan;
}

Chromosome crossover(const Chromosome& parent1, const Chromosome& parent2, double alpha) {
    if (parent1.keys.size() != parent2.keys.size())
        throw LengthMismatch("crossover parents have different key counts");
    if (alpha < 0.0 || alpha > 1.0) throw OutOfRange("crossover alpha must lie in [0, 1]");
    Chromosome child;
    child.keys.resize(parent1.keys.size());
    for (std::size_t i = 0; i < child.keys.size(); ++i)
        child.keys[i] = alpha * parent1.keys[i] + (1.0 - alpha) * parent2.keys[i];
    return child;
}

EvolveResult evolve(const CompGraph& graph, const MemorySpec& mem, const BrkgaConfig& config,
                    const CostOptions& opts) {
    validate_config(config, graph.size());
    const std::size_t n = graph.size();
    const std::size_t pop_size = config.population_size;
    const std::size_t n_elite = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(config.elite_fraction * pop_size)));
    const std::size_t n_mutant =
        static_cast<std::size_t>(std::floor(config.mutant_fraction * pop_size));

    auto evaluate = [&](Individual& ind) {
        ind.fitness = decode(ind.chrom, graph, config.k, mem, opts).bottleneck;
    };
    auto by_fitness = [](const Individual& a, const Individual& b) {
        return a.fitness < b.fitness;
    };

    std::vector<Individual> pop(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        Rng rng(mix_seed({config.rng_seed, 0, i}));
        pop[i].chrom = random_keys(n, rng);
        evaluate(pop[i]);
    }
    std::stable_sort(pop.begin(), pop.end(), by_fitness);

    EvolveResult result;
    result.best_keys = pop.front().chrom;
    double best_fitness = pop.front().fitness;
    result.history.push_back(best_fitness);

    std::size_t stagnant = 0;
    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        std::vector<Individual> next(pop_size);
        for (std::size_t i = 0; i < n_elite; ++i) next[i] = pop[i];
        for (std::size_t i = n_elite; i < pop_size; ++i) {
            Rng rng(mix_seed({config.rng_seed, gen, i}));
            Individual& child = next[i];
            if (i >= pop_size - n_mutant) {
                child.chrom = random_keys(n, rng);
            } else {
                const std::size_t elite = roulette_pick(pop, 0, n_elite, rng);
                const std::size_t other = roulette_pick(pop, n_elite, pop_size, rng);
                if (config.per_gene_crossover) {
                    child.chrom.keys.resize(n);
                    for (std::size_t g = 0; g < n; ++g)
                        child.chrom.keys[g] = rng.uniform01() < config.elite_inherit_prob
                                                  ? pop[elite].chrom.keys[g]
                                                  : pop[other].chrom.keys[g];
                } else {
                    child.chrom = crossover(pop[elite].chrom, pop[other].chrom,
                                            config.crossover_alpha);
                }
            }
            evaluate(child);
        }
        std::stable_sort(next.begin(), next.end(), by_fitness);
        pop = std::move(next);

        if (pop.front().fitness < best_fitness) {
            best_fitness = pop.front().fitness;
            result.best_keys = pop.front().chrom;
            stagnant = 0;
        } else {
            ++stagnant;
        }
        result.history.push_back(best_fitness);
        if (config.stagnation_limit > 0 && stagnant >= config.stagnation_limit) break;
    }

    result.best = decode(result.best_keys, graph, config.k, mem, opts);
    return result;
}

} // namespace swarmplan
