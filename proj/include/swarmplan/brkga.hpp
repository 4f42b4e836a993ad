#pragma once

#include "swarmplan/partition.hpp"

#include <cstdint>
#include <vector>

namespace swarmplan {

/// Random-key genotype: one key in [0, 1] per graph node, aligned with the
/// sorted-by-id node order. Keys act as Kahn priorities when decoding.
struct Chromosome {
    std::vector<double> keys;
};

struct BrkgaConfig {
    std::size_t population_size = 100;
    double elite_fraction = 0.2;
    double mutant_fraction = 0.15;
    /// Blend weight on the elite parent: child = alpha*elite + (1-alpha)*other.
    double crossover_alpha = 0.7;
    std::size_t generations = 100;
    std::uint64_t rng_seed = 1;
    std::size_t k = 1; // block budget passed to the slicing DP

    /// Classic per-gene biased coin instead of the blend rule: each gene is
    /// copied from the elite parent with probability elite_inherit_prob.
    bool per_gene_crossover = false;
    double elite_inherit_prob = 0.7;

    /// Stop after this many generations without improvement (0 disables).
    std::size_t stagnation_limit = 20;
};

void validate_config(const BrkgaConfig& config, std::size_t node_count);

struct DecodedPlan {
    Partition partition;
    double bottleneck = 0.0;
};

/// keys -> Kahn priorities -> topological order -> slicing DP.
DecodedPlan decode(const Chromosome& chromosome, const CompGraph& graph, std::size_t k,
                   const MemorySpec& mem, const CostOptions& opts = {});

/// Element-wise blend alpha*parent1 + (1-alpha)*parent2; stays in [0,1]^n.
Chromosome crossover(const Chromosome& parent1, const Chromosome& parent2, double alpha);

struct EvolveResult {
    DecodedPlan best;
    Chromosome best_keys;
    std::vector<double> history; // best-so-far fitness, entry per evaluated generation
};

/// Elitist generational loop over priority vectors. Per-individual RNG
/// substreams are derived from (seed, generation, slot), so results do not
/// depend on evaluation order.
EvolveResult evolve(const CompGraph& graph, const MemorySpec& mem, const BrkgaConfig& config,
                    const CostOptions& opts = {});

} // namespace swarmplan
