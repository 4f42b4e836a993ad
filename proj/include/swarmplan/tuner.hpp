#pragma once

#include "swarmplan/routing.hpp"
#include "swarmplan/rng.hpp"

#include <cstdint>
#include <vector>

namespace swarmplan {

struct ParamBounds {
    double lo = 0.1;
    double hi = 4.0;
};

/// Candidate routing exponent set (gamma, beta, alpha).
struct ParamTuple {
    double gamma = 1.0;
    double beta = 1.0;
    double alpha_rel = 1.0;
};

struct TunerConfig {
    std::size_t population_size = 30;
    std::size_t generations = 40;
    double mutation_rate = 0.3;
    double mutation_sigma = 0.2;
    std::uint64_t rng_seed = 1;
    ParamBounds bounds;
};

void validate_config(const TunerConfig& config);

/// Total routing cost F of the swarm formed under `params`: per-position
/// transfer terms against the full prefix plus each node's load and
/// reliability terms. Formation uses a full-prefix window for consistency
/// with the summation.
double total_cost(const ParamTuple& params, const NodeMetrics& metrics, std::size_t p,
                  const EligibilityPolicy& eligibility = {});

/// 1 / (1 + F): monotone decreasing in cost, 1 at zero cost.
double fitness(double total_cost);

/// Index drawn with probability fitness_i / sum(fitness).
std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng);

/// Component-wise eta * parent1 + (1 - eta) * parent2; convex, so children
/// stay inside the bounds box.
ParamTuple blend_crossover(const ParamTuple& parent1, const ParamTuple& parent2, double eta);

struct TuneGeneration {
    double best_cost = 0.0;
    ParamTuple best;
};

struct TuneResult {
    ParamTuple best;
    double best_cost = 0.0;
    std::vector<TuneGeneration> history; // best-so-far per evaluated generation
};

/// GA loop: random init in the bounds box, roulette parents, blend
/// crossover with a fresh eta per child, per-component Gaussian mutation
/// clamped to bounds, elitism of one.
TuneResult tune(const NodeMetrics& metrics, std::size_t p, const TunerConfig& config,
                const EligibilityPolicy& eligibility = {});

} // namespace swarmplan
