#include "swarmplan/tuner.hpp"

#include <algorithm>
#include <cmath>

namespace swarmplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_to(double v, const ParamBounds& b) { return std::min(b.hi, std::max(b.lo, v)); }

ParamTuple random_tuple(const ParamBounds& b, Rng& rng) {
    return {rng.uniform(b.lo, b.hi), rng.uniform(b.lo, b.hi), rng.uniform(b.lo, b.hi)};
}

} // namespace

void validate_config(const TunerConfig& config) {
    if (config.population_size < 2)
        throw ValidationError("tuner: population_size must be at least 2");
    if (config.mutation_rate < 0.0 || config.mutation_rate > 1.0)
        throw ValidationError("tuner: mutation_rate must lie in [0, 1]");
    if (!(config.mutation_sigma >= 0.0))
        throw ValidationError("tuner: mutation_sigma must be non-negative");
    if (!(config.bounds.lo > 0.0) || !(config.bounds.hi >= config.bounds.lo))
        throw ValidationError("tuner: bounds must satisfy 0 < lo <= hi");
}

double total_cost(const ParamTuple& params, const NodeMetrics& metrics, std::size_t p,
                  const EligibilityPolicy& eligibility) {
    RoutingParams rp{params.gamma, params.beta, params.alpha_rel,
                     p == 0 ? 0 : p - 1 /* full prefix */};
    const Swarm swarm = form_swarm(metrics, p, rp, eligibility);
    double total = 0.0;
    for (std::size_t i = 0; i < swarm.sequence.size(); ++i) {
        const std::span<const NodeId> prefix(swarm.sequence.data(), i);
        total += node_cost(metrics, swarm.sequence[i], prefix, rp);
    }
    return total;
}

double fitness(double total_cost) {
    if (total_cost < 0.0) throw OutOfRange("fitness requires a non-negative cost");
    return 1.0 / (1.0 + total_cost);
}

std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng) {
    double total = 0.0;
    for (double f : fitnesses) {
        if (!(f >= 0.0)) throw ValidationError("fitness values must be non-negative");
        total += f;
    }
    if (!(total > 0.0)) throw AllZeroFitness("population has zero total fitness");
    const double target = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < fitnesses.size(); ++i) {
        acc += fitnesses[i];
        if (target < acc) return i;
    }
    return fitnesses.size() - 1;
}

ParamTuple blend_crossover(const ParamTuple& parent1, const ParamTuple& parent2, double eta) {
    if (eta < 0.0 || eta > 1.0) throw OutOfRange("eta must lie in [0, 1]");
    auto mix = [eta](double a, double b) { return eta * a + (1.0 - eta) * b; };
    return {mix(parent1.gamma, parent2.gamma), mix(parent1.beta, parent2.beta),
            mix(parent1.alpha_rel, parent2.alpha_rel)};
}

TuneResult tune(const NodeMetrics& metrics, std::size_t p, const TunerConfig& config,
                const EligibilityPolicy& eligibility) {
    validate_config(config);
    const std::size_t pop_size = config.population_size;

    struct Candidate {
        ParamTuple params;
        double cost = kInf;
    };
    auto evaluate = [&](Candidate& c) { c.cost = total_cost(c.params, metrics, p, eligibility); };
    auto by_cost = [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; };

    std::vector<Candidate> pop(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        Rng rng(mix_seed({config.rng_seed, 0, i}));
        pop[i].params = random_tuple(config.bounds, rng);
        evaluate(pop[i]);
    }
    std::stable_sort(pop.begin(), pop.end(), by_cost);

    TuneResult result;
    result.best = pop.front().params;
    result.best_cost = pop.front().cost;
    result.history.push_back({result.best_cost, result.best});

    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        std::vector<double> fit(pop_size);
        for (std::size_t i = 0; i < pop_size; ++i) fit[i] = fitness(pop[i].cost);

        std::vector<Candidate> next(pop_size);
        next[0] = pop.front(); // elitism of one
        for (std::size_t i = 1; i < pop_size; ++i) {
            Rng rng(mix_seed({config.rng_seed, gen, i}));
            const std::size_t a = roulette_select(fit, rng);
            const std::size_t b = roulette_select(fit, rng);
            const double eta = rng.uniform01();
            ParamTuple child = blend_crossover(pop[a].params, pop[b].params, eta);
            auto mutate = [&](double v) {
                if (rng.uniform01() < config.mutation_rate)
                    v = clamp_to(v + rng.gaussian(0.0, config.mutation_sigma), config.bounds);
                return v;
            };
            child.gamma = mutate(child.gamma);
            child.beta = mutate(child.beta);
            child.alpha_rel = mutate(child.alpha_rel);
            next[i].params = child;
            evaluate(next[i]);
        }
        std::stable_sort(next.begin(), next.end(), by_cost);
        pop = std::move(next);

        if (pop.front().cost < result.best_cost) {
            result.best_cost = pop.front().cost;
            result.best = pop.front().params;
        }
        result.history.push_back({result.best_cost, result.best});
    }
    return result;
}

} // namespace swarmplan
