#pragma once

#include "drawpath/gtsp.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace drawpath {

struct GaConfig {
    int population_size = 100;
    int elite_count = 3;
    double p_crossover = 0.8;
    double p_mutation = 0.5;
    double key_inherit_p = 0.7; // uniform crossover: key taken from first parent
    double reverse_p = 0.5;     // first parent's tour reversed before crossover
    double shuffle_p = 0.05;    // decimal-index shuffle mutation
    double flip_p = 0.05;       // per-key direction-bit flip mutation
    int tournament_k = 2;
    double thres_base = 0.05; // level-two threshold percentile schedule
    double thres_step = 0.01;
    double thres_cap = 0.10;
    int max_generations = 300;
    int stall_limit = 60;
    uint64_t seed = 0;

    void validate() const;
};

struct Individual {
    Chromosome chromosome;
    double fitness = 0.0;
    bool improved = false; // level-two (LK) applied
};

struct SolveStats {
    std::vector<double> best_fitness_per_generation;
    long long evaluations = 0;
    long long lk_invocations = 0;
    double wall_time_s = 0.0;
};

using Rng = std::mt19937_64;

/// Nearest-start-point construction from home. Ties broken by lowest
/// segment id, then Forward before Reverse.
DrawingPath greedy(const GtspInstance& inst);

/// Best-improvement 2-opt to local optimality. Moves reverse a span of tour
/// positions, flipping the direction of every segment inside; the single
/// flip of one segment is the i == j case.
DrawingPath two_opt(const GtspInstance& inst, const DrawingPath& p);

/// Variable-depth sequential edge exchange (depth limit 5, breadth limit 5)
/// over the segment ordering; after each tentative exchange, directions are
/// re-optimized exactly by a forward DP over the fixed order. The result is
/// also 2-opt-local.
DrawingPath lin_kernighan(const GtspInstance& inst, const DrawingPath& p);

/// Draws k individuals uniformly with replacement, returns the fittest.
const Individual& tournament_select(const std::vector<Individual>& pop, int k, Rng& rng);

Chromosome uniform_crossover(const Chromosome& p1, const Chromosome& p2, const GaConfig& cfg,
                             Rng& rng);

Chromosome mutate(const Chromosome& c, const GaConfig& cfg, Rng& rng);

/// Percentile threshold for applying level-two improvement after c
/// consecutive stalled generations: min(thres_base + thres_step*c, thres_cap).
double improvement_threshold_percentile(const GaConfig& cfg, int stall_count);

/// Two-level local improvement: 2-opt always; LK when the post-2-opt fitness
/// beats the parent at the ceil(v_thres*N)-th ascending rank. The improved
/// path is written back into the chromosome (Lamarckian).
/// parents must be sorted ascending by fitness.
Individual improve(const Individual& ind, const std::vector<Individual>& parents,
                   int stall_count, const GaConfig& cfg, const GtspInstance& inst,
                   bool use_lk = true, long long* lk_invocations = nullptr);

/// Random-key GA with elitism, tournament selection, uniform crossover,
/// mutation, and two-level local improvement. Fully reproducible from
/// cfg.seed regardless of evaluation parallelism.
std::pair<DrawingPath, SolveStats> run_rkga(const GtspInstance& inst, const GaConfig& cfg,
                                            bool use_lk = true);

} // namespace drawpath
