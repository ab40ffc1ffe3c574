#pragma once

#include "arcov/ar.hpp"
#include "arcov/target.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arcov {

/// Genetic-algorithm settings for the lag-selection search. The constraint
/// parameter delta bounds |l_i - j_i| (delta = 0 forces l = j).
struct GAConfig {
    int population_size = 200;
    int generations = 300;
    double crossover_rate = 0.8;  ///< per-pair uniform crossover probability
    double mutation_rate = 0.1;   ///< per-gene jitter probability
    int elitism_count = 2;
    std::uint64_t rng_seed = 0;
    int delta = 0;                 ///< half-width of the l-around-j band
    int max_lag = 64;              ///< upper bound for j_N and l_N in the search
    int mse_max_lag = 41;          ///< M in the MSE fitness criterion
    int tournament_size = 3;

    void validate() const;
};

/// One candidate lag pair. Fitness is the MSE of the fitted model, or
/// unset before evaluation (failed fits evaluate to +infinity).
struct Chromosome {
    std::vector<int> j;
    std::vector<int> l;
    std::optional<double> fitness;
};

/// Yule-Walker baseline: j = l = [1..N].
LagSelection baseline_yw(int n_terms);

/// Krenk baseline: j = l = [1, 2, 4, ..., 2^(N-1)].
LagSelection baseline_krenk(int n_terms);

/// Enforce the three search constraints in place: strictly increasing
/// positive j and l bounded by max_lag, and l_i within [j_i - delta, j_i + delta]
/// (with delta = 0 this makes l = j). Always produces a feasible chromosome.
void repair_chromosome(Chromosome& c, int delta, int max_lag);

/// True when the chromosome satisfies all three constraints.
bool is_feasible(const Chromosome& c, int delta, int max_lag);

/// Fitness of one selection: MSE of the linear fit against the target, or
/// +infinity when the fit fails (singular system, unrealizable target,
/// non-stationary model).
double evaluate_selection(const TargetAutocovariance& target, const LagSelection& sel,
                          int mse_max_lag);

struct GenerationRecord {
    int generation = 0;
    double best_mse = 0.0;
    std::vector<int> best_j;
    std::vector<int> best_l;
};

struct OptimizeResult {
    LagSelection selection;
    RestrictedARModel model;
    double mse = 0.0;
    std::vector<GenerationRecord> history;
};

/// GA search for the lag pair (j, l) of length n_terms minimizing the MSE.
/// The initial population contains the YW and Krenk baselines (when they fit
/// within max_lag and the target), any extra_seeds, and random feasible
/// candidates. Deterministic for a fixed config. Throws OptimizationError
/// when no candidate in the entire run could be evaluated.
OptimizeResult optimize(const TargetAutocovariance& target, int n_terms,
                        const GAConfig& config,
                        const std::vector<LagSelection>& extra_seeds = {});

struct BenchmarkRow {
    int n_terms = 0;
    std::string approach; ///< "YW", "Krenk", "GA-0" or "GA-10"
    double mse_value = 0.0;
    std::vector<int> j;
    std::vector<int> l;
};

/// Benchmark the YW, Krenk and two GA variants (delta0, delta1) over
/// N = n_min..n_max. The delta1 run is additionally seeded with the delta0
/// winner, so its MSE never exceeds the delta0 result for the same N.
/// Per-generation GA records are appended to *history when provided.
std::vector<BenchmarkRow> benchmark(const TargetAutocovariance& target, int n_min, int n_max,
                                    const GAConfig& base_config, int delta0 = 0,
                                    int delta1 = 10,
                                    std::vector<GenerationRecord>* history = nullptr);

} // namespace arcov
