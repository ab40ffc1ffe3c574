#include "arcov/ga.hpp"
#include "arcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>

namespace arcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt)
{
    // splitmix64 step; decorrelates per-run streams derived from one seed.
    std::uint64_t z = base + salt * 0x9E3779B97F4A7C15ull + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct FitnessCache {
    std::map<std::pair<std::vector<int>, std::vector<int>>, double> memo;

    double operator()(const TargetAutocovariance& target, const Chromosome& c, int mse_max_lag)
    {
        const auto key = std::make_pair(c.j, c.l);
        const auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        const double v = evaluate_selection(target, LagSelection(c.j, c.l), mse_max_lag);
        memo.emplace(key, v);
        return v;
    }
};

} // namespace

void GAConfig::validate() const
{
    if (population_size < 2)
        throw std::invalid_argument("GA config: population must have at least 2 members");
    if (generations < 1)
        throw std::invalid_argument("GA config: need at least one generation");
    if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 || mutation_rate > 1.0)
        throw std::invalid_argument("GA config: rates must lie in [0, 1]");
    if (elitism_count < 0 || elitism_count >= population_size)
        throw std::invalid_argument("GA config: elitism count must be < population size");
    if (delta < 0)
        throw std::invalid_argument("GA config: delta must be >= 0");
    if (max_lag < 1)
        throw std::invalid_argument("GA config: max lag must be >= 1");
    if (mse_max_lag < 1)
        throw std::invalid_argument("GA config: MSE max lag must be >= 1");
    if (tournament_size < 1)
        throw std::invalid_argument("GA config: tournament size must be >= 1");
}

LagSelection baseline_yw(int n_terms)
{
    if (n_terms < 1)
        throw std::invalid_argument("baseline_yw: N must be >= 1");
    std::vector<int> j(static_cast<std::size_t>(n_terms));
    for (int i = 0; i < n_terms; ++i)
        j[static_cast<std::size_t>(i)] = i + 1;
    return LagSelection(j, j);
}

LagSelection baseline_krenk(int n_terms)
{
    if (n_terms < 1)
        throw std::invalid_argument("baseline_krenk: N must be >= 1");
    if (n_terms > 31)
        throw std::invalid_argument("baseline_krenk: 2^(N-1) overflows for N > 31");
    std::vector<int> j(static_cast<std::size_t>(n_terms));
    for (int i = 0; i < n_terms; ++i)
        j[static_cast<std::size_t>(i)] = 1 << i;
    return LagSelection(j, j);
}

bool is_feasible(const Chromosome& c, int delta, int max_lag)
{
    const std::size_t n = c.j.size();
    if (n == 0 || c.l.size() != n)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (c.j[i] < 1 || c.j[i] > max_lag || c.l[i] < 1)
            return false;
        if (i > 0 && (c.j[i] <= c.j[i - 1] || c.l[i] <= c.l[i - 1]))
            return false;
        if (std::abs(c.l[i] - c.j[i]) > delta)
            return false;
    }
    return true;
}

void repair_chromosome(Chromosome& c, int delta, int max_lag)
{
    const int n = static_cast<int>(c.j.size());
    if (n == 0 || c.l.size() != c.j.size())
        throw std::invalid_argument("repair: chromosome vectors must be non-empty and equal");
    if (max_lag < n)
        throw std::invalid_argument("repair: max lag smaller than chromosome length");

    // j: clamp, sort, bump duplicates upward, push back under max_lag.
    std::sort(c.j.begin(), c.j.end());
    for (int i = 0; i < n; ++i) {
        int lo = (i > 0 ? c.j[static_cast<std::size_t>(i - 1)] + 1 : 1);
        c.j[static_cast<std::size_t>(i)] = std::max(c.j[static_cast<std::size_t>(i)], lo);
    }
    for (int i = n - 1; i >= 0; --i) {
        int hi = max_lag - (n - 1 - i);
        c.j[static_cast<std::size_t>(i)] = std::min(c.j[static_cast<std::size_t>(i)], hi);
    }
    for (int i = 1; i < n; ++i)
        c.j[static_cast<std::size_t>(i)] =
            std::max(c.j[static_cast<std::size_t>(i)], c.j[static_cast<std::size_t>(i - 1)] + 1);

    // l: sort, then clamp each into the delta band while keeping it
    // strictly increasing; the band around a strictly increasing j always
    // leaves room.
    std::sort(c.l.begin(), c.l.end());
    int prev = 0;
    for (int i = 0; i < n; ++i) {
        const int ji = c.j[static_cast<std::size_t>(i)];
        const int lo = std::max({prev + 1, ji - delta, 1});
        const int hi = ji + delta;
        c.l[static_cast<std::size_t>(i)] = std::clamp(c.l[static_cast<std::size_t>(i)], lo, hi);
        prev = c.l[static_cast<std::size_t>(i)];
    }
    c.fitness.reset();
}

double evaluate_selection(const TargetAutocovariance& target, const LagSelection& sel,
                          int mse_max_lag)
{
    try {
        const RestrictedARModel model = fit_linear(target, sel);
        return mse(model, target, mse_max_lag);
    } catch (const Error&) {
        return kInf; // singular system, unrealizable or non-stationary fit
    }
}

OptimizeResult optimize(const TargetAutocovariance& target, int n_terms, const GAConfig& config,
                        const std::vector<LagSelection>& extra_seeds)
{
    config.validate();
    if (n_terms < 1)
        throw std::invalid_argument("optimize: N must be >= 1");
    if (config.max_lag < n_terms)
        throw std::invalid_argument("optimize: max lag must be >= N");
    if (!target.covers(config.max_lag + config.delta))
        throw std::invalid_argument("optimize: target must provide lags up to max_lag + delta");
    if (!target.covers(config.mse_max_lag))
        throw std::invalid_argument("optimize: target must provide lags up to the MSE max lag");

    std::mt19937_64 rng(config.rng_seed);
    std::uniform_int_distribution<int> lag_dist(1, config.max_lag);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> jitter_mag(1, 3);
    std::uniform_int_distribution<int> band_dist(-config.delta, config.delta);

    const auto random_chromosome = [&]() {
        std::vector<int> j;
        while (static_cast<int>(j.size()) < n_terms) {
            const int cand = lag_dist(rng);
            if (std::find(j.begin(), j.end(), cand) == j.end())
                j.push_back(cand);
        }
        std::sort(j.begin(), j.end());
        std::vector<int> l(j.size());
        for (std::size_t i = 0; i < j.size(); ++i)
            l[i] = j[i] + (config.delta > 0 ? band_dist(rng) : 0);
        Chromosome c{std::move(j), std::move(l), std::nullopt};
        repair_chromosome(c, config.delta, config.max_lag);
        return c;
    };

    std::vector<Chromosome> population;
    population.reserve(static_cast<std::size_t>(config.population_size));
    const auto seed_selection = [&](const LagSelection& sel) {
        if (static_cast<int>(sel.j.size()) != n_terms)
            return;
        Chromosome c{sel.j, sel.l, std::nullopt};
        repair_chromosome(c, config.delta, config.max_lag);
        if (static_cast<int>(population.size()) < config.population_size)
            population.push_back(std::move(c));
    };
    seed_selection(baseline_yw(n_terms));
    if (n_terms <= 31 && (1 << (n_terms - 1)) <= config.max_lag)
        seed_selection(baseline_krenk(n_terms));
    for (const auto& s : extra_seeds)
        seed_selection(s);
    while (static_cast<int>(population.size()) < config.population_size)
        population.push_back(random_chromosome());

    FitnessCache fitness;
    const auto evaluate_all = [&](std::vector<Chromosome>& pop) {
        for (auto& c : pop)
            if (!c.fitness)
                c.fitness = fitness(target, c, config.mse_max_lag);
    };

    Chromosome best;
    best.fitness = kInf;
    const auto update_best = [&](const std::vector<Chromosome>& pop) {
        for (const auto& c : pop)
            if (*c.fitness < *best.fitness)
                best = c;
    };

    std::vector<GenerationRecord> history;
    history.reserve(static_cast<std::size_t>(config.generations));

    evaluate_all(population);
    update_best(population);

    const auto by_fitness = [](const Chromosome& a, const Chromosome& b) {
        return *a.fitness < *b.fitness;
    };

    for (int gen = 0; gen < config.generations; ++gen) {
        std::vector<Chromosome> next;
        next.reserve(population.size());

        std::stable_sort(population.begin(), population.end(), by_fitness);
        for (int e = 0; e < config.elitism_count; ++e)
            next.push_back(population[static_cast<std::size_t>(e)]);

        std::uniform_int_distribution<std::size_t> idx_dist(0, population.size() - 1);
        const auto tournament = [&]() -> const Chromosome& {
            std::size_t winner = idx_dist(rng);
            for (int t = 1; t < config.tournament_size; ++t) {
                const std::size_t cand = idx_dist(rng);
                if (*population[cand].fitness < *population[winner].fitness)
                    winner = cand;
            }
            return population[winner];
        };

        while (static_cast<int>(next.size()) < config.population_size) {
            Chromosome child_a = tournament();
            Chromosome child_b = tournament();
            if (unit(rng) < config.crossover_rate) {
                for (int i = 0; i < n_terms; ++i) {
                    if (unit(rng) < 0.5)
                        std::swap(child_a.j[static_cast<std::size_t>(i)],
                                  child_b.j[static_cast<std::size_t>(i)]);
                    if (unit(rng) < 0.5)
                        std::swap(child_a.l[static_cast<std::size_t>(i)],
                                  child_b.l[static_cast<std::size_t>(i)]);
                }
            }
            for (Chromosome* child : {&child_a, &child_b}) {
                for (int i = 0; i < n_terms; ++i) {
                    if (unit(rng) < config.mutation_rate)
                        child->j[static_cast<std::size_t>(i)] +=
                            (unit(rng) < 0.5 ? -1 : 1) * jitter_mag(rng);
                    if (unit(rng) < config.mutation_rate)
                        child->l[static_cast<std::size_t>(i)] +=
                            (unit(rng) < 0.5 ? -1 : 1) * jitter_mag(rng);
                }
                repair_chromosome(*child, config.delta, config.max_lag);
                if (static_cast<int>(next.size()) < config.population_size)
                    next.push_back(std::move(*child));
            }
        }

        population = std::move(next);
        evaluate_all(population);
        update_best(population);

        history.push_back({gen, *best.fitness, best.j, best.l});
    }

    if (!std::isfinite(*best.fitness))
        throw OptimizationError("optimize: no feasible lag selection could be evaluated");

    LagSelection sel(best.j, best.l);
    RestrictedARModel model = fit_linear(target, sel);
    return OptimizeResult{std::move(sel), std::move(model), *best.fitness, std::move(history)};
}

std::vector<BenchmarkRow> benchmark(const TargetAutocovariance& target, int n_min, int n_max,
                                    const GAConfig& base_config, int delta0, int delta1,
                                    std::vector<GenerationRecord>* history)
{
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("benchmark: invalid N range");

    std::vector<BenchmarkRow> rows;
    for (int n = n_min; n <= n_max; ++n) {
        const LagSelection yw = baseline_yw(n);
        rows.push_back({n, "YW", evaluate_selection(target, yw, base_config.mse_max_lag),
                        yw.j, yw.l});

        const LagSelection krenk = baseline_krenk(n);
        rows.push_back({n, "Krenk",
                        evaluate_selection(target, krenk, base_config.mse_max_lag), krenk.j,
                        krenk.l});

        GAConfig cfg0 = base_config;
        cfg0.delta = delta0;
        cfg0.rng_seed = mix_seed(base_config.rng_seed, static_cast<std::uint64_t>(2 * n));
        const OptimizeResult r0 = optimize(target, n, cfg0);
        rows.push_back({n, "GA-" + std::to_string(delta0), r0.mse, r0.selection.j,
                        r0.selection.l});

        GAConfig cfg1 = base_config;
        cfg1.delta = delta1;
        cfg1.rng_seed = mix_seed(base_config.rng_seed, static_cast<std::uint64_t>(2 * n + 1));
        // Seeding with the delta0 winner makes the wider search start no
        // worse than the narrow one.
        const OptimizeResult r1 = optimize(target, n, cfg1, {r0.selection});
        rows.push_back({n, "GA-" + std::to_string(delta1), r1.mse, r1.selection.j,
                        r1.selection.l});

        if (history) {
            history->insert(history->end(), r0.history.begin(), r0.history.end());
            history->insert(history->end(), r1.history.begin(), r1.history.end());
        }
    }
    return rows;
}

} // namespace arcov
