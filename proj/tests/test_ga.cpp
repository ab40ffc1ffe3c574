#include "arcov/ga.hpp"
#include "arcov/errors.hpp"
#include "arcov/turbulence.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace arcov;

namespace {

const TargetAutocovariance& turbulence_target()
{
    static const TargetAutocovariance target = make_target({}, 0.1245, 600);
    return target;
}

GAConfig small_config(int delta, std::uint64_t seed)
{
    GAConfig cfg;
    cfg.population_size = 40;
    cfg.generations = 30;
    cfg.max_lag = 32;
    cfg.delta = delta;
    cfg.rng_seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("baselines")
{
    CHECK(baseline_yw(3).j == std::vector<int>{1, 2, 3});
    CHECK(baseline_yw(3).l == std::vector<int>{1, 2, 3});
    CHECK(baseline_yw(1).j == std::vector<int>{1});
    CHECK(baseline_yw(10).j.back() == 10);

    CHECK(baseline_krenk(3).j == std::vector<int>{1, 2, 4});
    CHECK(baseline_krenk(1).j == std::vector<int>{1});
    CHECK(baseline_krenk(5).j == std::vector<int>{1, 2, 4, 8, 16});
    CHECK(baseline_krenk(5).l == baseline_krenk(5).j);
}

TEST_CASE("repair makes arbitrary chromosomes feasible")
{
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> gene(-20, 90);
    for (int delta : {0, 1, 10}) {
        for (int n : {1, 3, 5}) {
            for (int trial = 0; trial < 200; ++trial) {
                Chromosome c;
                for (int i = 0; i < n; ++i) {
                    c.j.push_back(gene(rng));
                    c.l.push_back(gene(rng));
                }
                repair_chromosome(c, delta, 64);
                CAPTURE(delta);
                CAPTURE(n);
                CHECK(is_feasible(c, delta, 64));
            }
        }
    }
}

TEST_CASE("repair keeps already-feasible baselines intact")
{
    Chromosome c{{1, 2, 4}, {1, 2, 4}, std::nullopt};
    repair_chromosome(c, 0, 64);
    CHECK(c.j == std::vector<int>{1, 2, 4});
    CHECK(c.l == std::vector<int>{1, 2, 4});

    Chromosome d{{1, 2, 7}, {1, 6, 12}, std::nullopt};
    repair_chromosome(d, 10, 64);
    CHECK(d.j == std::vector<int>{1, 2, 7});
    CHECK(d.l == std::vector<int>{1, 6, 12});
}

TEST_CASE("failed fits evaluate to +infinity")
{
    std::vector<double> values{1.0, 0.5, -0.5, 0.3, 0.2, 0.1};
    const TargetAutocovariance singular(values, 1.0);
    CHECK(std::isinf(evaluate_selection(singular, LagSelection({1, 2, 3}, {1, 2, 3}), 4)));
    CHECK(std::isfinite(
        evaluate_selection(turbulence_target(), LagSelection({1, 2, 3}, {1, 2, 3}), 41)));
}

TEST_CASE("optimization is deterministic")
{
    const auto cfg = small_config(0, 99);
    const auto a = optimize(turbulence_target(), 2, cfg);
    const auto b = optimize(turbulence_target(), 2, cfg);
    CHECK(a.selection.j == b.selection.j);
    CHECK(a.selection.l == b.selection.l);
    CHECK(a.mse == b.mse);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t g = 0; g < a.history.size(); ++g)
        CHECK(a.history[g].best_mse == b.history[g].best_mse);
}

TEST_CASE("best-so-far fitness is non-increasing")
{
    const auto res = optimize(turbulence_target(), 3, small_config(10, 5));
    for (std::size_t g = 1; g < res.history.size(); ++g)
        CHECK(res.history[g].best_mse <= res.history[g - 1].best_mse);
}

TEST_CASE("seeded baselines are never regressed")
{
    const auto& target = turbulence_target();
    for (int n : {2, 4}) {
        for (int delta : {0, 5}) {
            const auto cfg = small_config(delta, 7);
            const auto res = optimize(target, n, cfg);
            const double yw = evaluate_selection(target, baseline_yw(n), cfg.mse_max_lag);
            const double krenk = evaluate_selection(target, baseline_krenk(n), cfg.mse_max_lag);
            CHECK(res.mse <= std::min(yw, krenk) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("small searches find the published optima")
{
    const auto& target = turbulence_target();

    SUBCASE("N = 1, delta = 0: previous-lag regression wins")
    {
        const auto res = optimize(target, 1, small_config(0, 3));
        CHECK(res.selection.j == std::vector<int>{1});
        CHECK(res.selection.l == std::vector<int>{1});
    }

    SUBCASE("N = 1, delta = 10: the lag-2 equation wins")
    {
        GAConfig cfg = small_config(10, 3);
        cfg.population_size = 60;
        cfg.generations = 40;
        const auto res = optimize(target, 1, cfg);
        CHECK(res.selection.j == std::vector<int>{1});
        CHECK(res.selection.l == std::vector<int>{2});
    }

    SUBCASE("N = 2, delta = 0: j = [1,3] beats [1,2]")
    {
        GAConfig cfg = small_config(0, 3);
        cfg.population_size = 60;
        cfg.generations = 40;
        const auto res = optimize(target, 2, cfg);
        CHECK(res.selection.j == std::vector<int>{1, 3});
    }
}

TEST_CASE("optimize rejects impossible setups")
{
    // every candidate in this search space fits a unit-root model
    const TargetAutocovariance unit_root({1.0, 1.0, 1.0}, 1.0);
    GAConfig cfg;
    cfg.population_size = 4;
    cfg.generations = 2;
    cfg.max_lag = 1;
    cfg.delta = 0;
    cfg.mse_max_lag = 2;
    CHECK_THROWS_AS(optimize(unit_root, 1, cfg), OptimizationError);

    // target too short for the search space
    const TargetAutocovariance shorty({1.0, 0.5, 0.2}, 1.0);
    CHECK_THROWS_AS(optimize(shorty, 1, small_config(0, 1)), std::invalid_argument);
}

TEST_CASE("benchmark table")
{
    const auto& target = turbulence_target();
    GAConfig cfg;
    cfg.population_size = 30;
    cfg.generations = 20;
    cfg.max_lag = 32;
    cfg.rng_seed = 11;

    std::vector<GenerationRecord> history;
    const auto rows = benchmark(target, 1, 3, cfg, 0, 10, &history);
    REQUIRE(rows.size() == 12); // 4 approaches x 3 values of N
    CHECK(history.size() == 6 * 20);

    for (int n = 1; n <= 3; ++n) {
        const auto at = [&](const std::string& name) {
            for (const auto& row : rows)
                if (row.n_terms == n && row.approach == name)
                    return row;
            FAIL("missing row");
            return rows[0];
        };
        CHECK(at("YW").j == baseline_yw(n).j);
        CHECK(at("Krenk").j == baseline_krenk(n).j);
        // elitism with seeded baselines: the GA never loses to them
        CHECK(at("GA-0").mse_value <= at("Krenk").mse_value * (1.0 + 1e-12));
        CHECK(at("GA-0").mse_value <= at("YW").mse_value * (1.0 + 1e-12));
        // the wider search is seeded with the narrow winner
        CHECK(at("GA-10").mse_value <= at("GA-0").mse_value * (1.0 + 1e-12));
    }
}
