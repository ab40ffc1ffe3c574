#include "arcov/ar.hpp"
#include "arcov/errors.hpp"
#include "arcov/synth.hpp"
#include "arcov/turbulence.hpp"

#include "oracles.hpp"

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

void check_coeffs(const RestrictedARModel& m, std::initializer_list<double> a, double b,
                  double tol = 1e-3)
{
    REQUIRE(m.coeffs().size() == a.size());
    std::size_t i = 0;
    for (double expected : a)
        CHECK(std::abs(m.coeffs()[i++] - expected) <= tol);
    CHECK(std::abs(m.noise_coeff() - b) <= tol);
}

} // namespace

TEST_CASE("linear fit reproduces the published turbulence models")
{
    const auto& target = turbulence_target();

    SUBCASE("Yule-Walker j = l = [1,2,3]")
    {
        check_coeffs(fit_linear(target, LagSelection({1, 2, 3}, {1, 2, 3})),
                     {0.663, 0.099, 0.044}, 0.636);
    }
    SUBCASE("alternate equations l = [1,2,5]")
    {
        check_coeffs(fit_linear(target, LagSelection({1, 2, 3}, {1, 2, 5})),
                     {0.657, 0.066, 0.092}, 0.635);
    }
    SUBCASE("restricted scheme j = [1,2,5], l = [1,4,5]")
    {
        check_coeffs(fit_linear(target, LagSelection({1, 2, 5}, {1, 4, 5})),
                     {0.611, 0.198, 0.009}, 0.633);
    }
    SUBCASE("Krenk scheme j = l = [1,2,4]")
    {
        check_coeffs(fit_linear(target, LagSelection({1, 2, 4}, {1, 2, 4})),
                     {0.664, 0.109, 0.035}, 0.636);
    }
}

TEST_CASE("one-term fit has the closed form gamma_1/gamma_0")
{
    const auto& target = turbulence_target();
    const auto m = fit_linear(target, LagSelection({1}, {1}));
    CHECK(m.coeffs()[0] == doctest::Approx(target(1) / target(0)).epsilon(1e-14));
    CHECK(m.noise_coeff()
          == doctest::Approx(std::sqrt(target(0) - m.coeffs()[0] * target(1))).epsilon(1e-14));
}

TEST_CASE("linear fit error paths")
{
    SUBCASE("the singular example target")
    {
        // gamma = (1, 0.5, -0.5, *) makes the lag matrix singular for
        // j = l = [1,2,3] regardless of the fourth value
        const TargetAutocovariance bad({1.0, 0.5, -0.5, 0.3}, 1.0);
        CHECK_THROWS_AS(fit_linear(bad, LagSelection({1, 2, 3}, {1, 2, 3})),
                        NonInvertibleTargetError);
    }
    SUBCASE("negative noise variance")
    {
        const TargetAutocovariance bad({1.0, 0.9, -0.5}, 1.0);
        CHECK_THROWS_AS(fit_linear(bad, LagSelection({1, 2}, {1, 2})),
                        TargetNotRealizableError);
    }
    SUBCASE("insufficient target length")
    {
        const TargetAutocovariance shorty({1.0, 0.5, 0.25}, 1.0);
        CHECK_THROWS_AS(fit_linear(shorty, LagSelection({1, 2, 3}, {1, 2, 3})),
                        std::invalid_argument);
    }
}

TEST_CASE("nonlinear fit")
{
    const auto& target = turbulence_target();

    SUBCASE("published exact-match model j = [1,2,5], match = [0,1,3,5]")
    {
        const auto m = fit_nonlinear(target, {1, 2, 5}, {0, 1, 3, 5});
        check_coeffs(m, {0.649, 0.138, 0.026}, 0.634);

        // matched lags are reproduced exactly
        const auto gamma = theoretical_autocovariance(m, 5);
        for (int l : {0, 1, 3, 5})
            CHECK(std::abs(gamma[static_cast<std::size_t>(l)] - target(l)) <= 1e-8);
    }

    SUBCASE("with all lags matched it reduces to Yule-Walker")
    {
        const auto nl = fit_nonlinear(target, {1, 2, 3}, {0, 1, 2, 3});
        const auto yw = fit_linear(target, LagSelection({1, 2, 3}, {1, 2, 3}));
        for (int i = 0; i < 3; ++i)
            CHECK(nl.coeffs()[static_cast<std::size_t>(i)]
                  == doctest::Approx(yw.coeffs()[static_cast<std::size_t>(i)]).epsilon(1e-10));
        CHECK(nl.noise_coeff() == doctest::Approx(yw.noise_coeff()).epsilon(1e-10));
    }

    SUBCASE("other unknown placements converge to exact matches")
    {
        for (const auto& [j, match] :
             std::vector<std::pair<std::vector<int>, std::vector<int>>>{
                 {{2, 3}, {0, 2, 3}},      // unknown gamma_1
                 {{1, 4}, {0, 1, 4}},      // unknowns gamma_2, gamma_3
                 {{1, 3, 4}, {0, 2, 3, 4}} // unknown gamma_1
             }) {
            const auto m = fit_nonlinear(target, j, match);
            const auto gamma = theoretical_autocovariance(m, m.order());
            for (int l : match)
                CHECK(std::abs(gamma[static_cast<std::size_t>(l)] - target(l)) <= 1e-8);
        }
    }

    SUBCASE("argument validation")
    {
        CHECK_THROWS_AS(fit_nonlinear(target, {1, 2, 5}, {1, 3, 5}), std::invalid_argument);
        CHECK_THROWS_AS(fit_nonlinear(target, {1, 2, 5}, {0, 1, 3}), std::invalid_argument);
        CHECK_THROWS_AS(fit_nonlinear(target, {1, 2, 5}, {0, 1, 3, 6}), std::invalid_argument);
        CHECK_THROWS_AS(fit_nonlinear(target, {1, 2, 5}, {0, 3, 1, 5}), std::invalid_argument);
    }
}

TEST_CASE("theoretical autocovariance closed forms")
{
    SUBCASE("single-lag model AR(3,[3])")
    {
        const RestrictedARModel m({3}, {0.5}, 1.0);
        const auto gamma = theoretical_autocovariance(m, 12);
        CHECK(gamma[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
        CHECK(gamma[3] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        for (int l = 1; l <= 12; ++l)
            if (l % 3 != 0)
                CHECK(std::abs(gamma[static_cast<std::size_t>(l)]) <= 1e-12);
        CHECK(gamma[6] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    }

    SUBCASE("AR(1) geometric decay")
    {
        const double phi = 0.85, sigma = 1.3;
        const RestrictedARModel m({1}, {phi}, sigma);
        const auto gamma = theoretical_autocovariance(m, 30);
        for (int l = 0; l <= 30; ++l)
            CHECK(gamma[static_cast<std::size_t>(l)]
                  == doctest::Approx(sigma * sigma * std::pow(phi, l) / (1.0 - phi * phi))
                         .epsilon(1e-12));
    }
}

TEST_CASE("direct and recursive methods agree")
{
    SUBCASE("dense AR(2), including a long-run ensemble estimate")
    {
        const RestrictedARModel m({1, 2}, {1.2, -0.3}, 0.5);
        const auto direct = theoretical_autocovariance(m, 20, AutocovMethod::direct_solve);
        const auto recur = theoretical_autocovariance(m, 20, AutocovMethod::recursive);
        for (std::size_t l = 0; l < direct.size(); ++l)
            CHECK(std::abs(direct[l] - recur[l]) <= 1e-10);

        SynthesisConfig cfg{20000, 100, 200, 271828};
        const auto est = ensemble_autocovariance(synthesize_ar(m, cfg), 20);
        for (std::size_t l = 0; l < direct.size(); ++l)
            CHECK(std::abs(est.gamma_e[l] - direct[l]) <= 0.02 * direct[0]);
    }
    SUBCASE("restricted AR(5,[1,2,5])")
    {
        const RestrictedARModel m({1, 2, 5}, {1.2, -0.5, 0.1}, 0.5);
        const auto direct = theoretical_autocovariance(m, 20, AutocovMethod::direct_solve);
        const auto recur = theoretical_autocovariance(m, 20, AutocovMethod::recursive);
        for (std::size_t l = 0; l < direct.size(); ++l)
            CHECK(std::abs(direct[l] - recur[l]) <= 1e-8);
    }
    SUBCASE("random stable models up to n = 200")
    {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 10; ++trial) {
            const auto m = oracle::random_stable_restricted_model(rng, 3, 8);
            const auto direct = theoretical_autocovariance(m, 200, AutocovMethod::direct_solve);
            const auto recur = theoretical_autocovariance(m, 200, AutocovMethod::recursive);
            for (std::size_t l = 0; l < direct.size(); ++l)
                CHECK(std::abs(direct[l] - recur[l]) <= 1e-8);
        }
    }
    SUBCASE("recursive needs n >= p")
    {
        const RestrictedARModel m({1, 2, 5}, {1.2, -0.5, 0.1}, 0.5);
        CHECK_THROWS_AS(theoretical_autocovariance(m, 3, AutocovMethod::recursive),
                        std::invalid_argument);
        CHECK(theoretical_autocovariance(m, 3, AutocovMethod::direct_solve).size() == 4);
    }
}

TEST_CASE("Yule-Walker exactness on random stationary targets")
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 1 + static_cast<int>(rng() % 6);
        const auto m = oracle::random_stable_dense_model(rng, p);
        const auto gamma = theoretical_autocovariance(m, p + 30);
        const TargetAutocovariance target(gamma, 1.0);

        std::vector<int> yw_lags(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i)
            yw_lags[static_cast<std::size_t>(i)] = i + 1;
        const auto refit = fit_linear(target, LagSelection(yw_lags, yw_lags));
        const auto refit_gamma = theoretical_autocovariance(refit, p);
        for (int l = 0; l <= p; ++l)
            CHECK(std::abs(refit_gamma[static_cast<std::size_t>(l)] - target(l)) <= 1e-9);
    }
}

TEST_CASE("fit and compute round trip recovers the model")
{
    std::mt19937 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = oracle::random_stable_restricted_model(rng, 2 + static_cast<int>(rng() % 2), 9);
        int needed = 2 * m.order() + 5;
        const auto gamma = theoretical_autocovariance(m, needed);
        const TargetAutocovariance target(gamma, 1.0);
        const auto refit = fit_linear(target, LagSelection(m.lags(), m.lags()));
        for (std::size_t i = 0; i < m.coeffs().size(); ++i)
            CHECK(std::abs(refit.coeffs()[i] - m.coeffs()[i]) <= 1e-8);
        CHECK(std::abs(refit.noise_coeff() - m.noise_coeff()) <= 1e-8);
    }
}

TEST_CASE("fitted models satisfy exactly the selected autocovariance equations")
{
    const auto& target = turbulence_target();
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> j, l;
        int cur = 0;
        for (int i = 0; i < 3; ++i)
            j.push_back(cur += 1 + static_cast<int>(rng() % 4));
        cur = 0;
        for (int i = 0; i < 3; ++i)
            l.push_back(cur += 1 + static_cast<int>(rng() % 5));
        RestrictedARModel m = [&]() {
            try {
                return fit_linear(target, LagSelection(j, l));
            } catch (const Error&) {
                return RestrictedARModel({1}, {0.0}, 1.0); // skip infeasible draws
            }
        }();
        if (m.lags().size() != j.size())
            continue;

        // residual of the lag-l equations with target values substituted
        for (int lag : l) {
            double acc = -target(lag);
            for (std::size_t i = 0; i < j.size(); ++i)
                acc += m.coeffs()[i] * target(lag - j[i]);
            CHECK(std::abs(acc) <= 1e-9);
        }
        double acc0 = -target(0) + m.noise_coeff() * m.noise_coeff();
        for (std::size_t i = 0; i < j.size(); ++i)
            acc0 += m.coeffs()[i] * target(j[i]);
        CHECK(std::abs(acc0) <= 1e-9);
    }
}

TEST_CASE("zero pattern for lag vectors on a common divisor")
{
    const RestrictedARModel m2({2, 4, 6}, {0.3, 0.1, 0.05}, 1.0);
    const auto g2 = theoretical_autocovariance(m2, 15);
    for (int l = 1; l <= 15; l += 2)
        CHECK(std::abs(g2[static_cast<std::size_t>(l)]) <= 1e-12);

    const RestrictedARModel m3({3, 6}, {0.4, 0.1}, 0.7);
    const auto g3 = theoretical_autocovariance(m3, 14);
    for (int l = 1; l <= 14; ++l)
        if (l % 3 != 0)
            CHECK(std::abs(g3[static_cast<std::size_t>(l)]) <= 1e-12);
}

TEST_CASE("stationarity gate")
{
    CHECK_THROWS_AS(RestrictedARModel({1}, {1.0}, 1.0), NonStationaryModelError);
    CHECK_THROWS_AS(RestrictedARModel({1}, {1.05}, 1.0), NonStationaryModelError);
    CHECK_THROWS_AS(RestrictedARModel({1, 2}, {0.6, 0.5}, 1.0), NonStationaryModelError);
    CHECK_NOTHROW(RestrictedARModel({1}, {0.999}, 1.0));
}

TEST_CASE("AR spectrum")
{
    const auto& target = turbulence_target();
    const double k_max = max_wavenumber(0.1245);

    SUBCASE("white noise is flat")
    {
        const RestrictedARModel white({1}, {0.0}, 0.8);
        for (double k : {0.0, 0.5, 2.0, k_max})
            CHECK(ar_spectrum(white, k, k_max)
                  == doctest::Approx(0.64 / k_max).epsilon(1e-14));
    }

    SUBCASE("variance recovery by trapezoid integration")
    {
        const auto m = fit_linear(target, LagSelection({1, 2, 3}, {1, 2, 3}));
        const auto gamma = theoretical_autocovariance(m, 0);
        const int n = 2000;
        double integral = 0.5 * (ar_spectrum(m, 0.0, k_max) + ar_spectrum(m, k_max, k_max));
        for (int i = 1; i < n; ++i)
            integral += ar_spectrum(m, k_max * i / n, k_max);
        integral *= k_max / n;
        CHECK(std::abs(integral - gamma[0]) <= 1e-3);
    }

    SUBCASE("coefficient and cosine-series routes agree")
    {
        std::mt19937 rng(37);
        for (int trial = 0; trial < 10; ++trial) {
            const auto m = oracle::random_stable_restricted_model(rng, 3, 7);
            for (int i = 0; i <= 100; ++i) {
                const double k = k_max * i / 100.0;
                CHECK(std::abs(ar_spectrum(m, k, k_max)
                               - ar_spectrum_from_autocovariance(m, k, k_max)) <= 1e-6);
            }
        }
    }

    SUBCASE("GA-10 spectrum dominates in sup norm at low wavenumbers")
    {
        // sup |S^AR - S^T| over k <= 4 (angular axis), 100-point grid:
        // the GA-10 scheme of the published N = 3 comparison wins clearly.
        const double k_max_ang = max_wavenumber(0.1245, FrequencyConvention::angular);
        const auto sup_err = [&](const LagSelection& sel) {
            const auto m = fit_linear(target, sel);
            double sup = 0.0;
            for (int i = 0; i < 100; ++i) {
                const double k = 4.0 * i / 99.0;
                sup = std::max(sup, std::abs(ar_spectrum(m, k, k_max_ang)
                                             - target_spectrum(target, k,
                                                               FrequencyConvention::angular)));
            }
            return sup;
        };
        const double ga10 = sup_err(LagSelection({1, 2, 7}, {1, 6, 12}));
        CHECK(ga10 < sup_err(LagSelection({1, 2, 3}, {1, 2, 3})));
        CHECK(ga10 < sup_err(LagSelection({1, 2, 4}, {1, 2, 4})));
        CHECK(ga10 < sup_err(LagSelection({1, 2, 5}, {1, 2, 5})));
    }

    SUBCASE("out-of-range wavenumbers are rejected")
    {
        const RestrictedARModel m({1}, {0.5}, 1.0);
        CHECK_THROWS_AS(ar_spectrum(m, -0.1, k_max), std::domain_error);
        CHECK_THROWS_AS(ar_spectrum(m, k_max * 1.01, k_max), std::domain_error);
    }
}

TEST_CASE("MSE criterion")
{
    const auto& target = turbulence_target();

    SUBCASE("zero for a perfectly matching model")
    {
        const RestrictedARModel m({1, 2}, {1.2, -0.3}, 0.5);
        const auto gamma = theoretical_autocovariance(m, 60);
        const TargetAutocovariance own(gamma, 1.0);
        CHECK(mse(m, own, 41) <= 1e-20);
    }

    SUBCASE("Yule-Walker errors vanish up to the model order")
    {
        const auto m = fit_linear(target, LagSelection({1, 2, 3}, {1, 2, 3}));
        const auto gamma = theoretical_autocovariance(m, 41);
        for (int l = 0; l <= 3; ++l)
            CHECK(std::abs(gamma[static_cast<std::size_t>(l)] - target(l)) <= 1e-12);
        double tail = 0.0;
        for (int l = 4; l <= 41; ++l) {
            const double e = target(l) - gamma[static_cast<std::size_t>(l)];
            tail += e * e;
        }
        CHECK(mse(m, target, 41) == doctest::Approx(tail / 41.0).epsilon(1e-12));
    }

    SUBCASE("published N = 3 schemes are strictly ordered")
    {
        const double yw = mse(fit_linear(target, LagSelection({1, 2, 3}, {1, 2, 3})), target);
        const double krenk = mse(fit_linear(target, LagSelection({1, 2, 4}, {1, 2, 4})), target);
        const double ga0 = mse(fit_linear(target, LagSelection({1, 2, 5}, {1, 2, 5})), target);
        const double ga10 = mse(fit_linear(target, LagSelection({1, 2, 7}, {1, 6, 12})), target);
        CHECK(yw > krenk);
        CHECK(krenk > ga0);
        CHECK(ga0 > ga10);
    }
}
