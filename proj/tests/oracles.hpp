// Test-only reference implementations, independent of the library code
// paths they check.
#pragma once

#include "arcov/ar.hpp"
#include "arcov/var.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

// K_nu(x) from the integral representation
//   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
// The integrand is even and analytic, so the trapezoidal rule on a uniform
// grid converges exponentially in 1/h; h = 0.05 is far below double
// precision already.
inline double bessel_k_quadrature(double nu, double x)
{
    const double h = 0.05;
    double sum = 0.5 * std::exp(-x); // t = 0 term: e^{-x} cosh(0), half weight
    for (int n = 1; n < 20000; ++n) {
        const double t = n * h;
        const double term = std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
        sum += term;
        if (term < sum * 1e-19 && t > 1.0)
            break;
    }
    return h * sum;
}

// Lanczos approximation (g = 7, 9 coefficients), with reflection for x < 1/2.
inline double lanczos_gamma(double x)
{
    static const double coef[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5)
        return M_PI / (std::sin(M_PI * x) * lanczos_gamma(1.0 - x));
    x -= 1.0;
    double acc = coef[0];
    for (int i = 1; i < 9; ++i)
        acc += coef[i] / (x + i);
    const double t = x + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

// Random stable dense AR(p) coefficients via the reflection-coefficient
// (step-up) parametrization: |k_i| < 1 guarantees stationarity.
inline std::vector<double> random_stable_dense_ar(std::mt19937& rng, int p,
                                                  double max_reflection = 0.9)
{
    std::uniform_real_distribution<double> refl(-max_reflection, max_reflection);
    std::vector<double> a; // "a" in the step-up sense: z_t = sum a_i z_{t-i}
    for (int m = 1; m <= p; ++m) {
        const double k = refl(rng);
        std::vector<double> next(static_cast<std::size_t>(m), 0.0);
        for (int i = 0; i < m - 1; ++i)
            next[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)]
                - k * a[static_cast<std::size_t>(m - 2 - i)];
        next[static_cast<std::size_t>(m - 1)] = k;
        a = std::move(next);
    }
    return a;
}

inline arcov::RestrictedARModel random_stable_dense_model(std::mt19937& rng, int p,
                                                          double noise = 1.0)
{
    const auto a = random_stable_dense_ar(rng, p);
    std::vector<int> j(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        j[static_cast<std::size_t>(i)] = i + 1;
    return arcov::RestrictedARModel(j, a, noise);
}

// Random stable restricted model with sparse lags; rejection sampling on the
// companion spectral radius.
inline arcov::RestrictedARModel random_stable_restricted_model(std::mt19937& rng, int n_terms,
                                                               int max_lag, double noise = 1.0)
{
    std::uniform_int_distribution<int> lag(1, max_lag);
    std::uniform_real_distribution<double> coef(-0.8, 0.8);
    for (;;) {
        std::vector<int> j;
        while (static_cast<int>(j.size()) < n_terms) {
            const int c = lag(rng);
            if (std::find(j.begin(), j.end(), c) == j.end())
                j.push_back(c);
        }
        std::sort(j.begin(), j.end());
        std::vector<double> a(static_cast<std::size_t>(n_terms));
        for (auto& v : a)
            v = coef(rng) / n_terms;
        std::vector<double> phi(static_cast<std::size_t>(j.back()), 0.0);
        for (int i = 0; i < n_terms; ++i)
            phi[static_cast<std::size_t>(j[static_cast<std::size_t>(i)] - 1)] =
                a[static_cast<std::size_t>(i)];
        if (arcov::companion_spectral_radius(phi) < 0.9)
            return arcov::RestrictedARModel(j, a, noise);
    }
}

// Random stable VAR model (entries scaled down, rejection on the companion
// spectral radius), with a random lower-triangular noise matrix.
inline arcov::RestrictedVARModel random_stable_var_model(std::mt19937& rng, int k, int p,
                                                         double target_radius = 0.85)
{
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    for (;;) {
        std::vector<int> j(static_cast<std::size_t>(p));
        std::vector<Eigen::MatrixXd> a;
        for (int i = 0; i < p; ++i) {
            j[static_cast<std::size_t>(i)] = i + 1;
            Eigen::MatrixXd m(k, k);
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c)
                    m(r, c) = entry(rng) * 0.7 / p;
            a.push_back(std::move(m));
        }
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c <= r; ++c)
                b(r, c) = (r == c) ? 0.5 + 0.5 * std::abs(entry(rng)) : 0.3 * entry(rng);
        try {
            arcov::RestrictedVARModel model(k, j, a, b);
            Eigen::EigenSolver<Eigen::MatrixXd> es(model.companion_matrix(), false);
            if (es.eigenvalues().cwiseAbs().maxCoeff() < target_radius)
                return model;
        } catch (const std::exception&) {
            // non-stationary draw; try again
        }
    }
}

} // namespace oracle
