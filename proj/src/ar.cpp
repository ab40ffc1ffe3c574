#include "arcov/ar.hpp"
#include "arcov/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace arcov {

namespace {

constexpr double kStationarityTol = 1e-10;
constexpr double kConditionLimit = 1e12;
constexpr double kSeriesTruncation = 1e-12;

void check_lag_vector(const std::vector<int>& v, const char* name)
{
    if (v.empty())
        throw std::invalid_argument(std::string(name) + ": must be non-empty");
    int prev = 0;
    for (int x : v) {
        if (x <= prev)
            throw std::invalid_argument(std::string(name)
                                        + ": lags must be strictly increasing and positive");
        prev = x;
    }
}

// Autocovariance equations for lags 0..m as a linear system in
// gamma_0..gamma_m, with symmetry gamma_{-l} = gamma_l already folded in:
// row l encodes gamma_l - sum_i phi_i gamma_{|l-i|} = delta_{l0} b^2.
Eigen::MatrixXd autocov_equation_matrix(const std::vector<double>& phi, int m)
{
    const int p = static_cast<int>(phi.size());
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int l = 0; l <= m; ++l) {
        mat(l, l) += 1.0;
        for (int i = 1; i <= p; ++i)
            mat(l, std::abs(l - i)) -= phi[static_cast<std::size_t>(i - 1)];
    }
    return mat;
}

std::vector<double> solve_autocov_subsystem(const std::vector<double>& phi, double b, int m)
{
    const Eigen::MatrixXd mat = autocov_equation_matrix(phi, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs(0) = b * b;
    Eigen::VectorXd sol = mat.partialPivLu().solve(rhs);
    if (!sol.allFinite())
        throw Error("theoretical autocovariance: singular equation system");
    return std::vector<double>(sol.data(), sol.data() + m + 1);
}

} // namespace

LagSelection::LagSelection(std::vector<int> j_, std::vector<int> l_)
    : j(std::move(j_)), l(std::move(l_))
{
    check_lag_vector(j, "lag selection j");
    check_lag_vector(l, "lag selection l");
    if (j.size() != l.size())
        throw std::invalid_argument("lag selection: j and l must have equal length");
}

double companion_spectral_radius(const std::vector<double>& phi)
{
    const int p = static_cast<int>(phi.size());
    if (p == 0)
        return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i)
        companion(0, i) = phi[static_cast<std::size_t>(i)];
    if (p > 1)
        companion.block(1, 0, p - 1, p - 1).setIdentity();
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

RestrictedARModel::RestrictedARModel(std::vector<int> j, std::vector<double> a, double b)
    : j_(std::move(j)), a_(std::move(a)), b_(b)
{
    check_lag_vector(j_, "model lags j");
    if (a_.size() != j_.size())
        throw std::invalid_argument("AR model: coefficient count must match lag count");
    for (double c : a_)
        if (!std::isfinite(c))
            throw std::invalid_argument("AR model: non-finite coefficient");
    if (!std::isfinite(b_) || b_ < 0.0)
        throw std::invalid_argument("AR model: noise coefficient must be >= 0");
    const double radius = companion_spectral_radius(dense_coeffs());
    if (!(radius < 1.0 - kStationarityTol))
        throw NonStationaryModelError("AR model: characteristic root on or inside the unit "
                                      "circle (spectral radius "
                                      + std::to_string(radius) + ")");
}

std::vector<double> RestrictedARModel::dense_coeffs() const
{
    std::vector<double> phi(static_cast<std::size_t>(order()), 0.0);
    for (std::size_t i = 0; i < j_.size(); ++i)
        phi[static_cast<std::size_t>(j_[i] - 1)] = a_[i];
    return phi;
}

std::vector<double> theoretical_autocovariance(const RestrictedARModel& model, int n,
                                               AutocovMethod method)
{
    if (n < 0)
        throw std::invalid_argument("theoretical autocovariance: n must be >= 0");
    const int p = model.order();
    const std::vector<double> phi = model.dense_coeffs();

    if (method == AutocovMethod::direct_solve) {
        auto full = solve_autocov_subsystem(phi, model.noise_coeff(), std::max(n, p));
        full.resize(static_cast<std::size_t>(n) + 1);
        return full;
    }

    if (n < p)
        throw std::invalid_argument("theoretical autocovariance: recursive method needs n >= p");
    auto gamma = solve_autocov_subsystem(phi, model.noise_coeff(), p);
    gamma.reserve(static_cast<std::size_t>(n) + 1);
    for (int l = p + 1; l <= n; ++l) {
        double acc = 0.0;
        for (int i = 1; i <= p; ++i)
            acc += phi[static_cast<std::size_t>(i - 1)] * gamma[static_cast<std::size_t>(l - i)];
        gamma.push_back(acc);
    }
    return gamma;
}

RestrictedARModel fit_linear(const TargetAutocovariance& target, const LagSelection& sel)
{
    const int n = sel.n_terms();
    int needed = 0;
    for (int m = 0; m < n; ++m) {
        needed = std::max(needed, sel.l[static_cast<std::size_t>(m)]);
        needed = std::max(needed, sel.j[static_cast<std::size_t>(m)]);
        for (int i = 0; i < n; ++i)
            needed = std::max(needed, std::abs(sel.l[static_cast<std::size_t>(m)]
                                               - sel.j[static_cast<std::size_t>(i)]));
    }
    if (!target.covers(needed))
        throw std::invalid_argument("fit_linear: target provides lags up to "
                                    + std::to_string(target.max_lag()) + " but lag "
                                    + std::to_string(needed) + " is required");

    // gamma_{j,l}(i, m) = gamma_{l_m - j_i}; row vector gamma_l on the right.
    Eigen::MatrixXd gjl(n, n);
    Eigen::VectorXd gl(n);
    for (int m = 0; m < n; ++m) {
        gl(m) = target(sel.l[static_cast<std::size_t>(m)]);
        for (int i = 0; i < n; ++i)
            gjl(i, m) = target(sel.l[static_cast<std::size_t>(m)]
                               - sel.j[static_cast<std::size_t>(i)]);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gjl, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > kConditionLimit)
        throw NonInvertibleTargetError(
            "fit_linear: autocovariance lag matrix is singular or ill-conditioned");

    // a . gamma_{j,l} = gamma_l  <=>  gamma_{j,l}' a' = gamma_l'.
    const Eigen::VectorXd a = gjl.transpose().partialPivLu().solve(gl);

    double b2 = target(0);
    for (int i = 0; i < n; ++i)
        b2 -= a(i) * target(sel.j[static_cast<std::size_t>(i)]);
    if (b2 < 0.0) {
        if (b2 < -1e-12 * target(0))
            throw TargetNotRealizableError(
                "fit_linear: negative noise variance b^2 = " + std::to_string(b2));
        b2 = 0.0;
    }

    return RestrictedARModel(sel.j, std::vector<double>(a.data(), a.data() + n),
                             std::sqrt(b2));
}

RestrictedARModel fit_nonlinear(const TargetAutocovariance& target, std::vector<int> j,
                                std::vector<int> match_lags)
{
    check_lag_vector(j, "fit_nonlinear j");
    const int n = static_cast<int>(j.size());
    const int p = j.back();

    if (static_cast<int>(match_lags.size()) != n + 1)
        throw std::invalid_argument("fit_nonlinear: match_lags must have length N+1");
    if (match_lags.front() != 0)
        throw std::invalid_argument("fit_nonlinear: match_lags must contain lag 0");
    for (std::size_t i = 1; i < match_lags.size(); ++i)
        if (match_lags[i] <= match_lags[i - 1])
            throw std::invalid_argument("fit_nonlinear: match_lags must be strictly increasing");
    if (match_lags.back() > p)
        throw std::invalid_argument("fit_nonlinear: match_lags must lie within [0, p]");
    if (!target.covers(match_lags.back()))
        throw std::invalid_argument("fit_nonlinear: target does not cover all match lags");

    std::vector<bool> matched(static_cast<std::size_t>(p) + 1, false);
    for (int l : match_lags)
        matched[static_cast<std::size_t>(l)] = true;
    std::vector<int> unmatched;
    for (int l = 0; l <= p; ++l)
        if (!matched[static_cast<std::size_t>(l)])
            unmatched.push_back(l);
    const int nu = static_cast<int>(unmatched.size()); // p - N unknown lags
    std::vector<int> unknown_index(static_cast<std::size_t>(p) + 1, -1);
    for (int u = 0; u < nu; ++u)
        unknown_index[static_cast<std::size_t>(unmatched[static_cast<std::size_t>(u)])] = u;

    // Unknown vector x = [a_1..a_N, b^2, gamma at unmatched lags].
    const int dim = n + 1 + nu;
    Eigen::VectorXd x(dim);

    // Initial guess: linear fit on the N smallest positive match lags, with
    // the unmatched covariances taken from that model when it is stationary.
    bool have_init = false;
    try {
        std::vector<int> l_init(match_lags.begin() + 1, match_lags.end());
        const RestrictedARModel init = fit_linear(target, LagSelection(j, l_init));
        for (int i = 0; i < n; ++i)
            x(i) = init.coeffs()[static_cast<std::size_t>(i)];
        x(n) = init.noise_coeff() * init.noise_coeff();
        const auto g0 = theoretical_autocovariance(init, p);
        for (int u = 0; u < nu; ++u)
            x(n + 1 + u) = g0[static_cast<std::size_t>(unmatched[static_cast<std::size_t>(u)])];
        have_init = true;
    } catch (const std::exception&) {
        // fall through to the neutral start below
    }
    if (!have_init) {
        x.setZero();
        x(n) = target(0);
        for (int u = 0; u < nu; ++u) {
            const int l = unmatched[static_cast<std::size_t>(u)];
            x(n + 1 + u) = target.covers(l) ? target(l) : 0.0;
        }
    }

    const auto gamma_at = [&](const Eigen::VectorXd& v, int lag) {
        const int al = std::abs(lag);
        return matched[static_cast<std::size_t>(al)] ? target(al)
                                                     : v(n + 1 + unknown_index[static_cast<std::size_t>(al)]);
    };

    const auto residual = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd f(p + 1);
        for (int l = 0; l <= p; ++l) {
            double acc = -gamma_at(v, l);
            for (int i = 0; i < n; ++i)
                acc += v(i) * gamma_at(v, l - j[static_cast<std::size_t>(i)]);
            if (l == 0)
                acc += v(n);
            f(l) = acc;
        }
        return f;
    };

    const auto jacobian = [&](const Eigen::VectorXd& v) {
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(p + 1, dim);
        for (int l = 0; l <= p; ++l) {
            if (!matched[static_cast<std::size_t>(l)])
                jac(l, n + 1 + unknown_index[static_cast<std::size_t>(l)]) -= 1.0;
            for (int i = 0; i < n; ++i) {
                const int m = std::abs(l - j[static_cast<std::size_t>(i)]);
                jac(l, i) += gamma_at(v, m);
                if (!matched[static_cast<std::size_t>(m)])
                    jac(l, n + 1 + unknown_index[static_cast<std::size_t>(m)]) += v(i);
            }
        }
        jac(0, n) += 1.0;
        return jac;
    };

    const double tol = 1e-12 * std::max(1.0, target(0));
    constexpr int max_iter = 200;
    Eigen::VectorXd f = residual(x);
    bool converged = f.lpNorm<Eigen::Infinity>() <= tol;
    for (int it = 0; it < max_iter && !converged; ++it) {
        const Eigen::MatrixXd jac = jacobian(x);
        const Eigen::VectorXd step = jac.fullPivLu().solve(-f);
        if (!step.allFinite())
            throw ConvergenceError("fit_nonlinear: singular Newton step");
        // Backtracking damping on ||f||^2.
        const double f0 = f.squaredNorm();
        double alpha = 1.0;
        Eigen::VectorXd x_new, f_new;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            x_new = x + alpha * step;
            f_new = residual(x_new);
            if (f_new.squaredNorm() < f0 || f_new.lpNorm<Eigen::Infinity>() <= tol) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError("fit_nonlinear: damped Newton made no progress");
        x = x_new;
        f = f_new;
        converged = f.lpNorm<Eigen::Infinity>() <= tol;
    }
    if (!converged)
        throw ConvergenceError("fit_nonlinear: no convergence within 200 iterations");

    const double b2 = x(n);
    if (b2 < 0.0)
        throw TargetNotRealizableError("fit_nonlinear: negative noise variance b^2 = "
                                       + std::to_string(b2));
    return RestrictedARModel(std::move(j), std::vector<double>(x.data(), x.data() + n),
                             std::sqrt(b2));
}

double ar_spectrum(const RestrictedARModel& model, double k_nd, double k_max,
                   double variance_scale)
{
    if (!(k_max > 0.0) || !(variance_scale > 0.0))
        throw std::invalid_argument("ar_spectrum: k_max and variance scale must be > 0");
    if (!(k_nd >= 0.0) || k_nd > k_max * (1.0 + 1e-12))
        throw std::domain_error("ar_spectrum: wavenumber outside [0, k_max]");
    std::complex<double> denom(1.0, 0.0);
    const double omega = M_PI * k_nd / k_max;
    for (int i = 0; i < model.n_terms(); ++i) {
        const double jl = model.lags()[static_cast<std::size_t>(i)];
        denom -= model.coeffs()[static_cast<std::size_t>(i)]
            * std::exp(std::complex<double>(0.0, -jl * omega));
    }
    const double b = model.noise_coeff();
    return b * b / variance_scale / std::norm(denom) / k_max;
}

double ar_spectrum_from_autocovariance(const RestrictedARModel& model, double k_nd,
                                       double k_max, double variance_scale)
{
    if (!(k_max > 0.0) || !(variance_scale > 0.0))
        throw std::invalid_argument("ar_spectrum: k_max and variance scale must be > 0");
    if (!(k_nd >= 0.0) || k_nd > k_max * (1.0 + 1e-12))
        throw std::domain_error("ar_spectrum: wavenumber outside [0, k_max]");

    // Extend until the last p values are all below the truncation threshold,
    // so zero-interleaved patterns are not cut off early.
    const int p = model.order();
    const std::vector<double> phi = model.dense_coeffs();
    std::vector<double> gamma = solve_autocov_subsystem(phi, model.noise_coeff(), p);
    constexpr int cap = 100000;
    const auto tail_small = [&]() {
        const std::size_t sz = gamma.size();
        for (std::size_t i = sz - static_cast<std::size_t>(p); i < sz; ++i)
            if (std::abs(gamma[i]) >= kSeriesTruncation)
                return false;
        return true;
    };
    while (static_cast<int>(gamma.size()) < cap && !tail_small()) {
        const std::size_t l = gamma.size();
        double acc = 0.0;
        for (int i = 1; i <= p; ++i)
            acc += phi[static_cast<std::size_t>(i - 1)] * gamma[l - static_cast<std::size_t>(i)];
        gamma.push_back(acc);
    }

    double s = gamma[0];
    for (std::size_t l = 1; l < gamma.size(); ++l) {
        if (std::abs(gamma[l]) < kSeriesTruncation)
            continue;
        s += 2.0 * gamma[l] * std::cos(M_PI * static_cast<double>(l) * k_nd / k_max);
    }
    return s / variance_scale / k_max;
}

double mse(const RestrictedARModel& model, const TargetAutocovariance& target, int max_lag_M)
{
    if (max_lag_M < 1)
        throw std::invalid_argument("mse: max lag M must be >= 1");
    if (!target.covers(max_lag_M))
        throw std::invalid_argument("mse: target must provide lags up to M");
    const auto gamma = theoretical_autocovariance(model, max_lag_M, AutocovMethod::direct_solve);
    double acc = 0.0;
    for (int l = 0; l <= max_lag_M; ++l) {
        const double e = target(l) - gamma[static_cast<std::size_t>(l)];
        acc += e * e;
    }
    return acc / max_lag_M;
}

} // namespace arcov
