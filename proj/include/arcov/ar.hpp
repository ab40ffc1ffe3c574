#pragma once

#include "arcov/target.hpp"

#include <vector>

namespace arcov {

/// Regression-lag vector j and autocovariance-equation-lag vector l that
/// jointly define the linear fitting system. Both strictly increasing and
/// positive, with equal length N.
struct LagSelection {
    std::vector<int> j;
    std::vector<int> l;

    LagSelection(std::vector<int> j_, std::vector<int> l_);

    int n_terms() const { return static_cast<int>(j.size()); }
};

/// Restricted AR model z_t = sum_i a_{j_i} z_{t-j_i} + b eps_t.
///
/// The unrestricted AR(p) is the special case j = [1..p]. Construction
/// enforces stationarity: all characteristic roots strictly outside the
/// unit circle (companion spectral radius < 1 - 1e-10).
class RestrictedARModel {
public:
    RestrictedARModel(std::vector<int> j, std::vector<double> a, double b);

    const std::vector<int>& lags() const { return j_; }
    const std::vector<double>& coeffs() const { return a_; }
    double noise_coeff() const { return b_; }

    int n_terms() const { return static_cast<int>(j_.size()); }
    int order() const { return j_.back(); }

    /// Dense coefficients phi_1..phi_p with zeros at lags not in j.
    std::vector<double> dense_coeffs() const;

private:
    std::vector<int> j_;
    std::vector<double> a_;
    double b_;
};

/// Spectral radius of the companion matrix of the dense coefficients
/// phi_1..phi_p (coefficient of z_{t-i} is phi[i-1]).
double companion_spectral_radius(const std::vector<double>& phi);

enum class AutocovMethod {
    direct_solve, ///< one (n+1) x (n+1) linear solve
    recursive,    ///< (p+1) x (p+1) subsystem, then the lag recursion
};

/// First n+1 values of the theoretical autocovariance function of the model.
std::vector<double> theoretical_autocovariance(const RestrictedARModel& model, int n,
                                               AutocovMethod method = AutocovMethod::direct_solve);

/// Fit a restricted AR model from the target by the general linear
/// formulation: a = gamma_l . gamma_{j,l}^{-1}, b^2 = gamma_0 - a . gamma_j'.
/// With sel.j = sel.l = [1..p] this is the Yule-Walker solution.
///
/// Throws NonInvertibleTargetError when cond(gamma_{j,l}) > 1e12,
/// TargetNotRealizableError when b^2 < 0, std::invalid_argument when the
/// target is too short, NonStationaryModelError when the solution is not
/// a stationary model.
RestrictedARModel fit_linear(const TargetAutocovariance& target, const LagSelection& sel);

/// Exact-match strategy: solve the full system of autocovariance equations
/// for lags 0..p treating gamma at lags outside match_lags as unknowns.
/// match_lags must contain 0, be strictly increasing within [0, p], and have
/// length N+1. The returned model's theoretical autocovariance reproduces
/// the target exactly at every matched lag.
///
/// Solved by damped Newton iteration (residual tolerance 1e-12, at most 200
/// iterations); throws ConvergenceError when the budget is exhausted.
RestrictedARModel fit_nonlinear(const TargetAutocovariance& target, std::vector<int> j,
                                std::vector<int> match_lags);

/// One-sided AR spectrum from the model coefficients,
/// S(k) = (1/k_max) (b^2/variance_scale) / |1 - sum_n a_{j_n} e^{-i j_n pi k/k_max}|^2.
double ar_spectrum(const RestrictedARModel& model, double k_nd, double k_max,
                   double variance_scale = 1.0);

/// Same spectrum from the theoretical autocovariance function (cosine
/// series, truncated where the tail falls below 1e-12). Agrees with
/// ar_spectrum to high accuracy; kept as an independent route.
double ar_spectrum_from_autocovariance(const RestrictedARModel& model, double k_nd,
                                       double k_max, double variance_scale = 1.0);

/// Mean squared error between target and theoretical autocovariance,
/// MSE = (1/M) sum_{l=0}^{M} (gamma^T_l - gamma^AR_l)^2.
double mse(const RestrictedARModel& model, const TargetAutocovariance& target,
           int max_lag_M = 41);

} // namespace arcov
