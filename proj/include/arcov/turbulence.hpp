#pragma once

#include "arcov/target.hpp"

#include <Eigen/Dense>

namespace arcov {

/// Stationary homogeneous isotropic turbulence model in the generalized
/// von Karman form. The default exponent is the von Karman value 5/6.
struct IsotropicModel {
    double gamma_exponent = 5.0 / 6.0; ///< spectral exponent, > 1/2
    double length_scale = 1.0;         ///< length scale L of the 3D energy spectrum
    double sigma0_sq = 1.0;            ///< isotropic variance parameter sigma_0^2

    IsotropicModel() = default;
    IsotropicModel(double gamma_exponent, double length_scale, double sigma0_sq);

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// lambda = Gamma(1/2) Gamma(g) / Gamma(g - 1/2); the longitudinal integral
/// length scale is L_u^x = lambda * L. About 0.747 for the default model.
double lambda_ratio(const IsotropicModel& model = {});

/// Longitudinal correlation function f at non-dimensional separation r/L.
/// f(0) = 1 exactly (analytic branch for r_nd < 1e-8).
double longitudinal_f(double r_nd, const IsotropicModel& model = {});

/// Transverse correlation function g at non-dimensional separation r/L.
/// Satisfies the incompressibility relation g = f + (r/2) df/dr.
double transverse_g(double r_nd, const IsotropicModel& model = {});

/// 3x3 covariance tensor R(r) = sigma0^2 ([f-g] r r'/|r|^2 + g I) between
/// two points separated by r_vec (in length units of the model).
Eigen::Matrix3d covariance_tensor(const Eigen::Vector3d& r_vec,
                                  const IsotropicModel& model = {});

/// Discrete non-dimensional target gamma^T_l = f(l * delta_r_nd), l = 0..n_lags.
TargetAutocovariance make_target(const IsotropicModel& model, double delta_r_nd,
                                 int n_lags);

/// Two-point target for the longitudinal component at transverse separation
/// delta_y_nd: 2x2 matrices with f(l dr) on the diagonal and the (1,1) tensor
/// component at separation (l dr, dy, 0) off the diagonal. Time lags map to
/// streamwise separation l * delta_r_nd (frozen-field convention).
CovarianceMatrixFunction make_two_point_target(const IsotropicModel& model,
                                               double delta_r_nd, double delta_y_nd,
                                               int n_lags);

/// Non-dimensional one-sided von Karman spectrum as published,
/// S(k) = Gamma(g)/(sqrt(pi) Gamma(g-1/2)) * 2k / (1+k^2)^g.
/// Note this form carries a factor k (premultiplied): it vanishes at k = 0,
/// peaks at sqrt(1/(2g-1)), and recovers the unit variance as
/// integral of S(k)/k dk = 1 over (0, inf).
double von_karman_spectrum(double k_nd, const IsotropicModel& model = {});

/// Wavenumber-axis convention for discrete spectra.
enum class FrequencyConvention {
    cyclic,  ///< k_max = 1/(2 dr)
    angular, ///< k_max = 2 pi/(2 dr)
};

/// Nyquist wavenumber for sampling step delta_r under the given convention.
double max_wavenumber(double delta_r,
                      FrequencyConvention convention = FrequencyConvention::cyclic);

/// Aliased spectrum of the discrete target,
/// S^T(k) = (1/k_max) [gamma_0 + 2 sum_l gamma_l cos(pi l k / k_max)],
/// with terms below 1e-12 in magnitude dropped.
/// Throws std::domain_error for k_nd outside [0, k_max].
double target_spectrum(const TargetAutocovariance& target, double k_nd,
                       FrequencyConvention convention = FrequencyConvention::cyclic);

/// Location of the maximum of the premultiplied target spectrum k * S^T(k),
/// found on a dense grid refined by golden-section search. This is the
/// "spectral peak" as conventionally plotted for turbulence spectra.
double target_spectrum_peak(const TargetAutocovariance& target,
                            FrequencyConvention convention = FrequencyConvention::angular);

} // namespace arcov
