#include "arcov/turbulence.hpp"
#include "arcov/special.hpp"

#include <cmath>
#include <stdexcept>

namespace arcov {

IsotropicModel::IsotropicModel(double gamma_exponent_, double length_scale_,
                               double sigma0_sq_)
    : gamma_exponent(gamma_exponent_), length_scale(length_scale_), sigma0_sq(sigma0_sq_)
{
    validate();
}

void IsotropicModel::validate() const
{
    if (!std::isfinite(gamma_exponent) || !(gamma_exponent > 0.5))
        throw std::invalid_argument("isotropic model: gamma exponent must be finite and > 1/2");
    if (!std::isfinite(length_scale) || !(length_scale > 0.0))
        throw std::invalid_argument("isotropic model: length scale must be finite and > 0");
    if (!std::isfinite(sigma0_sq) || !(sigma0_sq > 0.0))
        throw std::invalid_argument("isotropic model: sigma0^2 must be finite and > 0");
}

double lambda_ratio(const IsotropicModel& model)
{
    model.validate();
    const double g = model.gamma_exponent;
    return gamma_fn(0.5) * gamma_fn(g) / gamma_fn(g - 0.5);
}

double longitudinal_f(double r_nd, const IsotropicModel& model)
{
    model.validate();
    if (!(r_nd >= 0.0))
        throw std::invalid_argument("longitudinal_f: separation must be >= 0");
    if (r_nd < 1e-8)
        return 1.0; // normalized correlation; K_nu diverges at the origin
    const double nu = model.gamma_exponent - 0.5;
    return 2.0 / gamma_fn(nu) * std::pow(0.5 * r_nd, nu) * bessel_k(nu, r_nd);
}

double transverse_g(double r_nd, const IsotropicModel& model)
{
    model.validate();
    if (!(r_nd >= 0.0))
        throw std::invalid_argument("transverse_g: separation must be >= 0");
    if (r_nd < 1e-8)
        return 1.0;
    const double g = model.gamma_exponent;
    const double nu = g - 0.5;
    return longitudinal_f(r_nd, model)
        - 2.0 / gamma_fn(nu) * std::pow(0.5 * r_nd, g + 0.5) * bessel_k(g - 1.5, r_nd);
}

Eigen::Matrix3d covariance_tensor(const Eigen::Vector3d& r_vec, const IsotropicModel& model)
{
    model.validate();
    if (!r_vec.allFinite())
        throw std::invalid_argument("covariance_tensor: non-finite separation");
    const double r = r_vec.norm();
    if (r == 0.0)
        return model.sigma0_sq * Eigen::Matrix3d::Identity();
    const double r_nd = r / model.length_scale;
    const double f = longitudinal_f(r_nd, model);
    const double g = transverse_g(r_nd, model);
    Eigen::Matrix3d out = (f - g) / (r * r) * (r_vec * r_vec.transpose());
    out += g * Eigen::Matrix3d::Identity();
    return model.sigma0_sq * out;
}

TargetAutocovariance make_target(const IsotropicModel& model, double delta_r_nd, int n_lags)
{
    model.validate();
    if (!(delta_r_nd > 0.0))
        throw std::invalid_argument("make_target: delta_r must be > 0");
    if (n_lags < 1)
        throw std::invalid_argument("make_target: need at least one lag");
    std::vector<double> values(static_cast<std::size_t>(n_lags) + 1);
    for (int l = 0; l <= n_lags; ++l)
        values[static_cast<std::size_t>(l)] = longitudinal_f(l * delta_r_nd, model);
    return TargetAutocovariance(std::move(values), delta_r_nd);
}

CovarianceMatrixFunction make_two_point_target(const IsotropicModel& model,
                                               double delta_r_nd, double delta_y_nd,
                                               int n_lags)
{
    model.validate();
    if (!(delta_r_nd > 0.0))
        throw std::invalid_argument("make_two_point_target: delta_r must be > 0");
    if (delta_y_nd < 0.0)
        throw std::invalid_argument("make_two_point_target: delta_y must be >= 0");
    if (n_lags < 1)
        throw std::invalid_argument("make_two_point_target: need at least one lag");

    // Non-dimensional (1,1) tensor component at separation (x, dy, 0).
    const auto r11 = [&](double x, double dy) {
        const double rho = std::hypot(x, dy);
        if (rho < 1e-12)
            return 1.0;
        const double f = longitudinal_f(rho, model);
        const double g = transverse_g(rho, model);
        return (f - g) * x * x / (rho * rho) + g;
    };

    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(static_cast<std::size_t>(n_lags) + 1);
    for (int l = 0; l <= n_lags; ++l) {
        const double x = l * delta_r_nd;
        Eigen::MatrixXd m(2, 2);
        const double diag = longitudinal_f(x, model);
        const double off = r11(x, delta_y_nd);
        m << diag, off, off, diag;
        mats.push_back(std::move(m));
    }
    return CovarianceMatrixFunction(std::move(mats), delta_r_nd);
}

double von_karman_spectrum(double k_nd, const IsotropicModel& model)
{
    model.validate();
    if (!(k_nd >= 0.0))
        throw std::invalid_argument("von_karman_spectrum: wavenumber must be >= 0");
    const double g = model.gamma_exponent;
    const double pref = gamma_fn(g) / (std::sqrt(M_PI) * gamma_fn(g - 0.5));
    return pref * 2.0 * k_nd / std::pow(1.0 + k_nd * k_nd, g);
}

double max_wavenumber(double delta_r, FrequencyConvention convention)
{
    if (!(delta_r > 0.0))
        throw std::invalid_argument("max_wavenumber: delta_r must be > 0");
    const double cyc = 1.0 / (2.0 * delta_r);
    return convention == FrequencyConvention::cyclic ? cyc : 2.0 * M_PI * cyc;
}

double target_spectrum(const TargetAutocovariance& target, double k_nd,
                       FrequencyConvention convention)
{
    const double k_max = max_wavenumber(target.delta_r(), convention);
    if (!(k_nd >= 0.0) || k_nd > k_max * (1.0 + 1e-12))
        throw std::domain_error("target_spectrum: wavenumber outside [0, k_max]");
    double s = target(0);
    for (int l = 1; l <= target.max_lag(); ++l) {
        const double gl = target(l);
        if (std::abs(gl) < 1e-12)
            continue;
        s += 2.0 * gl * std::cos(M_PI * l * k_nd / k_max);
    }
    return s / k_max;
}

double target_spectrum_peak(const TargetAutocovariance& target,
                            FrequencyConvention convention)
{
    const double k_max = max_wavenumber(target.delta_r(), convention);
    const auto premult = [&](double k) { return k * target_spectrum(target, k, convention); };

    const int n_grid = 4096;
    double best_k = 0.0, best_v = 0.0;
    for (int i = 1; i <= n_grid; ++i) {
        const double k = k_max * i / n_grid;
        const double v = premult(k);
        if (v > best_v) {
            best_v = v;
            best_k = k;
        }
    }
    // Golden-section refinement around the best grid cell.
    double lo = std::max(0.0, best_k - k_max / n_grid);
    double hi = std::min(k_max, best_k + k_max / n_grid);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = premult(a), fb = premult(b);
    while (hi - lo > 1e-10 * k_max) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + gr * (hi - lo);
            fb = premult(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - gr * (hi - lo);
            fa = premult(a);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace arcov
