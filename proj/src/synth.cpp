#include "arcov/synth.hpp"
#include "arcov/rng.hpp"

#include <stdexcept>

namespace arcov {

void SynthesisConfig::validate() const
{
    if (length < 1)
        throw std::invalid_argument("synthesis: length must be >= 1");
    if (n_realizations < 1)
        throw std::invalid_argument("synthesis: need at least one realization");
}

std::vector<std::vector<double>> synthesize_ar(const RestrictedARModel& model,
                                               const SynthesisConfig& config)
{
    config.validate();
    const int n_terms = model.n_terms();
    const auto& j = model.lags();
    const auto& a = model.coeffs();
    const double b = model.noise_coeff();
    const std::size_t p = static_cast<std::size_t>(model.order());
    const std::size_t total = config.burn_in + config.length;

    std::vector<std::vector<double>> out(config.n_realizations);
    for (std::size_t r = 0; r < config.n_realizations; ++r) {
        NormalStream eps(config.rng_seed, r);
        std::vector<double> z(p + total, 0.0); // p leading zeros = initial state
        for (std::size_t t = p; t < z.size(); ++t) {
            double acc = b * eps.next();
            for (int i = 0; i < n_terms; ++i)
                acc += a[static_cast<std::size_t>(i)]
                    * z[t - static_cast<std::size_t>(j[static_cast<std::size_t>(i)])];
            z[t] = acc;
        }
        out[r].assign(z.begin() + static_cast<std::ptrdiff_t>(p + config.burn_in), z.end());
    }
    return out;
}

std::vector<Eigen::MatrixXd> synthesize_var(const RestrictedVARModel& model,
                                            const SynthesisConfig& config)
{
    config.validate();
    const int k = model.dim();
    const int n_terms = model.n_terms();
    const auto& j = model.lags();
    const auto& a = model.coeff_matrices();
    const Eigen::MatrixXd& b = model.noise_matrix();
    const std::size_t p = static_cast<std::size_t>(model.order());
    const std::size_t total = config.burn_in + config.length;

    std::vector<Eigen::MatrixXd> out(config.n_realizations);
    Eigen::VectorXd noise(k);
    for (std::size_t r = 0; r < config.n_realizations; ++r) {
        NormalStream eps(config.rng_seed, r);
        Eigen::MatrixXd z = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(p + total));
        for (std::size_t t = p; t < p + total; ++t) {
            for (int c = 0; c < k; ++c)
                noise(c) = eps.next();
            Eigen::VectorXd zt = b * noise;
            for (int i = 0; i < n_terms; ++i)
                zt += a[static_cast<std::size_t>(i)]
                    * z.col(static_cast<Eigen::Index>(t - static_cast<std::size_t>(
                                j[static_cast<std::size_t>(i)])));
            z.col(static_cast<Eigen::Index>(t)) = zt;
        }
        out[r] = z.rightCols(static_cast<Eigen::Index>(config.length));
    }
    return out;
}

std::vector<double> sample_autocovariance(const std::vector<double>& series, int max_lag)
{
    const std::size_t t_len = series.size();
    if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= t_len)
        throw std::invalid_argument("sample autocovariance: max lag must be < series length");
    std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int l = 0; l <= max_lag; ++l) {
        double acc = 0.0;
        for (std::size_t t = static_cast<std::size_t>(l); t < t_len; ++t)
            acc += series[t] * series[t - static_cast<std::size_t>(l)];
        gamma[static_cast<std::size_t>(l)] = acc / static_cast<double>(t_len);
    }
    return gamma;
}

std::vector<Eigen::MatrixXd> sample_autocovariance(const Eigen::MatrixXd& series, int max_lag)
{
    const Eigen::Index t_len = series.cols();
    const Eigen::Index k = series.rows();
    if (max_lag < 0 || max_lag >= t_len)
        throw std::invalid_argument("sample autocovariance: max lag must be < series length");
    std::vector<Eigen::MatrixXd> gamma;
    gamma.reserve(static_cast<std::size_t>(max_lag) + 1);
    for (int l = 0; l <= max_lag; ++l) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index t = l; t < t_len; ++t)
            acc += series.col(t) * series.col(t - l).transpose();
        gamma.push_back(acc / static_cast<double>(t_len));
    }
    return gamma;
}

EnsembleEstimate ensemble_autocovariance(const std::vector<std::vector<double>>& realizations,
                                         int max_lag)
{
    if (realizations.empty())
        throw std::invalid_argument("ensemble autocovariance: no realizations");
    EnsembleEstimate est;
    est.n_realizations = static_cast<int>(realizations.size());
    est.max_lag = max_lag;
    est.gamma_e.assign(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (const auto& z : realizations) {
        const auto g = sample_autocovariance(z, max_lag);
        for (std::size_t l = 0; l < g.size(); ++l)
            est.gamma_e[l] += g[l];
    }
    for (auto& v : est.gamma_e)
        v /= static_cast<double>(est.n_realizations);
    return est;
}

EnsembleMatrixEstimate ensemble_autocovariance(const std::vector<Eigen::MatrixXd>& realizations,
                                               int max_lag)
{
    if (realizations.empty())
        throw std::invalid_argument("ensemble autocovariance: no realizations");
    EnsembleMatrixEstimate est;
    est.n_realizations = static_cast<int>(realizations.size());
    est.max_lag = max_lag;
    const Eigen::Index k = realizations[0].rows();
    est.gamma_e.assign(static_cast<std::size_t>(max_lag) + 1, Eigen::MatrixXd::Zero(k, k));
    for (const auto& z : realizations) {
        const auto g = sample_autocovariance(z, max_lag);
        for (std::size_t l = 0; l < g.size(); ++l)
            est.gamma_e[l] += g[l];
    }
    for (auto& m : est.gamma_e)
        m /= static_cast<double>(est.n_realizations);
    return est;
}

} // namespace arcov
