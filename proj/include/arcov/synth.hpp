#pragma once

#include "arcov/ar.hpp"
#include "arcov/var.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace arcov {

/// Settings for sequential synthesis of realizations.
struct SynthesisConfig {
    std::size_t length = 0;         ///< samples kept per realization
    std::size_t n_realizations = 1;
    std::size_t burn_in = 0;        ///< leading samples discarded
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Generate realizations of the AR model with standard-normal innovations.
/// Initial state is zero; the first burn_in samples are dropped. Each
/// realization uses its own RNG substream, so results are deterministic per
/// (seed, realization index) and independent of generation order.
std::vector<std::vector<double>> synthesize_ar(const RestrictedARModel& model,
                                               const SynthesisConfig& config);

/// Vector-valued counterpart; realization r is a k x length matrix whose
/// column t is z_t. A k = 1 model reproduces the AR path bit for bit.
std::vector<Eigen::MatrixXd> synthesize_var(const RestrictedVARModel& model,
                                            const SynthesisConfig& config);

/// Biased sample autocovariance of a zero-mean series,
/// gamma_hat_l = (1/T) sum_{t=l}^{T-1} z_t z_{t-l}, l = 0..max_lag.
std::vector<double> sample_autocovariance(const std::vector<double>& series, int max_lag);

/// Matrix version for a k x T realization:
/// Gamma_hat_l = (1/T) sum_{t=l}^{T-1} z_t z_{t-l}'.
std::vector<Eigen::MatrixXd> sample_autocovariance(const Eigen::MatrixXd& series, int max_lag);

/// Ensemble autocovariance: pointwise mean of per-realization sample
/// autocovariance functions.
struct EnsembleEstimate {
    std::vector<double> gamma_e;
    int n_realizations = 0;
    int max_lag = 0;
};

struct EnsembleMatrixEstimate {
    std::vector<Eigen::MatrixXd> gamma_e;
    int n_realizations = 0;
    int max_lag = 0;
};

EnsembleEstimate ensemble_autocovariance(const std::vector<std::vector<double>>& realizations,
                                         int max_lag);

EnsembleMatrixEstimate ensemble_autocovariance(const std::vector<Eigen::MatrixXd>& realizations,
                                               int max_lag);

} // namespace arcov
