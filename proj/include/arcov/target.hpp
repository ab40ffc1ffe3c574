#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace arcov {

/// Discrete target autocovariance sequence gamma^T_0..gamma^T_n together
/// with the sampling step that produced it.
///
/// Lag access is symmetric: operator()(l) returns gamma_{|l|}, so the
/// reflection gamma_{-l} = gamma_l is applied on access and never stored.
class TargetAutocovariance {
public:
    /// Validates: non-empty, values[0] > 0, |gamma_l| <= gamma_0, delta_r > 0.
    TargetAutocovariance(std::vector<double> values, double delta_r);

    const std::vector<double>& values() const { return values_; }
    double delta_r() const { return delta_r_; }

    /// Largest available lag index n.
    int max_lag() const { return static_cast<int>(values_.size()) - 1; }

    /// gamma_{|l|}; throws std::invalid_argument when |l| exceeds max_lag().
    double operator()(long l) const;

    /// True when every lag in [0, lag] is available.
    bool covers(long lag) const { return std::abs(lag) <= max_lag(); }

private:
    std::vector<double> values_;
    double delta_r_;
};

/// Sequence of k x k covariance matrices Gamma_0..Gamma_n of a k-variate
/// stationary process. Gamma_{-l} = Gamma_l' is applied on access.
class CovarianceMatrixFunction {
public:
    /// Validates: non-empty, consistent square dimensions, Gamma_0 symmetric
    /// positive semi-definite (eigenvalues >= -1e-10 * scale).
    explicit CovarianceMatrixFunction(std::vector<Eigen::MatrixXd> mats,
                                      double delta_r = 1.0);

    int dim() const { return static_cast<int>(mats_[0].rows()); }
    double delta_r() const { return delta_r_; }
    int max_lag() const { return static_cast<int>(mats_.size()) - 1; }
    const std::vector<Eigen::MatrixXd>& matrices() const { return mats_; }

    /// Gamma_l for any sign of l; throws std::invalid_argument when
    /// |l| exceeds max_lag().
    Eigen::MatrixXd at(long l) const;

private:
    std::vector<Eigen::MatrixXd> mats_;
    double delta_r_;
};

} // namespace arcov
