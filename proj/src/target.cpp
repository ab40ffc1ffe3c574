#include "arcov/target.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace arcov {

TargetAutocovariance::TargetAutocovariance(std::vector<double> values, double delta_r)
    : values_(std::move(values)), delta_r_(delta_r)
{
    if (values_.empty())
        throw std::invalid_argument("target autocovariance: empty sequence");
    if (!std::isfinite(delta_r_) || !(delta_r_ > 0.0))
        throw std::invalid_argument("target autocovariance: delta_r must be finite and > 0");
    if (!(values_[0] > 0.0))
        throw std::invalid_argument("target autocovariance: gamma_0 must be > 0");
    for (double v : values_) {
        if (!std::isfinite(v))
            throw std::invalid_argument("target autocovariance: non-finite value");
        // Cauchy-Schwarz bound; allow roundoff at the boundary.
        if (std::abs(v) > values_[0] * (1.0 + 1e-12))
            throw std::invalid_argument(
                "target autocovariance: |gamma_l| exceeds gamma_0");
    }
}

double TargetAutocovariance::operator()(long l) const
{
    const long a = std::labs(l);
    if (a > max_lag())
        throw std::invalid_argument("target autocovariance: lag " + std::to_string(l)
                                    + " not available (max " + std::to_string(max_lag()) + ")");
    return values_[static_cast<std::size_t>(a)];
}

CovarianceMatrixFunction::CovarianceMatrixFunction(std::vector<Eigen::MatrixXd> mats,
                                                   double delta_r)
    : mats_(std::move(mats)), delta_r_(delta_r)
{
    if (mats_.empty())
        throw std::invalid_argument("covariance matrix function: empty sequence");
    if (!std::isfinite(delta_r_) || !(delta_r_ > 0.0))
        throw std::invalid_argument("covariance matrix function: delta_r must be finite and > 0");
    const auto k = mats_[0].rows();
    if (k < 1 || mats_[0].cols() != k)
        throw std::invalid_argument("covariance matrix function: Gamma_0 must be square");
    for (const auto& m : mats_) {
        if (m.rows() != k || m.cols() != k)
            throw std::invalid_argument("covariance matrix function: inconsistent dimensions");
        if (!m.allFinite())
            throw std::invalid_argument("covariance matrix function: non-finite entry");
    }
    const Eigen::MatrixXd& g0 = mats_[0];
    const double scale = g0.cwiseAbs().maxCoeff();
    if ((g0 - g0.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
        throw std::invalid_argument("covariance matrix function: Gamma_0 not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g0 + g0.transpose()),
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(scale, 1.0))
        throw std::invalid_argument(
            "covariance matrix function: Gamma_0 not positive semi-definite");
}

Eigen::MatrixXd CovarianceMatrixFunction::at(long l) const
{
    const long a = std::labs(l);
    if (a > max_lag())
        throw std::invalid_argument("covariance matrix function: lag " + std::to_string(l)
                                    + " not available (max " + std::to_string(max_lag()) + ")");
    if (l >= 0)
        return mats_[static_cast<std::size_t>(a)];
    return mats_[static_cast<std::size_t>(a)].transpose();
}

} // namespace arcov
