#pragma once

#include "arcov/ar.hpp"
#include "arcov/target.hpp"

#include <Eigen/Dense>

#include <vector>

namespace arcov {

/// Restricted VAR model z_t = sum_i A_{j_i} z_{t-j_i} + B eps_t for a
/// k-variate process, with B lower triangular (Cholesky convention) and
/// eps_t iid with unit covariance. Construction enforces stationarity of
/// the companion form.
class RestrictedVARModel {
public:
    RestrictedVARModel(int k, std::vector<int> j, std::vector<Eigen::MatrixXd> A,
                       Eigen::MatrixXd B);

    int dim() const { return k_; }
    const std::vector<int>& lags() const { return j_; }
    const std::vector<Eigen::MatrixXd>& coeff_matrices() const { return A_; }
    const Eigen::MatrixXd& noise_matrix() const { return B_; }

    int n_terms() const { return static_cast<int>(j_.size()); }
    int order() const { return j_.back(); }

    /// Dense regression matrices Phi_1..Phi_p, zero at lags not in j.
    std::vector<Eigen::MatrixXd> dense_coeff_matrices() const;

    /// Companion matrix of the VAR(1) expanded representation, size pk x pk.
    Eigen::MatrixXd companion_matrix() const;

private:
    int k_;
    std::vector<int> j_;
    std::vector<Eigen::MatrixXd> A_;
    Eigen::MatrixXd B_;
};

/// Fit a restricted VAR from a target covariance matrix function by the
/// block generalization A = Gamma_l . Gamma_{j,l}^{-1},
/// BB' = Gamma_0 - A . Gamma_j', with B recovered by Cholesky factorization.
///
/// Eigenvalues of BB' in [-1e-10, 0) are clamped to zero (reported through
/// *clamped when provided); smaller ones raise TargetNotRealizableError.
RestrictedVARModel fit_var_linear(const CovarianceMatrixFunction& target,
                                  const LagSelection& sel, bool* clamped = nullptr);

/// Exact covariance matrix function Gamma_0..Gamma_n through the VAR(1)
/// companion representation: solves the Kronecker-structured system
/// vec(Gamma*_0) = (I - Phi* (x) Phi*)^{-1} vec(Sigma* Sigma*') and then
/// applies the lag recursion. Refuses to build the (pk)^2-sized system when
/// p*k exceeds state_dim_guard (ResourceLimitError); use the VMA route then.
CovarianceMatrixFunction covariance_via_companion(const RestrictedVARModel& model, int n,
                                                  int state_dim_guard = 200);

/// Approximate covariance matrix function through the truncated VMA(q)
/// representation; exact in the limit q -> infinity. Lags above q are zero.
/// Diverging Psi weights (non-stationary recursion) raise an Error.
CovarianceMatrixFunction covariance_via_vma(const RestrictedVARModel& model, int q, int n);

/// Smallest q such that the lag-q VMA contribution is negligible against
/// the running Gamma_0 estimate (max-norm ratio below 1e-10), capped.
int suggest_vma_truncation(const RestrictedVARModel& model, int cap = 10000);

} // namespace arcov
