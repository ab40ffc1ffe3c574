#include "arcov/var.hpp"
#include "arcov/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace arcov {

namespace {

constexpr double kStationarityTol = 1e-10;
constexpr double kConditionLimit = 1e12;
constexpr double kClampTol = 1e-10;

// Lower-triangular Cholesky factor with nonnegative diagonal; tolerates
// positive semi-definite input by zeroing columns whose pivot underflows.
Eigen::MatrixXd cholesky_psd(const Eigen::MatrixXd& m, double tol)
{
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c <= i; ++c) {
            double acc = m(i, c);
            for (int s = 0; s < c; ++s)
                acc -= l(i, s) * l(c, s);
            if (i == c) {
                if (acc < -tol)
                    throw TargetNotRealizableError(
                        "cholesky: matrix is not positive semi-definite");
                l(i, i) = acc > tol ? std::sqrt(acc) : 0.0;
            } else {
                l(i, c) = l(c, c) > 0.0 ? acc / l(c, c) : 0.0;
            }
        }
    }
    return l;
}

} // namespace

RestrictedVARModel::RestrictedVARModel(int k, std::vector<int> j,
                                       std::vector<Eigen::MatrixXd> A, Eigen::MatrixXd B)
    : k_(k), j_(std::move(j)), A_(std::move(A)), B_(std::move(B))
{
    if (k_ < 1)
        throw std::invalid_argument("VAR model: dimension must be >= 1");
    if (j_.empty() || A_.size() != j_.size())
        throw std::invalid_argument("VAR model: coefficient count must match lag count");
    int prev = 0;
    for (int x : j_) {
        if (x <= prev)
            throw std::invalid_argument("VAR model: lags must be strictly increasing and positive");
        prev = x;
    }
    for (const auto& a : A_)
        if (a.rows() != k_ || a.cols() != k_ || !a.allFinite())
            throw std::invalid_argument("VAR model: coefficient matrices must be finite k x k");
    if (B_.rows() != k_ || B_.cols() != k_ || !B_.allFinite())
        throw std::invalid_argument("VAR model: noise matrix must be finite k x k");
    const double scale = std::max(B_.cwiseAbs().maxCoeff(), 1.0);
    for (int r = 0; r < k_; ++r) {
        for (int c = r + 1; c < k_; ++c)
            if (std::abs(B_(r, c)) > 1e-12 * scale)
                throw std::invalid_argument("VAR model: noise matrix must be lower triangular");
        if (B_(r, r) < 0.0)
            throw std::invalid_argument("VAR model: noise matrix diagonal must be >= 0");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion_matrix(), /*computeEigenvectors=*/false);
    const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0 - kStationarityTol))
        throw NonStationaryModelError("VAR model: companion spectral radius "
                                      + std::to_string(radius) + " is not < 1");
}

std::vector<Eigen::MatrixXd> RestrictedVARModel::dense_coeff_matrices() const
{
    std::vector<Eigen::MatrixXd> phi(static_cast<std::size_t>(order()),
                                     Eigen::MatrixXd::Zero(k_, k_));
    for (std::size_t i = 0; i < j_.size(); ++i)
        phi[static_cast<std::size_t>(j_[i] - 1)] = A_[i];
    return phi;
}

Eigen::MatrixXd RestrictedVARModel::companion_matrix() const
{
    const int p = order();
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p * k_, p * k_);
    const auto phi = dense_coeff_matrices();
    for (int i = 0; i < p; ++i)
        comp.block(0, i * k_, k_, k_) = phi[static_cast<std::size_t>(i)];
    if (p > 1)
        comp.block(k_, 0, (p - 1) * k_, (p - 1) * k_).setIdentity();
    return comp;
}

RestrictedVARModel fit_var_linear(const CovarianceMatrixFunction& target,
                                  const LagSelection& sel, bool* clamped)
{
    if (clamped)
        *clamped = false;
    const int k = target.dim();
    const int n = sel.n_terms();

    int needed = 0;
    for (int m = 0; m < n; ++m) {
        needed = std::max(needed, sel.l[static_cast<std::size_t>(m)]);
        needed = std::max(needed, sel.j[static_cast<std::size_t>(m)]);
        for (int i = 0; i < n; ++i)
            needed = std::max(needed, std::abs(sel.l[static_cast<std::size_t>(m)]
                                               - sel.j[static_cast<std::size_t>(i)]));
    }
    if (needed > target.max_lag())
        throw std::invalid_argument("fit_var_linear: target provides lags up to "
                                    + std::to_string(target.max_lag()) + " but lag "
                                    + std::to_string(needed) + " is required");

    // Block system Gamma_l = A . Gamma_{j,l} with block (i, m) = Gamma_{l_m - j_i}.
    Eigen::MatrixXd gjl(k * n, k * n);
    Eigen::MatrixXd gl(k, k * n);
    for (int m = 0; m < n; ++m) {
        gl.block(0, m * k, k, k) = target.at(sel.l[static_cast<std::size_t>(m)]);
        for (int i = 0; i < n; ++i)
            gjl.block(i * k, m * k, k, k) = target.at(sel.l[static_cast<std::size_t>(m)]
                                                      - sel.j[static_cast<std::size_t>(i)]);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gjl);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > kConditionLimit)
        throw NonInvertibleTargetError(
            "fit_var_linear: block lag matrix is singular or ill-conditioned");

    // A . Gamma_{j,l} = Gamma_l  <=>  Gamma_{j,l}' A' = Gamma_l'.
    const Eigen::MatrixXd a_stack =
        gjl.transpose().partialPivLu().solve(gl.transpose()).transpose();

    std::vector<Eigen::MatrixXd> a_mats;
    a_mats.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        a_mats.push_back(a_stack.block(0, i * k, k, k));

    Eigen::MatrixXd bbt = target.at(0);
    for (int i = 0; i < n; ++i)
        bbt -= a_mats[static_cast<std::size_t>(i)]
            * target.at(sel.j[static_cast<std::size_t>(i)]).transpose();
    bbt = 0.5 * (bbt + bbt.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bbt);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kClampTol)
        throw TargetNotRealizableError(
            "fit_var_linear: BB' has eigenvalue " + std::to_string(min_eig));
    if (min_eig < 0.0 && clamped)
        *clamped = true;

    const Eigen::MatrixXd b = cholesky_psd(bbt, kClampTol);
    return RestrictedVARModel(k, sel.j, std::move(a_mats), b);
}

CovarianceMatrixFunction covariance_via_companion(const RestrictedVARModel& model, int n,
                                                  int state_dim_guard)
{
    if (n < 0)
        throw std::invalid_argument("covariance_via_companion: n must be >= 0");
    const int k = model.dim();
    const int p = model.order();
    const int pk = p * k;
    if (pk > state_dim_guard)
        throw ResourceLimitError(
            "covariance_via_companion: companion state dimension " + std::to_string(pk)
            + " exceeds the guard " + std::to_string(state_dim_guard)
            + "; use covariance_via_vma for large systems");

    // vec(Gamma*_0) = (I - Phi* (x) Phi*)^{-1} vec(Sigma* Sigma*'), column form.
    const Eigen::MatrixXd comp = model.companion_matrix();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(pk, pk);
    q.topLeftCorner(k, k) = model.noise_matrix() * model.noise_matrix().transpose();

    const int dim = pk * pk;
    Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(dim, dim);
    for (int c = 0; c < pk; ++c)
        for (int r = 0; r < pk; ++r)
            sys.block(r * pk, c * pk, pk, pk) -= comp(r, c) * comp;
    const Eigen::VectorXd vec_q = Eigen::Map<const Eigen::VectorXd>(q.data(), dim);
    const Eigen::VectorXd vec_g = sys.partialPivLu().solve(vec_q);
    if (!vec_g.allFinite())
        throw Error("covariance_via_companion: singular Kronecker system");
    const Eigen::MatrixXd g_star = Eigen::Map<const Eigen::MatrixXd>(vec_g.data(), pk, pk);

    // Top block row of Gamma*_0 holds Gamma_0 .. Gamma_{p-1}.
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(static_cast<std::size_t>(std::max(n, p)) + 1);
    for (int l = 0; l < p; ++l)
        mats.push_back(g_star.block(0, l * k, k, k));

    const auto phi = model.dense_coeff_matrices();
    const auto gamma_signed = [&](int lag) {
        return lag >= 0 ? mats[static_cast<std::size_t>(lag)]
                        : Eigen::MatrixXd(mats[static_cast<std::size_t>(-lag)].transpose());
    };
    for (int l = p; l <= n; ++l) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
        for (int i = 1; i <= p; ++i)
            acc += phi[static_cast<std::size_t>(i - 1)] * gamma_signed(l - i);
        mats.push_back(std::move(acc));
    }
    mats.resize(static_cast<std::size_t>(n) + 1);
    return CovarianceMatrixFunction(std::move(mats));
}

CovarianceMatrixFunction covariance_via_vma(const RestrictedVARModel& model, int q, int n)
{
    if (q < 0 || n < 0)
        throw std::invalid_argument("covariance_via_vma: q and n must be >= 0");
    const int k = model.dim();
    const int p = model.order();
    const auto phi = model.dense_coeff_matrices();

    // Psi_0 = I, Psi_i = sum_{m=1}^{min(i,p)} Phi_m Psi_{i-m}.
    std::vector<Eigen::MatrixXd> psi;
    psi.reserve(static_cast<std::size_t>(q) + 1);
    psi.push_back(Eigen::MatrixXd::Identity(k, k));
    for (int i = 1; i <= q; ++i) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
        for (int m = 1; m <= std::min(i, p); ++m)
            acc += phi[static_cast<std::size_t>(m - 1)] * psi[static_cast<std::size_t>(i - m)];
        if (acc.cwiseAbs().maxCoeff() > 1e6)
            throw Error("covariance_via_vma: VMA weights diverge (non-stationary model)");
        psi.push_back(std::move(acc));
    }

    const Eigen::MatrixXd bbt = model.noise_matrix() * model.noise_matrix().transpose();
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(static_cast<std::size_t>(n) + 1);
    for (int l = 0; l <= n; ++l) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
        for (int i = l; i <= q; ++i)
            acc += psi[static_cast<std::size_t>(i)] * bbt
                * psi[static_cast<std::size_t>(i - l)].transpose();
        mats.push_back(std::move(acc));
    }
    return CovarianceMatrixFunction(std::move(mats));
}

int suggest_vma_truncation(const RestrictedVARModel& model, int cap)
{
    const int k = model.dim();
    const int p = model.order();
    const auto phi = model.dense_coeff_matrices();
    const Eigen::MatrixXd bbt = model.noise_matrix() * model.noise_matrix().transpose();

    std::vector<Eigen::MatrixXd> psi;
    psi.push_back(Eigen::MatrixXd::Identity(k, k));
    double gamma0_scale = bbt.cwiseAbs().maxCoeff();
    for (int i = 1; i <= cap; ++i) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
        for (int m = 1; m <= std::min(i, p); ++m)
            acc += phi[static_cast<std::size_t>(m - 1)] * psi[static_cast<std::size_t>(i - m)];
        psi.push_back(acc);
        const double contrib = (acc * bbt).cwiseAbs().maxCoeff();
        gamma0_scale += (acc * bbt * acc.transpose()).cwiseAbs().maxCoeff();
        if (contrib < 1e-10 * gamma0_scale)
            return i;
    }
    return cap;
}

} // namespace arcov
