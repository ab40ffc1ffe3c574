#include "arcov/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace arcov {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kZeta3 = 1.20205690315959428540;
constexpr int kMaxIter = 400;

struct GammaTerms {
    double gam1;  // (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
    double gam2;  // (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
    double gampl; // 1/Gamma(1+mu)
    double gammi; // 1/Gamma(1-mu)
};

// Reciprocal-gamma combinations needed by Temme's series. The direct
// formula for gam1 cancels catastrophically as mu -> 0, so a short Taylor
// series of 1/Gamma(1+z) takes over there.
GammaTerms gamma_terms(double mu)
{
    GammaTerms t;
    if (std::abs(mu) < 1e-4) {
        const double a1 = kEulerGamma;
        const double a2 = 0.5 * kEulerGamma * kEulerGamma - M_PI * M_PI / 12.0;
        const double a3 = std::pow(kEulerGamma, 3) / 6.0
            - kEulerGamma * M_PI * M_PI / 12.0 + kZeta3 / 3.0;
        t.gampl = 1.0 + mu * (a1 + mu * (a2 + mu * a3));
        t.gammi = 1.0 - mu * (a1 - mu * (a2 - mu * a3));
        t.gam1 = -(a1 + a3 * mu * mu);
        t.gam2 = 1.0 + a2 * mu * mu;
    } else {
        t.gampl = 1.0 / std::tgamma(1.0 + mu);
        t.gammi = 1.0 / std::tgamma(1.0 - mu);
        t.gam1 = (t.gammi - t.gampl) / (2.0 * mu);
        t.gam2 = (t.gammi + t.gampl) / 2.0;
    }
    return t;
}

// Temme's series for K_mu(x) and K_{mu+1}(x), |mu| <= 1/2, 0 < x <= 2.
void bessel_k_temme(double mu, double x, double& kmu, double& kmu1)
{
    const double eps = std::numeric_limits<double>::epsilon();
    const double mu2 = mu * mu;
    const double x2 = 0.5 * x;
    const double pimu = M_PI * mu;
    const double fact = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
    const GammaTerms g = gamma_terms(mu);

    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * eps) break;
    }
    kmu = sum;
    kmu1 = sum1 * 2.0 / x;
}

// Steed's continued fraction (CF2) for K_mu(x) and K_{mu+1}(x),
// |mu| <= 1/2, x > 2.
void bessel_k_cf2(double mu, double x, double& kmu, double& kmu1)
{
    const double eps = std::numeric_limits<double>::epsilon();
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

} // namespace

double bessel_k(double order, double x)
{
    if (!std::isfinite(x) || !std::isfinite(order) || x <= 0.0)
        throw std::domain_error("bessel_k: requires finite order and x > 0");

    const double nu = std::abs(order); // K_{-nu} = K_{nu}
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;

    double kmu = 0.0, kmu1 = 0.0;
    if (x <= 2.0)
        bessel_k_temme(mu, x, kmu, kmu1);
    else
        bessel_k_cf2(mu, x, kmu, kmu1);

    // K_{m+1}(x) = 2m/x K_m(x) + K_{m-1}(x); overflow saturates to +inf.
    for (int i = 1; i <= nl; ++i) {
        const double knext = (mu + i) * (2.0 / x) * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = knext;
    }
    return kmu;
}

double gamma_fn(double x)
{
    if (!std::isfinite(x))
        throw std::domain_error("gamma_fn: requires a finite argument");
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_fn: pole at zero or negative integer");
    return std::tgamma(x);
}

} // namespace arcov
