#pragma once

namespace arcov {

/// Modified Bessel function of the second kind, K_nu(x), for real order.
///
/// Uses Temme's series for x <= 2 and Steed's continued fraction for x > 2,
/// with upward recurrence in the order. Relative accuracy is better than
/// 1e-10 for x in [1e-6, 50] and order in [-1, 2]; K_{-nu} = K_{nu}.
/// Overflow near x = 0 saturates to +infinity instead of throwing.
///
/// Throws std::domain_error for x <= 0 or non-finite arguments.
double bessel_k(double order, double x);

/// Gamma function with explicit pole detection.
///
/// Throws std::domain_error when x is zero or a negative integer.
double gamma_fn(double x);

} // namespace arcov
