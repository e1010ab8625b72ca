#ifndef KDAG_SPECIAL_FUNCTIONS_HPP
#define KDAG_SPECIAL_FUNCTIONS_HPP

#include <cstdint>

namespace kdag {

/// log(n!) — table-backed for small n, lgamma beyond.
double log_factorial(int64_t n);

/// log C(n, k); requires 0 <= k <= n.
double log_choose(int64_t n, int64_t k);

/// Upper binomial tail P{Bin(n, x) >= m}, summed in log space with
/// compensated accumulation. Exact at x = 0, 1.
double binomial_upper_tail(int n, int m, double x);

/// Regularized incomplete beta I_x(a, b) via the standard continued
/// fraction (modified Lentz), tolerance 1e-14, at most 500 iterations.
double regularized_incomplete_beta(double a, double b, double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

} // namespace kdag

#endif // KDAG_SPECIAL_FUNCTIONS_HPP
