#ifndef KDAG_ANALYTIC_HPP
#define KDAG_ANALYTIC_HPP

#include <optional>
#include <utility>

#include "kdag/params.hpp"

namespace kdag {

enum class Regime { Low, Intermediate, High };

const char* regime_name(Regime r);

/// Everything the mutation probability decides for a given k: the drift
/// slope constant alpha_k, the two regime thresholds, the regime label,
/// and — in the low regime with p > 0 — the stable fixed points beta1 < 1/2
/// and beta2 = 1 - beta1 of the drift function.
struct RegimeReport {
    int k = 0;
    double p = 0.0;
    double alpha_k = 0.0;
    double p_low = 0.0;
    double p_high = 0.0;
    Regime regime = Regime::High;
    std::optional<double> beta1;
    std::optional<double> beta2;
};

/// alpha_k = 2^{-(k-2)} * sum_{i > k/2} C(k,i) (i - k/2)
///         = 4 E[(Bin(k,1/2) - k/2)_+].
/// Exact for k <= 49 (all intermediates are integers below 2^53);
/// log-space with compensated summation beyond, safe past k = 10^4.
double alpha(int k);

/// Probability that an observed parent signal is red when the red
/// proportion is t: f(t) = (1-2p) t + p. Satisfies f(1-t) = 1 - f(t).
double flip_map(double p, double t);

/// P{Bin(k, x) >= (k+1)/2}: the chance a new vertex turns red when each
/// of its k observed signals is independently red with probability x.
/// Direct log-space summation for k <= 64, regularized incomplete beta
/// of parameters ((k+1)/2, (k+1)/2) above.
double majority_tail(int k, double x);

/// The two internal evaluation routes of majority_tail, exposed so the
/// identity between them can be checked independently.
double majority_tail_binomial(int k, double x);
double majority_tail_beta(int k, double x);

/// One-step drift of the red proportion at R_n = t:
/// g(t) = majority_tail(k, f(t)) - t. Antisymmetric about 1/2.
double drift(int k, double p, double t);

/// Closed-form derivative of the drift:
/// g'(t) = (1-2p) (f(t)(1-f(t)))^{(k-1)/2} Gamma(k+1)/Gamma^2((k+1)/2) - 1.
/// At t = 1/2 this equals (1-2p) alpha_k - 1.
double drift_derivative(int k, double p, double t);

/// (p_low, p_high) = (1/2 - 1/(2 alpha_k), 1/2 - 1/(4 alpha_k)).
/// Below p_low the red proportion locks onto one of two off-center fixed
/// points; from p_high up the majority vote degrades to a coin toss.
std::pair<double, double> thresholds(int k);

/// Regime label plus fixed points where they exist. Boundary placement:
/// Low is p < p_low, Intermediate is p_low <= p < p_high, High is p >= p_high.
RegimeReport classify_regime(int k, double p);

/// The nontrivial zeros of the drift in the low regime: beta1 in (0, 1/2)
/// by bisection to absolute tolerance 1e-12, beta2 = 1 - beta1.
/// Throws regime_error outside the low regime and degenerate_parameter at
/// p = 0, where the lower zero collapses onto 0.
std::pair<double, double> find_betas(int k, double p);

/// exp(-k (1-2p)^2 / 8), an upper bound on beta1 valid whenever
/// p <= 1/2 - C/(2 alpha_k) with C = sqrt(8 ln 2 / pi); absent otherwise.
std::optional<double> beta1_upper_bound(int k, double p);

struct ErrorLowerBound {
    double h_k = 0.0;   // P{Beta((k+1)/2, (k+1)/2) >= 1 - 1/k}
    double bound = 0.0; // (1/2) h_k^{2 ell - k}
};

/// Universal lower bound on the majority-rule error probability, valid for
/// every p in [0, 1/2] and every n >= 2 ell. Requires k >= 3 and
/// k/2 < ell < k; ell = k is rejected with not_applicable.
ErrorLowerBound error_lower_bound(int k, int ell);

} // namespace kdag

#endif // KDAG_ANALYTIC_HPP
