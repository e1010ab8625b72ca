#include "kdag/analytic.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "kdag/errors.hpp"
#include "kdag/special_functions.hpp"

namespace kdag {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Low: return "Low";
        case Regime::Intermediate: return "Intermediate";
        case Regime::High: return "High";
    }
    return "?";
}

namespace {

// Largest k for which the defining sum of alpha_k stays in exact integer
// doubles: C(49,24)*49 < 2^53 and the partial sums stay below 2^53 as well.
constexpr int ALPHA_EXACT_MAX_K = 49;

double alpha_exact_small_k(int k) {
    // Pascal row C(k, .), all entries exact.
    std::vector<double> row(static_cast<size_t>(k) + 1, 1.0);
    for (int n = 2; n <= k; ++n)
        for (int i = n - 1; i >= 1; --i)
            row[static_cast<size_t>(i)] += row[static_cast<size_t>(i) - 1];

    // sum_{i > k/2} C(k,i) (2i - k), an integer; dividing by 2^{k-1} is exact.
    double sum = 0.0;
    for (int i = (k + 1) / 2; i <= k; ++i)
        sum += row[static_cast<size_t>(i)] * static_cast<double>(2 * i - k);
    return sum / std::exp2(k - 1);
}

double alpha_log_space(int k) {
    const double log_scale = static_cast<double>(k - 1) * std::log(2.0);
    double sum = 0.0, carry = 0.0;
    for (int i = (k + 1) / 2; i <= k; ++i) {
        const double term =
            std::exp(log_choose(k, i) + std::log(static_cast<double>(2 * i - k)) - log_scale);
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

double alpha(int k) {
    validate_k(k);
    if (k <= ALPHA_EXACT_MAX_K)
        return alpha_exact_small_k(k);
    return alpha_log_space(k);
}

double flip_map(double p, double t) {
    validate_p(p);
    validate_unit(t, "t");
    return (1.0 - 2.0 * p) * t + p;
}

double majority_tail_binomial(int k, double x) {
    validate_k(k);
    validate_unit(x, "x");
    return binomial_upper_tail(k, (k + 1) / 2, x);
}

double majority_tail_beta(int k, double x) {
    validate_k(k);
    validate_unit(x, "x");
    const double a = (static_cast<double>(k) + 1.0) / 2.0;
    return regularized_incomplete_beta(a, a, x);
}

double majority_tail(int k, double x) {
    validate_k(k);
    validate_unit(x, "x");
    if (k <= 64)
        return majority_tail_binomial(k, x);
    return majority_tail_beta(k, x);
}

double drift(int k, double p, double t) {
    // Evaluate through the mirror identity g(t) = -g(1-t) when the signal
    // probability exceeds 1/2: the direct form loses the sub-ulp tail of
    // majority_tail near 1 (g(1) would round to 0 instead of a tiny
    // negative), and the shared arithmetic makes antisymmetry bit-exact.
    const double f = flip_map(p, t);
    if (f > 0.5) {
        const double mirrored = 1.0 - t;
        return -(majority_tail(k, flip_map(p, mirrored)) - mirrored);
    }
    return majority_tail(k, f) - t;
}

double drift_derivative(int k, double p, double t) {
    validate_k(k);
    validate_p(p);
    validate_unit(t, "t");
    const double f = flip_map(p, t);
    const double half_km1 = static_cast<double>(k - 1) / 2.0;
    const double a = (static_cast<double>(k) + 1.0) / 2.0;
    const double log_gamma_ratio = std::lgamma(static_cast<double>(k) + 1.0) - 2.0 * std::lgamma(a);

    const double ff = f * (1.0 - f);
    double power_term;
    if (k == 1) {
        power_term = std::exp(log_gamma_ratio);
    } else if (ff <= 0.0) {
        power_term = 0.0;
    } else {
        power_term = std::exp(log_gamma_ratio + half_km1 * std::log(ff));
    }
    return (1.0 - 2.0 * p) * power_term - 1.0;
}

std::pair<double, double> thresholds(int k) {
    const double a = alpha(k);
    return {0.5 - 1.0 / (2.0 * a), 0.5 - 1.0 / (4.0 * a)};
}

RegimeReport classify_regime(int k, double p) {
    validate_k(k);
    validate_p(p);
    RegimeReport report;
    report.k = k;
    report.p = p;
    report.alpha_k = alpha(k);
    report.p_low = 0.5 - 1.0 / (2.0 * report.alpha_k);
    report.p_high = 0.5 - 1.0 / (4.0 * report.alpha_k);
    if (p < report.p_low)
        report.regime = Regime::Low;
    else if (p < report.p_high)
        report.regime = Regime::Intermediate;
    else
        report.regime = Regime::High;

    if (report.regime == Regime::Low && p > 0.0) {
        const auto [b1, b2] = find_betas(k, p);
        report.beta1 = b1;
        report.beta2 = b2;
    }
    return report;
}

std::pair<double, double> find_betas(int k, double p) {
    validate_k(k);
    validate_p(p);
    const double p_low = thresholds(k).first;
    if (!(p < p_low))
        throw regime_error("fixed points exist only in the low regime (p < " +
                           std::to_string(p_low) + "), got p=" + std::to_string(p));
    if (p == 0.0)
        throw degenerate_parameter("at p = 0 the lower zero of the drift collapses onto 0");

    constexpr double EDGE = 1e-12;
    constexpr double TOL = 1e-12;
    double lo = EDGE;
    double hi = 0.5 - EDGE;
    if (drift(k, p, lo) <= 0.0) {
        // For large k at small p the lower zero sits below 1e-12; fall back
        // to the endpoint, where the drift is P{Bin(k, p) > k/2} > 0.
        lo = 0.0;
        if (drift(k, p, lo) <= 0.0)
            throw degenerate_parameter("drift is not positive at the left bracket edge");
    }
    if (drift(k, p, hi) >= 0.0)
        throw degenerate_parameter("p is too close to the low threshold to certify a sign bracket");

    while (hi - lo > TOL) {
        const double mid = 0.5 * (lo + hi);
        if (drift(k, p, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double beta1 = 0.5 * (lo + hi);
    return {beta1, 1.0 - beta1};
}

std::optional<double> beta1_upper_bound(int k, double p) {
    validate_k(k);
    validate_p(p);
    const double C = std::sqrt(8.0 * std::log(2.0) / M_PI);
    if (p > 0.5 - C / (2.0 * alpha(k)))
        return std::nullopt;
    const double s = 1.0 - 2.0 * p;
    return std::exp(-static_cast<double>(k) * s * s / 8.0);
}

ErrorLowerBound error_lower_bound(int k, int ell) {
    validate_k(k);
    if (ell == k)
        throw not_applicable("the error lower bound requires ell < k strictly");
    if (k < 3 || 2 * ell <= k || ell > k)
        throw invalid_parameter("error_lower_bound: requires odd k >= 3 and k/2 < ell < k");

    const double a = (static_cast<double>(k) + 1.0) / 2.0;
    ErrorLowerBound result;
    result.h_k = 1.0 - regularized_incomplete_beta(a, a, 1.0 - 1.0 / static_cast<double>(k));
    result.bound = 0.5 * std::pow(result.h_k, static_cast<double>(2 * ell - k));
    return result;
}

} // namespace kdag
