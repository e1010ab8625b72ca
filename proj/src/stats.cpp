#include "kdag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kdag/errors.hpp"
#include "kdag/special_functions.hpp"

namespace kdag {

WilsonInterval wilson_interval(uint64_t successes, uint64_t trials, double z) {
    if (trials == 0)
        throw invalid_parameter("wilson_interval: trials must be >= 1");
    if (successes > trials)
        throw invalid_parameter("wilson_interval: successes exceed trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0)
        ci.lo = 0.0;
    if (successes == trials)
        ci.hi = 1.0;
    return ci;
}

double chi_square_sf(double statistic, int dof) {
    if (dof < 1)
        throw invalid_parameter("chi_square_sf: dof must be >= 1");
    if (statistic <= 0.0)
        return 1.0;
    return regularized_gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

double chi_square_two_sample_pvalue(std::span<const uint64_t> counts_a,
                                    std::span<const uint64_t> counts_b,
                                    double min_expected) {
    if (counts_a.size() != counts_b.size())
        throw invalid_parameter("two-sample chi-square: histograms differ in length");

    // Pool adjacent bins until each pooled bin has enough combined mass.
    std::vector<double> a, b;
    double acc_a = 0.0, acc_b = 0.0;
    for (size_t i = 0; i < counts_a.size(); ++i) {
        acc_a += static_cast<double>(counts_a[i]);
        acc_b += static_cast<double>(counts_b[i]);
        if (acc_a + acc_b >= min_expected) {
            a.push_back(acc_a);
            b.push_back(acc_b);
            acc_a = acc_b = 0.0;
        }
    }
    if (acc_a + acc_b > 0.0) {
        if (a.empty()) {
            a.push_back(acc_a);
            b.push_back(acc_b);
        } else {
            a.back() += acc_a;
            b.back() += acc_b;
        }
    }
    if (a.size() < 2)
        return 1.0;

    double total_a = 0.0, total_b = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        total_a += a[i];
        total_b += b[i];
    }
    if (total_a == 0.0 || total_b == 0.0)
        throw invalid_parameter("two-sample chi-square: a sample is empty");

    const double ratio_ab = std::sqrt(total_b / total_a);
    const double ratio_ba = std::sqrt(total_a / total_b);
    double stat = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] * ratio_ab - b[i] * ratio_ba;
        const double s = a[i] + b[i];
        if (s > 0.0)
            stat += d * d / s;
    }
    return chi_square_sf(stat, static_cast<int>(a.size()) - 1);
}

double sign_symmetry_pvalue(uint64_t positives, uint64_t negatives) {
    const double a = static_cast<double>(positives);
    const double b = static_cast<double>(negatives);
    if (a + b == 0.0)
        return 1.0;
    const double stat = (a - b) * (a - b) / (a + b);
    return chi_square_sf(stat, 1);
}

} // namespace kdag
