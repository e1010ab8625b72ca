#ifndef KDAG_STATS_HPP
#define KDAG_STATS_HPP

#include <cstdint>
#include <span>

namespace kdag {

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for a Bernoulli proportion; z defaults to the
/// two-sided 95% normal quantile. Behaves correctly at 0 and n successes,
/// unlike the normal approximation.
WilsonInterval wilson_interval(uint64_t successes, uint64_t trials,
                               double z = 1.959963984540054);

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom (upper tail probability of the statistic).
double chi_square_sf(double statistic, int dof);

/// Two-sample chi-square homogeneity statistic for a pair of histograms on
/// the same support. Bins are pooled left to right until each pooled bin
/// holds at least `min_expected` counts in both samples combined. Returns
/// the p-value; dof = pooled bins - 1.
double chi_square_two_sample_pvalue(std::span<const uint64_t> counts_a,
                                    std::span<const uint64_t> counts_b,
                                    double min_expected = 5.0);

/// One-degree chi-square test that positives and negatives are equally
/// likely: statistic (a - b)^2 / (a + b). Returns the p-value (1 when
/// a + b = 0).
double sign_symmetry_pvalue(uint64_t positives, uint64_t negatives);

} // namespace kdag

#endif // KDAG_STATS_HPP
