#ifndef KDAG_EXACT_DIST_HPP
#define KDAG_EXACT_DIST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kdag/params.hpp"

namespace kdag {

/// Exact law of the red count at time n: probs[r] = P{red count = r}.
/// Mass is confined to [ell, ell + n - k] (red never decreases) and sums
/// to 1 within 1e-9, checked after the forward pass.
struct ExactDistribution {
    ModelParams params;
    uint64_t n = 0;
    std::vector<double> probs; // length n + 1

    std::string to_csv() const;  // columns r, prob (support window only)
    std::string to_json() const;
};

/// Exact first-flip-time mass: P{T = m} for m = k+1..n plus the censored
/// mass P{T > n}. Ties contribute with weight 1/2, mirroring the coin in
/// the majority estimate.
struct FlipTimeDistribution {
    ModelParams params;
    uint64_t n = 0;
    std::vector<double> mass; // mass[m - (k+1)] = P{T = m}
    double censored = 0.0;    // P{T > n}
};

inline constexpr uint64_t EXACT_FORWARD_MAX_N = 100'000;
inline constexpr uint64_t EXACT_FORWARD_WARN_N = 20'000;

/// Forward dynamic program over the red-count chain, O(n^2) kernel
/// evaluations. Hard guard at n <= 100000 (resource error beyond); a note
/// goes to stderr above 20000, where runtime grows to minutes.
ExactDistribution forward(const ModelParams& params, uint64_t n);

/// Exact probability that the majority estimate at time n disagrees with
/// the initial (red) majority: sum of mass strictly below n/2 plus half the
/// mass at an exact tie.
double exact_majority_error(const ModelParams& params, uint64_t n);
double exact_majority_error(const ExactDistribution& dist);

/// Forward pass on the chain killed at the first majority flip.
FlipTimeDistribution exact_flip_time_mass(const ModelParams& params, uint64_t n);

} // namespace kdag

#endif // KDAG_EXACT_DIST_HPP
