#include "kdag/exact_dist.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include <json.hpp>

#include "kdag/analytic.hpp"
#include "kdag/errors.hpp"
#include "kdag/io_util.hpp"

namespace kdag {

namespace {

void check_horizon(const ModelParams& params, uint64_t n) {
    params.validate();
    if (n < static_cast<uint64_t>(params.k))
        throw invalid_parameter("n must be >= k");
    if (n > EXACT_FORWARD_MAX_N)
        throw resource_limit("exact forward pass capped at n = " +
                             std::to_string(EXACT_FORWARD_MAX_N) + ", got " + std::to_string(n));
    if (n > EXACT_FORWARD_WARN_N)
        std::cerr << "note: exact forward pass at n = " << n
                  << " is O(n^2) and may take minutes\n";
}

double transition_red(const ModelParams& params, uint64_t red, uint64_t m) {
    return majority_tail(params.k,
                         flip_map(params.p, static_cast<double>(red) / static_cast<double>(m)));
}

void check_conservation(double total, const char* what) {
    if (std::fabs(total - 1.0) > 1e-9)
        throw internal_error(std::string(what) + ": probability mass deviates from 1 by " +
                             fmt_double(total - 1.0));
}

} // namespace

ExactDistribution forward(const ModelParams& params, uint64_t n) {
    check_horizon(params, n);
    const auto k = static_cast<uint64_t>(params.k);
    const auto ell = static_cast<uint64_t>(params.ell);

    ExactDistribution dist{params, n, std::vector<double>(n + 1, 0.0)};
    dist.probs[ell] = 1.0;
    std::vector<double> next(n + 1, 0.0);

    for (uint64_t m = k; m < n; ++m) {
        const uint64_t hi = ell + (m - k); // top of the reachable window at time m
        for (uint64_t r = ell; r <= hi; ++r)
            next[r] = 0.0;
        next[hi + 1] = 0.0;
        for (uint64_t r = ell; r <= hi; ++r) {
            const double mass = dist.probs[r];
            if (mass == 0.0)
                continue;
            const double q = transition_red(params, r, m);
            next[r + 1] += mass * q;
            next[r] += mass * (1.0 - q);
        }
        for (uint64_t r = ell; r <= hi + 1; ++r)
            dist.probs[r] = next[r];
    }

    double total = 0.0;
    for (double v : dist.probs)
        total += v;
    check_conservation(total, "forward");
    return dist;
}

double exact_majority_error(const ExactDistribution& dist) {
    const uint64_t n = dist.n;
    double err = 0.0;
    for (uint64_t r = 0; 2 * r < n; ++r)
        err += dist.probs[r];
    if (n % 2 == 0)
        err += 0.5 * dist.probs[n / 2];
    return err;
}

double exact_majority_error(const ModelParams& params, uint64_t n) {
    return exact_majority_error(forward(params, n));
}

FlipTimeDistribution exact_flip_time_mass(const ModelParams& params, uint64_t n) {
    check_horizon(params, n);
    const auto k = static_cast<uint64_t>(params.k);
    const auto ell = static_cast<uint64_t>(params.ell);

    // alive[r] = P{red count = r at time m and the majority never flipped}.
    std::vector<double> alive(n + 1, 0.0), next(n + 1, 0.0);
    alive[ell] = 1.0;
    FlipTimeDistribution result{params, n, std::vector<double>(n > k ? n - k : 0, 0.0), 0.0};

    for (uint64_t m = k; m < n; ++m) {
        const uint64_t hi = ell + (m - k);
        for (uint64_t r = ell; r <= hi + 1; ++r)
            next[r] = 0.0;
        for (uint64_t r = ell; r <= hi; ++r) {
            const double mass = alive[r];
            if (mass == 0.0)
                continue;
            const double q = transition_red(params, r, m);
            next[r + 1] += mass * q;
            next[r] += mass * (1.0 - q);
        }
        // Kill at time m+1: majority strictly blue dies, an exact tie dies
        // with the coin's weight 1/2.
        const uint64_t now = m + 1;
        double& killed = result.mass[now - (k + 1)];
        for (uint64_t r = ell; r <= hi + 1; ++r) {
            if (2 * r < now) {
                killed += next[r];
                next[r] = 0.0;
            } else if (2 * r == now) {
                killed += 0.5 * next[r];
                next[r] *= 0.5;
            }
        }
        for (uint64_t r = ell; r <= hi + 1; ++r)
            alive[r] = next[r];
    }

    double total = 0.0;
    for (uint64_t r = ell; r <= ell + (n - k); ++r)
        total += alive[r];
    result.censored = total;
    double grand = total;
    for (double v : result.mass)
        grand += v;
    check_conservation(grand, "exact_flip_time_mass");
    return result;
}

std::string ExactDistribution::to_csv() const {
    const auto k = static_cast<uint64_t>(params.k);
    const auto ell = static_cast<uint64_t>(params.ell);
    std::string out = "r,prob\n";
    for (uint64_t r = ell; r <= ell + (n - k); ++r)
        out += std::to_string(r) + "," + fmt_double(probs[r]) + "\n";
    return out;
}

std::string ExactDistribution::to_json() const {
    nlohmann::json j;
    j["k"] = params.k;
    j["p"] = params.p;
    j["ell"] = params.ell;
    j["n"] = n;
    j["probs"] = probs;
    j["majority_error"] = exact_majority_error(*this);
    return j.dump() + "\n";
}

} // namespace kdag
