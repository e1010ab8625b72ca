#ifndef KDAG_URN_SIM_HPP
#define KDAG_URN_SIM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "kdag/params.hpp"
#include "kdag/rng.hpp"

namespace kdag {

/// Red-count-only state of the process: n balls of which `red` are red.
/// Equivalent in law to the DAG's color counts, at a fraction of the cost.
struct UrnState {
    uint64_t n = 0;
    uint64_t red = 0;

    double red_proportion() const {
        return static_cast<double>(red) / static_cast<double>(n);
    }
};

struct RecordMode {
    enum class Kind { Full, Thinned };
    Kind kind = Kind::Full;
    uint64_t stride = 1;

    static RecordMode full() { return {Kind::Full, 1}; }
    static RecordMode thinned(uint64_t stride);
};

struct TrajectoryPoint {
    uint64_t n = 0;
    uint64_t red = 0;
};

/// A recorded path of the urn process from time k to the horizon.
struct Trajectory {
    ModelParams params;
    uint64_t seed = 0;
    uint64_t stream_id = 0;
    std::vector<TrajectoryPoint> points;
};

/// One urn step: the new ball is red with probability
/// majority_tail(k, flip_map(p, red/n)) — a single Bernoulli draw, equal in
/// law to drawing k balls with replacement, flipping each observation with
/// probability p and taking the majority.
UrnState urn_step(const UrnState& state, const ModelParams& params, RandomStream& rng);

/// Runs the urn from (k, ell) to the horizon, recording per RecordMode
/// (Full: every time; Thinned: every stride-th time plus the final state).
Trajectory run_urn(const ModelParams& params, uint64_t horizon, RandomStream& rng,
                   RecordMode record = RecordMode::full());

/// First time n <= horizon at which the majority estimate differs from Red
/// (exact integer tie detection; ties resolved by a fair coin). Empty if the
/// majority never flipped by the horizon (censored).
std::optional<uint64_t> first_flip_time(const ModelParams& params, uint64_t horizon,
                                        RandomStream& rng);

} // namespace kdag

#endif // KDAG_URN_SIM_HPP
