#include "kdag/urn_sim.hpp"

#include <string>

#include "kdag/analytic.hpp"
#include "kdag/errors.hpp"

namespace kdag {

namespace {
constexpr uint64_t MAX_URN_STEPS = 10'000'000;
}

RecordMode RecordMode::thinned(uint64_t stride) {
    if (stride == 0)
        throw invalid_parameter("thinning stride must be >= 1");
    return {Kind::Thinned, stride};
}

UrnState urn_step(const UrnState& state, const ModelParams& params, RandomStream& rng) {
    const double q = majority_tail(params.k, flip_map(params.p, state.red_proportion()));
    UrnState next{state.n + 1, state.red};
    if (rng.bernoulli(q))
        ++next.red;
    return next;
}

Trajectory run_urn(const ModelParams& params, uint64_t horizon, RandomStream& rng,
                   RecordMode record) {
    params.validate();
    const auto k = static_cast<uint64_t>(params.k);
    if (horizon < k)
        throw invalid_parameter("horizon must be >= k");
    if (horizon - k > MAX_URN_STEPS)
        throw resource_limit("urn horizon capped at k + " + std::to_string(MAX_URN_STEPS) +
                             " steps");

    Trajectory traj{params, rng.seed(), rng.stream_id(), {}};
    UrnState state{k, static_cast<uint64_t>(params.ell)};
    traj.points.push_back({state.n, state.red});
    for (uint64_t n = k; n < horizon; ++n) {
        state = urn_step(state, params, rng);
        const bool due = record.kind == RecordMode::Kind::Full
                             ? true
                             : ((state.n - k) % record.stride == 0 || state.n == horizon);
        if (due)
            traj.points.push_back({state.n, state.red});
    }
    return traj;
}

std::optional<uint64_t> first_flip_time(const ModelParams& params, uint64_t horizon,
                                        RandomStream& rng) {
    params.validate();
    const auto k = static_cast<uint64_t>(params.k);
    if (horizon < k)
        throw invalid_parameter("horizon must be >= k");
    if (horizon - k > MAX_URN_STEPS)
        throw resource_limit("urn horizon capped at k + " + std::to_string(MAX_URN_STEPS) +
                             " steps");

    UrnState state{k, static_cast<uint64_t>(params.ell)};
    for (uint64_t n = k; n < horizon; ++n) {
        state = urn_step(state, params, rng);
        const uint64_t twice_red = 2 * state.red;
        if (twice_red < state.n)
            return state.n;
        if (twice_red == state.n && rng.coin())
            return state.n;
    }
    return std::nullopt;
}

} // namespace kdag
