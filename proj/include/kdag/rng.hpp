#ifndef KDAG_RNG_HPP
#define KDAG_RNG_HPP

#include <cstdint>

namespace kdag {

/// Counter-based pseudo-random stream keyed by (seed, stream_id).
///
/// The state advances by a fixed odd constant and each output is a full
/// avalanche of the counter (splitmix64), so the same key yields a
/// bit-identical sequence on every platform and draws can run in any number
/// of parallel streams without coordination. Trial-level parallelism derives
/// one stream per trial from (master seed, stream_id).
class RandomStream {
public:
    RandomStream(uint64_t seed, uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id),
          state_(mix(seed + GOLDEN) ^ mix(stream_id + 2 * GOLDEN)) {}

    uint64_t next_u64() {
        state_ += GOLDEN;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    /// Fair coin.
    bool coin() { return (next_u64() >> 63) != 0; }

    /// Unbiased uniform integer in [0, bound). Lemire's multiply-reject method;
    /// fully deterministic given the u64 stream.
    uint64_t uniform_below(uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            const uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }

private:
    static constexpr uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t seed_;
    uint64_t stream_id_;
    uint64_t state_;
};

} // namespace kdag

#endif // KDAG_RNG_HPP
