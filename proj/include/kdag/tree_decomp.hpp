#ifndef KDAG_TREE_DECOMP_HPP
#define KDAG_TREE_DECOMP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kdag/rng.hpp"
#include "kdag/stats.hpp"

namespace kdag {

/// Uniform random recursive tree (the k=1 graph) with the equivalent
/// mark/coin coloring: vertex i > 0 is marked with probability 2p, and a
/// marked vertex keeps its parent's color when its coin is +1 and flips it
/// when the coin is -1. Colors are +/-1 integers (+1 red); the root is red.
struct MarkedTree {
    std::vector<uint32_t> parent; // parent[0] unused; parent[i] < i
    std::vector<uint8_t> marked;  // marked[0] = 0 by convention
    std::vector<int8_t> coin;     // +/-1; drawn only where marked, else +1
    std::vector<int8_t> color;    // +/-1

    uint32_t vertex_count() const { return static_cast<uint32_t>(parent.size()); }
    std::string to_json() const;
};

/// The monochromatic-subtree decomposition of the color difference:
/// subtree_size[i] is the size of the maximal subtree rooted at i whose
/// vertices apart from i are all unmarked; delta is the red-minus-blue
/// count; remainder is the signed marked-subtree sum, so that
/// delta = subtree_size[0] + remainder exactly.
struct Decomposition {
    std::vector<int64_t> subtree_size;
    int64_t delta = 0;
    int64_t remainder = 0;
};

struct DeltaEstimate {
    double estimate = 0.0;
    WilsonInterval ci;
    uint64_t trials = 0;
};

/// Grows the tree on vertices 0..n (n+1 vertices) and colors it by the
/// mark/coin rule.
MarkedTree grow_marked_tree(double p, uint64_t n, RandomStream& rng);

/// One post-order pass; verifies delta = subtree_size[0] + remainder in
/// exact integer arithmetic and throws internal_error on violation.
Decomposition decompose(const MarkedTree& tree);

/// Monte Carlo estimate of P{delta > 0} with a Wilson 95% interval,
/// trial-parallel with per-trial substreams of (seed, trial).
DeltaEstimate estimate_delta_positive(double p, uint64_t n, uint64_t trials, uint64_t seed,
                                      unsigned threads = 0);

} // namespace kdag

#endif // KDAG_TREE_DECOMP_HPP
