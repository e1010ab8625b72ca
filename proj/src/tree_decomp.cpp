#include "kdag/tree_decomp.hpp"

#include <string>

#include <json.hpp>

#include "kdag/errors.hpp"
#include "kdag/params.hpp"
#include "kdag/parallel.hpp"

namespace kdag {

MarkedTree grow_marked_tree(double p, uint64_t n, RandomStream& rng) {
    validate_p(p);
    if (n < 1)
        throw invalid_parameter("marked tree needs n >= 1 (vertices 0..n)");

    const uint64_t count = n + 1;
    MarkedTree tree;
    tree.parent.resize(count, 0);
    tree.marked.resize(count, 0);
    tree.coin.resize(count, 1);
    tree.color.resize(count, 1); // root is red

    const double mark_prob = 2.0 * p;
    for (uint64_t i = 1; i < count; ++i) {
        const auto parent = static_cast<uint32_t>(rng.uniform_below(i));
        tree.parent[i] = parent;
        int8_t color = tree.color[parent];
        if (rng.bernoulli(mark_prob)) {
            tree.marked[i] = 1;
            // Rademacher coin, drawn only for marked vertices (equal in law
            // to drawing it for every vertex).
            if (rng.coin()) {
                tree.coin[i] = -1;
                color = static_cast<int8_t>(-color);
            }
        }
        tree.color[i] = color;
    }
    return tree;
}

Decomposition decompose(const MarkedTree& tree) {
    const uint32_t count = tree.vertex_count();
    if (count == 0)
        throw invalid_parameter("decompose: empty tree");

    Decomposition d;
    d.subtree_size.assign(count, 1);
    // Parents precede children, so one reverse sweep is a post-order pass:
    // unmarked vertices merge their unmarked-subtree into the parent's.
    for (uint32_t i = count - 1; i >= 1; --i)
        if (!tree.marked[i])
            d.subtree_size[tree.parent[i]] += d.subtree_size[i];

    for (uint32_t i = 0; i < count; ++i)
        d.delta += tree.color[i];
    for (uint32_t i = 1; i < count; ++i)
        if (tree.marked[i])
            d.remainder += d.subtree_size[i] * tree.color[tree.parent[i]] * tree.coin[i];

    if (d.delta != d.subtree_size[0] + d.remainder)
        throw internal_error("subtree decomposition identity violated: delta=" +
                             std::to_string(d.delta) + " vs " +
                             std::to_string(d.subtree_size[0] + d.remainder));
    return d;
}

DeltaEstimate estimate_delta_positive(double p, uint64_t n, uint64_t trials, uint64_t seed,
                                      unsigned threads) {
    validate_p(p);
    if (trials == 0)
        throw invalid_parameter("trials must be >= 1");

    std::vector<uint8_t> positive(trials, 0);
    parallel_for_index(trials, threads, [&](uint64_t trial) {
        RandomStream rng(seed, trial);
        const MarkedTree tree = grow_marked_tree(p, n, rng);
        const Decomposition d = decompose(tree);
        positive[trial] = d.delta > 0 ? 1 : 0;
    });

    uint64_t hits = 0;
    for (uint8_t v : positive)
        hits += v;
    return {static_cast<double>(hits) / static_cast<double>(trials),
            wilson_interval(hits, trials), trials};
}

std::string MarkedTree::to_json() const {
    nlohmann::json j;
    j["n"] = vertex_count() - 1;
    j["parent"] = parent;
    j["marked"] = marked;
    j["coin"] = coin;
    j["color"] = color;
    return j.dump() + "\n";
}

} // namespace kdag
