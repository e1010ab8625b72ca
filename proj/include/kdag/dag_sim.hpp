#ifndef KDAG_DAG_SIM_HPP
#define KDAG_DAG_SIM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kdag/params.hpp"
#include "kdag/rng.hpp"

namespace kdag {

enum class Color : uint8_t { Blue = 0, Red = 1 };

enum class DagFormat { EdgeListCsv, Dot, Json };

/// The realized recursive DAG: one color per vertex and, for every vertex
/// past the k roots, its sorted list of distinct parents (all with smaller
/// index). Vertices are 0-based; 0..k-1 are the roots, of which 0..ell-1
/// are red. Immutable after growth.
class KDag {
public:
    KDag(ModelParams params, uint64_t seed, uint64_t stream_id);

    uint32_t vertex_count() const { return static_cast<uint32_t>(colors_.size()); }
    Color color(uint32_t v) const { return colors_[v]; }
    std::span<const Color> colors() const { return colors_; }

    std::span<const uint32_t> parents_of(uint32_t v) const {
        return {parent_data_.data() + parent_offsets_[v],
                parent_offsets_[v + 1] - parent_offsets_[v]};
    }

    uint64_t red_count() const { return red_count_; }
    const ModelParams& params() const { return params_; }
    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }

    /// Red counts over all prefixes: entry m-k is the red count at time m,
    /// for m = k..n. Colors never change once assigned, so the whole
    /// history is recoverable from the final graph.
    std::vector<uint64_t> red_count_path() const;

private:
    friend KDag grow(const ModelParams&, uint64_t, RandomStream&);
    friend KDag parse_dag_json(const std::string&);

    void append_vertex(Color c, std::vector<uint32_t> sorted_distinct_parents);

    ModelParams params_;
    uint64_t seed_ = 0;
    uint64_t stream_id_ = 0;
    uint64_t red_count_ = 0;
    std::vector<Color> colors_;
    std::vector<uint32_t> parent_data_;
    std::vector<uint32_t> parent_offsets_; // size n+1
};

/// Grows the DAG to n vertices. Each new vertex samples k parent indices
/// uniformly with replacement among the existing vertices, observes each
/// selection's color through an independent flip with probability p (one
/// flip per selection, repeats included), takes the majority of the k
/// votes, and keeps only the distinct edges.
KDag grow(const ModelParams& params, uint64_t n, RandomStream& rng);

/// Red proportion R_n = (red count) / n.
double red_proportion(const KDag& dag);

/// Majority estimate of the initial color: Red if R_n > 1/2, Blue if
/// R_n < 1/2, a fair coin on an exact tie (decided by integer comparison).
Color majority_bit(const KDag& dag, RandomStream& rng);

/// Deterministic serialization. CSV is the bare edge list (header
/// "child,parent", LF endings); DOT carries colors as vertex attributes;
/// JSON carries the full state and round-trips through parse_dag_json.
std::string export_edges(const KDag& dag, DagFormat format);

DagFormat dag_format_from_name(const std::string& name);

KDag parse_dag_json(const std::string& text);

} // namespace kdag

#endif // KDAG_DAG_SIM_HPP
