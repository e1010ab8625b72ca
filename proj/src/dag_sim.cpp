#include "kdag/dag_sim.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "kdag/errors.hpp"
#include "kdag/io_util.hpp"

namespace kdag {

namespace {
constexpr uint64_t MAX_DAG_VERTICES = 1'000'000;
}

KDag::KDag(ModelParams params, uint64_t seed, uint64_t stream_id)
    : params_(params), seed_(seed), stream_id_(stream_id) {
    params_.validate();
    parent_offsets_.push_back(0);
}

void KDag::append_vertex(Color c, std::vector<uint32_t> sorted_distinct_parents) {
    colors_.push_back(c);
    if (c == Color::Red)
        ++red_count_;
    parent_data_.insert(parent_data_.end(), sorted_distinct_parents.begin(),
                        sorted_distinct_parents.end());
    parent_offsets_.push_back(static_cast<uint32_t>(parent_data_.size()));
}

std::vector<uint64_t> KDag::red_count_path() const {
    std::vector<uint64_t> path;
    const uint32_t n = vertex_count();
    const uint32_t k = static_cast<uint32_t>(params_.k);
    path.reserve(n - k + 1);
    uint64_t red = 0;
    for (uint32_t v = 0; v < n; ++v) {
        if (colors_[v] == Color::Red)
            ++red;
        if (v + 1 >= k)
            path.push_back(red);
    }
    return path;
}

KDag grow(const ModelParams& params, uint64_t n, RandomStream& rng) {
    params.validate();
    const auto k = static_cast<uint64_t>(params.k);
    if (n < k)
        throw invalid_parameter("horizon n must be >= k");
    if (n > MAX_DAG_VERTICES)
        throw resource_limit("DAG horizon capped at " + std::to_string(MAX_DAG_VERTICES) +
                             " vertices, got " + std::to_string(n));

    KDag dag(params, rng.seed(), rng.stream_id());
    for (int i = 0; i < params.k; ++i)
        dag.append_vertex(i < params.ell ? Color::Red : Color::Blue, {});

    std::vector<uint32_t> draws(static_cast<size_t>(params.k));
    for (uint64_t v = k; v < n; ++v) {
        int red_votes = 0;
        for (int j = 0; j < params.k; ++j) {
            const auto parent = static_cast<uint32_t>(rng.uniform_below(v));
            draws[static_cast<size_t>(j)] = parent;
            bool observed_red = dag.color(parent) == Color::Red;
            if (rng.bernoulli(params.p))
                observed_red = !observed_red;
            if (observed_red)
                ++red_votes;
        }
        std::sort(draws.begin(), draws.end());
        std::vector<uint32_t> distinct(draws.begin(), std::unique(draws.begin(), draws.end()));
        dag.append_vertex(2 * red_votes > params.k ? Color::Red : Color::Blue,
                          std::move(distinct));
    }
    return dag;
}

double red_proportion(const KDag& dag) {
    return static_cast<double>(dag.red_count()) / static_cast<double>(dag.vertex_count());
}

Color majority_bit(const KDag& dag, RandomStream& rng) {
    const uint64_t twice_red = 2 * dag.red_count();
    const uint64_t n = dag.vertex_count();
    if (twice_red > n)
        return Color::Red;
    if (twice_red < n)
        return Color::Blue;
    return rng.coin() ? Color::Red : Color::Blue;
}

namespace {

std::string export_csv(const KDag& dag) {
    std::string out = "child,parent\n";
    for (uint32_t v = 0; v < dag.vertex_count(); ++v)
        for (uint32_t parent : dag.parents_of(v)) {
            out += std::to_string(v);
            out += ',';
            out += std::to_string(parent);
            out += '\n';
        }
    return out;
}

std::string export_dot(const KDag& dag) {
    std::string out = "digraph kdag {\n";
    for (uint32_t v = 0; v < dag.vertex_count(); ++v) {
        out += "  " + std::to_string(v) + " [color=" +
               (dag.color(v) == Color::Red ? "red" : "blue") + "];\n";
    }
    for (uint32_t v = 0; v < dag.vertex_count(); ++v)
        for (uint32_t parent : dag.parents_of(v))
            out += "  " + std::to_string(v) + " -> " + std::to_string(parent) + ";\n";
    out += "}\n";
    return out;
}

std::string export_json(const KDag& dag) {
    nlohmann::json j;
    j["n"] = dag.vertex_count();
    j["k"] = dag.params().k;
    j["p"] = dag.params().p;
    j["ell"] = dag.params().ell;
    j["seed"] = dag.seed();
    j["stream_id"] = dag.stream_id();
    j["indexing"] = "0-based; vertices 0..k-1 are the roots, 0..ell-1 red";
    std::string colors;
    colors.reserve(dag.vertex_count());
    for (Color c : dag.colors())
        colors += (c == Color::Red ? 'R' : 'B');
    j["colors"] = colors;
    auto parents = nlohmann::json::array();
    for (uint32_t v = 0; v < dag.vertex_count(); ++v)
        parents.push_back(dag.parents_of(v));
    j["parents"] = std::move(parents);
    return j.dump() + "\n";
}

} // namespace

std::string export_edges(const KDag& dag, DagFormat format) {
    switch (format) {
        case DagFormat::EdgeListCsv: return export_csv(dag);
        case DagFormat::Dot: return export_dot(dag);
        case DagFormat::Json: return export_json(dag);
    }
    throw invalid_parameter("unknown export format");
}

DagFormat dag_format_from_name(const std::string& name) {
    if (name == "csv") return DagFormat::EdgeListCsv;
    if (name == "dot") return DagFormat::Dot;
    if (name == "json") return DagFormat::Json;
    throw invalid_parameter("unknown DAG format '" + name + "' (expected csv, dot or json)");
}

KDag parse_dag_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        ModelParams params{j.at("k").get<int>(), j.at("p").get<double>(),
                           j.at("ell").get<int>()};
        KDag dag(params, j.at("seed").get<uint64_t>(), j.at("stream_id").get<uint64_t>());
        const auto colors = j.at("colors").get<std::string>();
        const auto& parents = j.at("parents");
        if (colors.size() != parents.size() || colors.size() != j.at("n").get<size_t>())
            throw io_error("DAG JSON: inconsistent vertex counts");
        for (size_t v = 0; v < colors.size(); ++v)
            dag.append_vertex(colors[v] == 'R' ? Color::Red : Color::Blue,
                              parents[v].get<std::vector<uint32_t>>());
        return dag;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("DAG JSON parse failed: ") + e.what());
    }
}

} // namespace kdag
