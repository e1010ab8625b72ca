#include "kdag/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "kdag/errors.hpp"
#include "kdag/io_util.hpp"
#include "kdag/parallel.hpp"

namespace kdag {

void SweepSpec::validate() const {
    if (ks.empty() || ps.empty() || horizons.empty())
        throw invalid_parameter("sweep grid must list at least one k, p and horizon");
    if (trials < 1)
        throw invalid_parameter("sweep trials must be >= 1");
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw invalid_parameter("window_fraction must lie in (0, 1]");
    if (!(delta > 0.0))
        throw invalid_parameter("delta must be > 0");
    for (size_t ik = 0; ik < ks.size(); ++ik)
        for (size_t ip = 0; ip < ps.size(); ++ip) {
            const ModelParams params = cell_params(ik, ip);
            params.validate();
            for (uint64_t horizon : horizons)
                if (horizon < static_cast<uint64_t>(params.k))
                    throw invalid_parameter("horizon " + std::to_string(horizon) +
                                            " below k=" + std::to_string(params.k));
        }
}

ModelParams SweepSpec::cell_params(size_t ik, size_t ip) const {
    const int k = ks[ik];
    return {k, ps[ip], ell.value_or((k + 1) / 2)};
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos)
            throw invalid_parameter("empty list entry in sweep spec");
        const auto e = item.find_last_not_of(" \t");
        items.push_back(item.substr(b, e - b + 1));
    }
    return items;
}

uint64_t parse_u64(const std::string& s, const char* key) {
    try {
        size_t pos = 0;
        const uint64_t v = std::stoull(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw invalid_parameter(std::string("sweep spec: bad integer for ") + key + ": " + s);
    }
}

double parse_f64(const std::string& s, const char* key) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw invalid_parameter(std::string("sweep spec: bad number for ") + key + ": " + s);
    }
}

} // namespace

SweepSpec parse_sweep_spec(const std::string& text) {
    SweepSpec spec;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_parameter("sweep spec: expected key = value, got: " + line);
        auto trim = [](std::string s) {
            const auto lo = s.find_first_not_of(" \t\r");
            if (lo == std::string::npos)
                return std::string();
            const auto hi = s.find_last_not_of(" \t\r");
            return s.substr(lo, hi - lo + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw invalid_parameter("sweep spec: empty value for " + key);

        if (key == "k") {
            for (const auto& s : split_list(value))
                spec.ks.push_back(static_cast<int>(parse_u64(s, "k")));
        } else if (key == "p") {
            for (const auto& s : split_list(value))
                spec.ps.push_back(parse_f64(s, "p"));
        } else if (key == "ell") {
            if (value != "auto")
                spec.ell = static_cast<int>(parse_u64(value, "ell"));
        } else if (key == "horizon") {
            for (const auto& s : split_list(value))
                spec.horizons.push_back(parse_u64(s, "horizon"));
        } else if (key == "trials") {
            spec.trials = parse_u64(value, "trials");
        } else if (key == "seed") {
            spec.seed = parse_u64(value, "seed");
        } else if (key == "stride") {
            spec.stride = value == "auto" ? 0 : parse_u64(value, "stride");
        } else if (key == "window_fraction") {
            spec.window_fraction = parse_f64(value, "window_fraction");
        } else if (key == "delta") {
            spec.delta = parse_f64(value, "delta");
        } else if (key == "out") {
            spec.out_dir = value;
        } else {
            throw invalid_parameter("sweep spec: unknown key " + key);
        }
    }
    spec.validate();
    return spec;
}

namespace {

double window_mean(const Trajectory& traj, double window_fraction) {
    const size_t count = traj.points.size();
    const auto window =
        std::max<size_t>(1, static_cast<size_t>(std::ceil(window_fraction * count)));
    double sum = 0.0;
    for (size_t i = count - window; i < count; ++i)
        sum += static_cast<double>(traj.points[i].red) / static_cast<double>(traj.points[i].n);
    return sum / static_cast<double>(window);
}

} // namespace

LimitClass classify_trajectory(const Trajectory& traj, const RegimeReport& report,
                               double window_fraction, double delta) {
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw invalid_parameter("window_fraction must lie in (0, 1]");
    if (!(delta > 0.0))
        throw invalid_parameter("delta must be > 0");
    if (traj.points.empty())
        throw invalid_parameter("cannot classify an empty trajectory");

    const double mean = window_mean(traj, window_fraction);
    LimitClass best = LimitClass::Unclassified;
    double best_dist = delta;
    auto consider = [&](double target, LimitClass cls) {
        const double dist = std::fabs(mean - target);
        if (dist <= best_dist) {
            best_dist = dist;
            best = cls;
        }
    };
    consider(0.5, LimitClass::Half);
    if (report.beta1)
        consider(*report.beta1, LimitClass::Beta1);
    if (report.beta2)
        consider(*report.beta2, LimitClass::Beta2);
    return best;
}

LimitFractions classify_limits(std::span<const Trajectory> trajectories,
                               const RegimeReport& report, double window_fraction,
                               double delta) {
    LimitFractions fractions;
    if (trajectories.empty())
        return fractions;
    uint64_t counts[4] = {0, 0, 0, 0};
    for (const Trajectory& traj : trajectories)
        ++counts[static_cast<int>(classify_trajectory(traj, report, window_fraction, delta))];
    const double total = static_cast<double>(trajectories.size());
    fractions.beta1 = static_cast<double>(counts[0]) / total;
    fractions.half = static_cast<double>(counts[1]) / total;
    fractions.beta2 = static_cast<double>(counts[2]) / total;
    fractions.unclassified = static_cast<double>(counts[3]) / total;
    return fractions;
}

namespace {

struct TrialOutcome {
    Trajectory traj;
    bool majority_error = false;
    bool censored = true;
};

TrialOutcome run_cell_trial(const ModelParams& params, uint64_t horizon, uint64_t stride,
                            RandomStream& rng) {
    const auto k = static_cast<uint64_t>(params.k);
    TrialOutcome out;
    out.traj.params = params;
    out.traj.seed = rng.seed();
    out.traj.stream_id = rng.stream_id();

    UrnState state{k, static_cast<uint64_t>(params.ell)};
    out.traj.points.push_back({state.n, state.red});
    bool flipped = false;
    for (uint64_t n = k; n < horizon; ++n) {
        state = urn_step(state, params, rng);
        if ((state.n - k) % stride == 0 || state.n == horizon)
            out.traj.points.push_back({state.n, state.red});

        // Majority estimate at time state.n; one coin per tie, shared by the
        // first-flip tracking and the horizon readout.
        const uint64_t twice_red = 2 * state.red;
        bool is_red;
        if (twice_red > state.n)
            is_red = true;
        else if (twice_red < state.n)
            is_red = false;
        else
            is_red = rng.coin();
        if (!flipped && !is_red)
            flipped = true;
        if (state.n == horizon)
            out.majority_error = !is_red;
    }
    out.censored = !flipped;
    return out;
}

uint64_t auto_stride(uint64_t horizon, uint64_t k) {
    const uint64_t span = horizon - k;
    return std::max<uint64_t>(1, span / 1000);
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned threads, bool keep_paths) {
    spec.validate();
    SweepResult result;
    result.cells.reserve(spec.cell_count());
    if (keep_paths)
        result.paths.resize(spec.cell_count());

    size_t cell_index = 0;
    for (size_t ik = 0; ik < spec.ks.size(); ++ik) {
        for (size_t ip = 0; ip < spec.ps.size(); ++ip) {
            const ModelParams params = spec.cell_params(ik, ip);
            const RegimeReport report = classify_regime(params.k, params.p);
            for (uint64_t horizon : spec.horizons) {
                const auto started = std::chrono::steady_clock::now();
                const uint64_t stride =
                    spec.stride != 0 ? spec.stride
                                     : auto_stride(horizon, static_cast<uint64_t>(params.k));

                std::vector<uint8_t> errors(spec.trials, 0);
                std::vector<uint8_t> censored(spec.trials, 0);
                std::vector<uint8_t> classes(spec.trials, 0);
                std::vector<double> finals(spec.trials, 0.0);
                std::vector<Trajectory> paths(keep_paths ? spec.trials : 0);

                parallel_for_index(spec.trials, threads, [&](uint64_t trial) {
                    RandomStream rng(spec.seed,
                                     (static_cast<uint64_t>(cell_index) << 32) + trial);
                    TrialOutcome out = run_cell_trial(params, horizon, stride, rng);
                    errors[trial] = out.majority_error ? 1 : 0;
                    censored[trial] = out.censored ? 1 : 0;
                    classes[trial] = static_cast<uint8_t>(classify_trajectory(
                        out.traj, report, spec.window_fraction, spec.delta));
                    const auto& last = out.traj.points.back();
                    finals[trial] = static_cast<double>(last.red) / static_cast<double>(last.n);
                    if (keep_paths)
                        paths[trial] = std::move(out.traj);
                });

                CellResult cell;
                cell.params = params;
                cell.horizon = horizon;
                cell.trials = spec.trials;
                uint64_t n_err = 0, n_cens = 0;
                uint64_t class_counts[4] = {0, 0, 0, 0};
                double sum_final = 0.0;
                for (uint64_t trial = 0; trial < spec.trials; ++trial) {
                    n_err += errors[trial];
                    n_cens += censored[trial];
                    ++class_counts[classes[trial]];
                    sum_final += finals[trial];
                }
                const double trials_f = static_cast<double>(spec.trials);
                cell.error_hat = static_cast<double>(n_err) / trials_f;
                cell.ci = wilson_interval(n_err, spec.trials);
                cell.mean_red = sum_final / trials_f;
                cell.fractions.beta1 = static_cast<double>(class_counts[0]) / trials_f;
                cell.fractions.half = static_cast<double>(class_counts[1]) / trials_f;
                cell.fractions.beta2 = static_cast<double>(class_counts[2]) / trials_f;
                cell.fractions.unclassified = static_cast<double>(class_counts[3]) / trials_f;
                cell.censored_flip_fraction = static_cast<double>(n_cens) / trials_f;
                cell.runtime_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                        .count();
                result.cells.push_back(cell);
                if (keep_paths)
                    result.paths[cell_index] = std::move(paths);
                ++cell_index;
            }
        }
    }
    return result;
}

DriftCheckRow drift_check_at(const ModelParams& params, uint64_t state_n, uint64_t state_red,
                             uint64_t trials, uint64_t seed) {
    params.validate();
    if (state_n == 0 || state_red > state_n)
        throw invalid_parameter("drift check needs 0 <= red <= n, n >= 1");
    if (trials == 0)
        throw invalid_parameter("trials must be >= 1");

    const UrnState state{state_n, state_red};
    const double t = state.red_proportion();
    const double q_true = majority_tail(params.k, flip_map(params.p, t));

    RandomStream rng(seed, state_red);
    uint64_t red_added = 0;
    for (uint64_t i = 0; i < trials; ++i)
        if (urn_step(state, params, rng).red > state_red)
            ++red_added;

    DriftCheckRow row;
    row.state_n = state_n;
    row.state_red = state_red;
    row.t = t;
    const double q_hat = static_cast<double>(red_added) / static_cast<double>(trials);
    row.empirical = q_hat - t;
    row.predicted = drift(params.k, params.p, t);
    const double se = std::sqrt(q_true * (1.0 - q_true) / static_cast<double>(trials));
    if (se == 0.0)
        row.z = q_hat == q_true ? 0.0 : std::numeric_limits<double>::infinity();
    else
        row.z = (q_hat - q_true) / se;
    return row;
}

std::vector<DriftCheckRow> drift_empirical_check(const ModelParams& params, int n_points,
                                                 uint64_t trials, uint64_t seed,
                                                 uint64_t base_n) {
    if (n_points < 1)
        throw invalid_parameter("n_points must be >= 1");
    std::vector<DriftCheckRow> rows(static_cast<size_t>(n_points));
    parallel_for_index(static_cast<uint64_t>(n_points), 0, [&](uint64_t j) {
        const double target = static_cast<double>(j + 1) / static_cast<double>(n_points + 1);
        const auto red = static_cast<uint64_t>(
            std::llround(target * static_cast<double>(base_n)));
        rows[j] = drift_check_at(params, base_n, std::min(red, base_n), trials, seed + j);
    });
    return rows;
}

std::string sweep_csv(std::span<const CellResult> cells, uint64_t seed) {
    std::string out =
        "k,p,ell,horizon,trials,error_hat,ci_lo,ci_hi,mean_R,frac_beta1,frac_half,"
        "frac_beta2,frac_uncls,censored_T,seed\n";
    for (const CellResult& c : cells) {
        out += std::to_string(c.params.k) + ',' + fmt_double(c.params.p) + ',' +
               std::to_string(c.params.ell) + ',' + std::to_string(c.horizon) + ',' +
               std::to_string(c.trials) + ',' + fmt_double(c.error_hat) + ',' +
               fmt_double(c.ci.lo) + ',' + fmt_double(c.ci.hi) + ',' + fmt_double(c.mean_red) +
               ',' + fmt_double(c.fractions.beta1) + ',' + fmt_double(c.fractions.half) + ',' +
               fmt_double(c.fractions.beta2) + ',' + fmt_double(c.fractions.unclassified) +
               ',' + fmt_double(c.censored_flip_fraction) + ',' + std::to_string(seed) + '\n';
    }
    return out;
}

std::string sweep_json(const SweepResult& result, uint64_t seed) {
    nlohmann::json j;
    j["seed"] = seed;
    auto cells = nlohmann::json::array();
    for (size_t i = 0; i < result.cells.size(); ++i) {
        const CellResult& c = result.cells[i];
        nlohmann::json jc;
        jc["k"] = c.params.k;
        jc["p"] = c.params.p;
        jc["ell"] = c.params.ell;
        jc["horizon"] = c.horizon;
        jc["trials"] = c.trials;
        jc["error_hat"] = c.error_hat;
        jc["ci_lo"] = c.ci.lo;
        jc["ci_hi"] = c.ci.hi;
        jc["mean_R"] = c.mean_red;
        jc["frac_beta1"] = c.fractions.beta1;
        jc["frac_half"] = c.fractions.half;
        jc["frac_beta2"] = c.fractions.beta2;
        jc["frac_uncls"] = c.fractions.unclassified;
        jc["censored_T"] = c.censored_flip_fraction;
        jc["runtime_seconds"] = c.runtime_seconds;
        if (!result.paths.empty()) {
            auto paths = nlohmann::json::array();
            for (const Trajectory& traj : result.paths[i]) {
                auto pts = nlohmann::json::array();
                for (const TrajectoryPoint& pt : traj.points)
                    pts.push_back({pt.n, pt.red});
                paths.push_back({{"stream_id", traj.stream_id}, {"points", std::move(pts)}});
            }
            jc["paths"] = std::move(paths);
        }
        cells.push_back(std::move(jc));
    }
    j["cells"] = std::move(cells);
    return j.dump() + "\n";
}

std::string trajectories_csv(std::span<const Trajectory> trajectories) {
    std::string out = "trial,n,red\n";
    for (size_t trial = 0; trial < trajectories.size(); ++trial)
        for (const TrajectoryPoint& pt : trajectories[trial].points)
            out += std::to_string(trial) + ',' + std::to_string(pt.n) + ',' +
                   std::to_string(pt.red) + '\n';
    return out;
}

} // namespace kdag
