#ifndef KDAG_EXPERIMENTS_HPP
#define KDAG_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdag/analytic.hpp"
#include "kdag/params.hpp"
#include "kdag/stats.hpp"
#include "kdag/urn_sim.hpp"

namespace kdag {

/// A sweep grid: cells are the cross product ks x ps x horizons, in that
/// order (k-major). When ell is absent each cell uses the minimal red
/// majority (k+1)/2; when present it must be valid for every k in the grid.
/// stride 0 means automatic thinning (about 1000 recorded points per
/// trajectory).
struct SweepSpec {
    std::vector<int> ks;
    std::vector<double> ps;
    std::optional<int> ell;
    std::vector<uint64_t> horizons;
    uint64_t trials = 1000;
    uint64_t seed = 0;
    uint64_t stride = 0;
    double window_fraction = 0.1;
    double delta = 0.05;
    std::string out_dir;

    void validate() const;
    size_t cell_count() const { return ks.size() * ps.size() * horizons.size(); }
    ModelParams cell_params(size_t ik, size_t ip) const;
};

/// Parses the flat key = value sweep file (comma-separated lists, '#'
/// comments). Unknown keys are rejected.
SweepSpec parse_sweep_spec(const std::string& text);

enum class LimitClass { Beta1, Half, Beta2, Unclassified };

struct LimitFractions {
    double beta1 = 0.0;
    double half = 0.0;
    double beta2 = 0.0;
    double unclassified = 0.0;
};

struct CellResult {
    ModelParams params;
    uint64_t horizon = 0;
    uint64_t trials = 0;
    double error_hat = 0.0;
    WilsonInterval ci;
    double mean_red = 0.0;
    LimitFractions fractions;
    double censored_flip_fraction = 0.0;
    double runtime_seconds = 0.0;
};

struct SweepResult {
    std::vector<CellResult> cells;
    // Per-cell thinned trajectories; filled only when keep_paths is set.
    std::vector<std::vector<Trajectory>> paths;
};

/// Runs every cell of the grid with `trials` independent urn trajectories
/// per cell, stream (seed, cell_index * 2^32 + trial). Within one pass per
/// trial it records the thinned path, the majority estimate at the horizon
/// (tie resolved by the trial's own coin), the first-flip censoring flag and
/// the limit classification. Output is deterministic for a given seed,
/// independent of thread count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0, bool keep_paths = false);

/// Assigns a trajectory to beta1 / 1/2 / beta2 / unclassified by whether the
/// mean red proportion over the last window_fraction of recorded points lies
/// within delta of the target (nearest target wins when several qualify).
/// Targets include the betas only where the report carries them.
LimitClass classify_trajectory(const Trajectory& traj, const RegimeReport& report,
                               double window_fraction, double delta);

LimitFractions classify_limits(std::span<const Trajectory> trajectories,
                               const RegimeReport& report, double window_fraction,
                               double delta);

struct DriftCheckRow {
    uint64_t state_n = 0;
    uint64_t state_red = 0;
    double t = 0.0;         // state_red / state_n
    double empirical = 0.0; // (n+1) * mean one-step increment of R
    double predicted = 0.0; // drift(k, p, t)
    double z = 0.0;
};

/// Repeated one-step experiment from the fixed state (state_n, state_red).
DriftCheckRow drift_check_at(const ModelParams& params, uint64_t state_n, uint64_t state_red,
                             uint64_t trials, uint64_t seed);

/// n_points states with red proportions spread over (0, 1) at denominator
/// base_n, each checked with its own stream (seed, row index).
std::vector<DriftCheckRow> drift_empirical_check(const ModelParams& params, int n_points,
                                                 uint64_t trials, uint64_t seed,
                                                 uint64_t base_n = 1000);

/// CSV with the fixed sweep schema, one row per cell:
/// k,p,ell,horizon,trials,error_hat,ci_lo,ci_hi,mean_R,frac_beta1,frac_half,
/// frac_beta2,frac_uncls,censored_T,seed
std::string sweep_csv(std::span<const CellResult> cells, uint64_t seed);

/// JSON mirror of the CSV rows (plus runtimes and, when present, the
/// per-trajectory thinned paths).
std::string sweep_json(const SweepResult& result, uint64_t seed);

std::string trajectories_csv(std::span<const Trajectory> trajectories);

} // namespace kdag

#endif // KDAG_EXPERIMENTS_HPP
