#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kdag/errors.hpp"
#include "kdag/exact_dist.hpp"
#include "kdag/experiments.hpp"

using namespace kdag;

namespace {

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.ks = {3};
    spec.ps = {0.2};
    spec.ell = 2;
    spec.horizons = {4};
    spec.trials = 100000;
    spec.seed = 8;
    return spec;
}

} // namespace

TEST_CASE("parse_sweep_spec: round trip of every key") {
    const std::string text = R"(
# grid
k = 3, 5
p = 0.05, 0.25
ell = auto
horizon = 100, 1000
trials = 250
seed = 99
stride = auto
window_fraction = 0.2
delta = 0.04
out = somewhere
)";
    const SweepSpec spec = parse_sweep_spec(text);
    CHECK(spec.ks == std::vector<int>{3, 5});
    CHECK(spec.ps == std::vector<double>{0.05, 0.25});
    CHECK_FALSE(spec.ell.has_value());
    CHECK(spec.horizons == std::vector<uint64_t>{100, 1000});
    CHECK(spec.trials == 250);
    CHECK(spec.seed == 99);
    CHECK(spec.stride == 0);
    CHECK(spec.window_fraction == 0.2);
    CHECK(spec.delta == 0.04);
    CHECK(spec.out_dir == "somewhere");
    CHECK(spec.cell_count() == 8);
    CHECK(spec.cell_params(0, 0).ell == 2);
    CHECK(spec.cell_params(1, 0).ell == 3);
}

TEST_CASE("parse_sweep_spec: rejects junk") {
    CHECK_THROWS_AS(parse_sweep_spec("k = 3\np = 0.1\nhorizon = 10\nwat = 1"),
                    invalid_parameter);
    CHECK_THROWS_AS(parse_sweep_spec("k = 3\np = 0.1"), invalid_parameter); // no horizon
    CHECK_THROWS_AS(parse_sweep_spec("k = 4\np = 0.1\nhorizon = 10"), invalid_parameter);
    CHECK_THROWS_AS(parse_sweep_spec("k = 3\np = abc\nhorizon = 10"), invalid_parameter);
    CHECK_THROWS_AS(parse_sweep_spec("k = 3\np = 0.1\nhorizon = 10\ntrials = 0"),
                    invalid_parameter);
    // ell fixed at 2 is invalid for k = 5.
    CHECK_THROWS_AS(parse_sweep_spec("k = 3, 5\np = 0.1\nell = 2\nhorizon = 10"),
                    invalid_parameter);
}

TEST_CASE("run_sweep: noiseless all-red cell has exactly zero error") {
    SweepSpec spec;
    spec.ks = {3};
    spec.ps = {0.0};
    spec.ell = 3;
    spec.horizons = {50};
    spec.trials = 500;
    spec.seed = 1;
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    CHECK(result.cells[0].error_hat == 0.0);
    CHECK(result.cells[0].censored_flip_fraction == 1.0);
    CHECK(result.cells[0].mean_red == 1.0);
}

TEST_CASE("run_sweep: one-step cell reproduces the exact error 0.176") {
    const SweepResult result = run_sweep(tiny_spec());
    REQUIRE(result.cells.size() == 1);
    const CellResult& cell = result.cells[0];
    CHECK(std::fabs(cell.error_hat - 0.176) < 0.004);
    CHECK(cell.ci.lo <= 0.176);
    CHECK(cell.ci.hi >= 0.176);
}

TEST_CASE("run_sweep: deterministic CSV across repeats and thread counts") {
    SweepSpec spec = tiny_spec();
    spec.trials = 4000;
    spec.horizons = {60};
    const std::string a = sweep_csv(run_sweep(spec, 2).cells, spec.seed);
    const std::string b = sweep_csv(run_sweep(spec, 2).cells, spec.seed);
    const std::string c = sweep_csv(run_sweep(spec, 1).cells, spec.seed);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.find("k,p,ell,horizon,trials,error_hat,ci_lo,ci_hi,mean_R,frac_beta1,"
                 "frac_half,frac_beta2,frac_uncls,censored_T,seed\n") == 0);
}

TEST_CASE("run_sweep: exact value covered by the interval on most cells") {
    SweepSpec spec;
    spec.ks = {3};
    spec.ps = {0.05, 0.15, 0.25, 0.35, 0.45};
    spec.ell = 2;
    spec.horizons = {20, 50, 100, 200};
    spec.trials = 2000;
    spec.seed = 31;
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.cells.size() == 20);
    int covered = 0;
    for (const CellResult& cell : result.cells) {
        const double exact = exact_majority_error(cell.params, cell.horizon);
        if (exact >= cell.ci.lo && exact <= cell.ci.hi)
            ++covered;
    }
    CHECK(covered >= 18); // >= 90% of 20 cells
}

TEST_CASE("regime concordance at a common horizon, exact and empirical") {
    const uint64_t horizon = 2000;
    const double low = exact_majority_error({3, 0.05, 2}, horizon);
    const double mid = exact_majority_error({3, 0.25, 2}, horizon);
    const double high = exact_majority_error({3, 0.4, 2}, horizon);
    CHECK(low < mid);
    CHECK(mid < high);

    SweepSpec spec;
    spec.ks = {3};
    spec.ps = {0.05, 0.25, 0.4};
    spec.ell = 2;
    spec.horizons = {horizon};
    spec.trials = 3000;
    spec.seed = 17;
    const SweepResult result = run_sweep(spec);
    CHECK(result.cells[0].error_hat < result.cells[1].error_hat);
    CHECK(result.cells[1].error_hat < result.cells[2].error_hat);
}

TEST_CASE("classify_trajectory: constant trajectory against the fixed points") {
    const RegimeReport report = classify_regime(3, 0.05);
    REQUIRE(report.beta2.has_value());

    Trajectory constant_one{{3, 0.0, 3}, 0, 0, {}};
    for (uint64_t n = 3; n <= 100; ++n)
        constant_one.points.push_back({n, n});

    // |1 - beta2| ~ 0.0101 < 0.05: classified as the upper fixed point.
    CHECK(classify_trajectory(constant_one, report, 0.1, 0.05) == LimitClass::Beta2);
    // With delta below the gap it stays unclassified.
    CHECK(classify_trajectory(constant_one, report, 0.1, 0.005) == LimitClass::Unclassified);

    Trajectory near_half{{3, 0.25, 2}, 0, 0, {}};
    for (uint64_t n = 100; n <= 200; ++n)
        near_half.points.push_back({n, n / 2});
    const RegimeReport no_betas = classify_regime(3, 0.25);
    CHECK(classify_trajectory(near_half, no_betas, 0.1, 0.05) == LimitClass::Half);

    CHECK_THROWS_AS(classify_trajectory(near_half, no_betas, 0.0, 0.05), invalid_parameter);
    CHECK_THROWS_AS(classify_trajectory(near_half, no_betas, 0.1, 0.0), invalid_parameter);
}

TEST_CASE("high regime: nearly every trajectory classifies to 1/2") {
    SweepSpec spec;
    spec.ks = {3};
    spec.ps = {0.4};
    spec.ell = 2;
    spec.horizons = {30000};
    spec.trials = 400;
    spec.seed = 606;
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    CHECK(result.cells[0].fractions.half >= 0.9);
    CHECK(result.cells[0].fractions.beta1 == 0.0);
    CHECK(result.cells[0].fractions.beta2 == 0.0);
}

TEST_CASE("classify_limits: fractions add to one") {
    std::vector<Trajectory> trajectories;
    for (uint64_t trial = 0; trial < 50; ++trial) {
        RandomStream rng(3, trial);
        trajectories.push_back(run_urn({3, 0.05, 2}, 3000, rng, RecordMode::thinned(10)));
    }
    const RegimeReport report = classify_regime(3, 0.05);
    const LimitFractions f = classify_limits(trajectories, report, 0.1, 0.05);
    CHECK(f.beta1 + f.half + f.beta2 + f.unclassified == doctest::Approx(1.0));
}

TEST_CASE("drift_check_at: one-step mean matches the drift") {
    // Hand value: from (3, 2) at p = 0.2 the scaled mean increment is
    // 0.648 - 2/3 = -0.0186...
    const DriftCheckRow row = drift_check_at({3, 0.2, 2}, 3, 2, 100000, 5);
    CHECK(row.predicted == doctest::Approx(0.648 - 2.0 / 3.0).epsilon(1e-12));
    CHECK(std::fabs(row.z) < 4.0);
    CHECK(std::fabs(row.empirical - row.predicted) < 0.01);

    // At the balance point the drift vanishes.
    const DriftCheckRow half = drift_check_at({3, 0.2, 2}, 1000, 500, 100000, 6);
    CHECK(half.predicted == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::fabs(half.z) < 4.0);

    // At the lower fixed point the drift vanishes too.
    const double beta1 = *classify_regime(3, 0.1).beta1;
    const auto red = static_cast<uint64_t>(std::llround(beta1 * 100000.0));
    const DriftCheckRow at_beta = drift_check_at({3, 0.1, 2}, 100000, red, 100000, 7);
    CHECK(std::fabs(at_beta.predicted) < 1e-4);
    CHECK(std::fabs(at_beta.z) < 4.0);
}

TEST_CASE("drift_empirical_check: all z-scores within 4 sigma") {
    const auto rows = drift_empirical_check({3, 0.2, 2}, 9, 100000, 12345);
    REQUIRE(rows.size() == 9);
    for (const DriftCheckRow& row : rows) {
        CHECK(std::fabs(row.z) < 4.0);
        CHECK(row.t == doctest::Approx(static_cast<double>(row.state_red) / 1000.0));
    }
}

TEST_CASE("trajectory CSV") {
    std::vector<Trajectory> trajectories(1);
    trajectories[0].points = {{3, 2}, {4, 3}};
    CHECK(trajectories_csv(trajectories) == "trial,n,red\n0,3,2\n0,4,3\n");
}
