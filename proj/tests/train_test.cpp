#include "qaoaprep/train.hpp"

#include <gtest/gtest.h>

#include "qaoaprep/analytic.hpp"
#include "qaoaprep/symsim.hpp"

using namespace qaoaprep;
using train::NoiseKind;
using train::NoiseModel;
using train::OptimizerConfig;

namespace {

OptimizerConfig quick_config(std::uint64_t seed = 1, int restarts = 20) {
    OptimizerConfig cfg;
    cfg.rng_seed = seed;
    cfg.restarts = restarts;
    return cfg;
}

}  // namespace

TEST(Config, InvariantsAreEnforced) {
    OptimizerConfig cfg;
    cfg.restarts = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    NoiseModel noise;
    noise.kind = NoiseKind::none;
    noise.sigma = 0.1;
    EXPECT_THROW(noise.validate(), std::invalid_argument);
    noise = NoiseModel{NoiseKind::undertrain, 0.0, 0};
    EXPECT_THROW(noise.validate(), std::invalid_argument);
}

TEST(Ascend, ConvergesOnSmoothQuadratic) {
    auto objective = [](const std::vector<double>& x, std::vector<double>& grad) {
        // concave paraboloid peaked at (2, -1) with skewed scales
        grad = {-2.0 * (x[0] - 2.0), -40.0 * (x[1] + 1.0)};
        return -(x[0] - 2.0) * (x[0] - 2.0) - 20.0 * (x[1] + 1.0) * (x[1] + 1.0);
    };
    const auto out = train::ascend(objective, {0.0, 0.0}, 1000, 1e-12);
    EXPECT_TRUE(out.converged);
    EXPECT_NEAR(out.x[0], 2.0, 1e-9);
    EXPECT_NEAR(out.x[1], -1.0, 1e-9);
}

TEST(OptimizeGlobal, RecoversSingleLayerOptimum) {
    for (int n : {2, 5, 8, 12}) {
        const auto sol = analytic::solve_optimal_p1(n);
        const auto res = train::optimize_global(n, 1, quick_config());
        const auto reduced = train::reduce_to_fundamental(res.schedule);
        EXPECT_NEAR(reduced.betas[0], sol.beta, 1e-6) << "n=" << n;
        EXPECT_NEAR(reduced.gammas[0], sol.gamma, 1e-6) << "n=" << n;
        EXPECT_LT(train::last_layer_defect(res.schedule), 1e-6);
        EXPECT_NEAR(res.overlap.magnitude_sq,
                    analytic::overlap_sq_on_line(n, reduced.betas[0]), 1e-10);
    }
}

TEST(OptimizeGlobal, LastLayerRelationAtDepthThree) {
    const auto res = train::optimize_global(8, 3, quick_config(3));
    EXPECT_LT(train::last_layer_defect(res.schedule), 0.01);
}

TEST(OptimizeGlobal, DeterministicForFixedSeed) {
    const auto a = train::optimize_global(6, 2, quick_config(42));
    const auto b = train::optimize_global(6, 2, quick_config(42));
    EXPECT_EQ(a.schedule, b.schedule);
    EXPECT_EQ(a.overlap.magnitude_sq, b.overlap.magnitude_sq);
    ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        EXPECT_EQ(a.trace.records[i].schedule, b.trace.records[i].schedule);
        EXPECT_EQ(a.trace.records[i].magnitude_sq, b.trace.records[i].magnitude_sq);
    }
}

TEST(OptimizeLayerwise, SingleLayerCoincidesWithGlobal) {
    for (int n : {3, 7}) {
        const auto global = train::optimize_global(n, 1, quick_config(9));
        const auto trace = train::optimize_layerwise(n, 1, quick_config(9));
        ASSERT_EQ(trace.records.size(), 1u);
        EXPECT_EQ(trace.records[0].schedule, global.schedule);
        EXPECT_EQ(trace.records[0].magnitude_sq, global.overlap.magnitude_sq);
    }
}

TEST(OptimizeLayerwise, OverlapIsMonotoneInDepth) {
    const auto trace = train::optimize_layerwise(5, 9, quick_config(13));
    double previous = 0.0;
    for (const auto& rec : trace.records) {
        EXPECT_GE(rec.magnitude_sq, previous - 1e-12);
        previous = rec.magnitude_sq;
        EXPECT_EQ(rec.schedule.depth(), rec.depth);
    }
}

TEST(OptimizeLayerwise, SaturationStepAppearsAtQubitCount) {
    // gains collapse by orders of magnitude right after depth n
    const int n = 4;
    const auto trace = train::optimize_layerwise(n, 2 * n + 2, quick_config(17));
    EXPECT_GT(trace.records[std::size_t(n) - 1].improvement, 1e-3);
    for (int q = n; q < 2 * n + 2; ++q)
        EXPECT_LT(trace.records[std::size_t(q)].improvement, 1e-4)
            << "depth " << q + 1;
    EXPECT_EQ(train::detect_saturation(trace, 1e-3).value_or(-1), n);
}

TEST(OptimizeLayerwise, SeedDeterminism) {
    const auto a = train::optimize_layerwise(5, 6, quick_config(123));
    const auto b = train::optimize_layerwise(5, 6, quick_config(123));
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].schedule, b.records[i].schedule);
        EXPECT_EQ(a.records[i].magnitude_sq, b.records[i].magnitude_sq);
        EXPECT_EQ(a.records[i].improvement, b.records[i].improvement);
    }
}

TEST(OptimizeLayerwise, ZeroSigmaPhaseNoiseMatchesNoiseless) {
    NoiseModel zero_noise{NoiseKind::phase_noise, 0.0, 0};
    const auto clean = train::optimize_layerwise(4, 5, quick_config(7));
    const auto noisy = train::optimize_layerwise(4, 5, quick_config(7), zero_noise);
    ASSERT_EQ(clean.records.size(), noisy.records.size());
    for (std::size_t i = 0; i < clean.records.size(); ++i) {
        EXPECT_EQ(clean.records[i].schedule, noisy.records[i].schedule);
        EXPECT_EQ(clean.records[i].magnitude_sq, noisy.records[i].magnitude_sq);
    }
}

TEST(OptimizeLayerwise, PhaseNoisePerturbsStoredAngles) {
    NoiseModel noise{NoiseKind::phase_noise, 0.05, 0};
    const auto clean = train::optimize_layerwise(4, 4, quick_config(7));
    const auto noisy = train::optimize_layerwise(4, 4, quick_config(7), noise);
    EXPECT_NE(clean.records.back().schedule, noisy.records.back().schedule);
}

TEST(OptimizeLayerwise, UndertrainingCapsIterations) {
    NoiseModel undertrain{NoiseKind::undertrain, 0.0, 3};
    const auto trace = train::optimize_layerwise(5, 6, quick_config(5), undertrain);
    for (const auto& rec : trace.records) EXPECT_LE(rec.iterations, 3);
}

TEST(GlobalDominance, GlobalMatchesOrBeatsLayerwise) {
    for (int n : {3, 6}) {
        for (int p : {1, 2, 3}) {
            const auto global = train::optimize_global(n, p, quick_config(11));
            const auto layered = train::optimize_layerwise(n, p, quick_config(11));
            EXPECT_GE(global.overlap.magnitude_sq,
                      layered.records.back().magnitude_sq - 1e-9)
                << "n=" << n << " p=" << p;
        }
    }
}

TEST(DetectSaturation, StrictlyImprovingTraceHasNone) {
    train::TrainingTrace trace;
    for (int d = 1; d <= 5; ++d)
        trace.records.push_back({d, AngleSchedule{}, 0.1 * d, 0.1, 0.0, 1, true});
    EXPECT_FALSE(train::detect_saturation(trace, 1e-8).has_value());
}

TEST(DetectSaturation, ReturnsSmallestDepthWithOnlySmallLaterGains) {
    train::TrainingTrace trace;
    const double gains[] = {0.2, 0.1, 0.05, 1e-10, 1e-11, 1e-12};
    double value = 0.0;
    for (int d = 1; d <= 6; ++d) {
        value += gains[d - 1];
        trace.records.push_back({d, AngleSchedule{}, value, gains[d - 1], 0.0, 1, true});
    }
    EXPECT_EQ(train::detect_saturation(trace, 1e-8).value_or(-1), 3);
}

TEST(DetectSaturation, EmptyTraceHasNone) {
    EXPECT_FALSE(train::detect_saturation(train::TrainingTrace{}, 1e-8).has_value());
}

TEST(ReduceToFundamental, MapsLastBetaBelowHalfPi) {
    AngleSchedule s({0.4, 5.0}, {2.8, 2.9});
    const auto r = train::reduce_to_fundamental(s);
    EXPECT_LE(r.betas.back(), pi / 2.0);
    // overlap magnitude is unchanged by the reduction
    EXPECT_NEAR(std::abs(symsim::simulate(5, s).g), std::abs(symsim::simulate(5, r).g), 1e-12);
}

TEST(LastLayerDefect, InvariantUnderSymmetryAndShifts) {
    AngleSchedule s({1.9}, {0.5});
    const double d0 = train::last_layer_defect(s);
    AngleSchedule shifted({1.9 + two_pi}, {0.5});
    EXPECT_NEAR(train::last_layer_defect(shifted), d0, 1e-13);
    AngleSchedule mirrored({two_pi - 1.9}, {pi - 0.5});
    EXPECT_NEAR(train::last_layer_defect(mirrored), d0, 1e-13);
}

TEST(ConcentrationScan, SingleLayerAnglesTrackTheSolver) {
    const auto rows = train::concentration_scan(8, 12, 1, quick_config(19));
    ASSERT_EQ(rows.size(), 5u);
    for (const auto& row : rows) {
        const auto sol = analytic::solve_optimal_p1(row.n);
        EXPECT_NEAR(row.schedule.betas[0], sol.beta, 1e-6);
        EXPECT_NEAR(row.schedule.gammas[0], sol.gamma, 1e-6);
    }
    // successive beta differences shrink
    for (std::size_t i = 2; i < rows.size(); ++i)
        EXPECT_LT(rows[i].angle_diffs[1], rows[i - 1].angle_diffs[1]);
}
