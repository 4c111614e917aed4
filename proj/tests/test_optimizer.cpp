#include <mbn/optimizer.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mbn;

TEST(Templates, ExpandAndRestrict)
{
    const WeightTemplate t = smallworld_template();
    const std::vector<double> alpha{1, 2, 3, 4};
    const auto w = t.expand(alpha);
    ASSERT_EQ(w.size(), 16u);
    EXPECT_EQ(w[0], 1);
    EXPECT_EQ(w[3], 2);
    EXPECT_EQ(w[11], 3);
    EXPECT_EQ(w[15], 4);
    EXPECT_EQ(std::count(w.begin(), w.end(), 0.0), 12);
    EXPECT_EQ(t.restrict(w), alpha);
    EXPECT_THROW(t.expand(std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Templates, PresetsLiveOnTheirMasks)
{
    const auto sw = smallworld_preset().wtilde;
    EXPECT_EQ(smallworld_template().expand(smallworld_template().restrict(sw)), sw);
    const auto mod = modularity_preset().wtilde;
    EXPECT_EQ(modularity_template().expand(modularity_template().restrict(mod)), mod);
    EXPECT_EQ(&preset_by_name("smallworld"), &smallworld_preset());
    EXPECT_THROW(preset_by_name("nope"), std::invalid_argument);
}

TEST(Ga, RecoversSyntheticOptimum)
{
    const std::vector<double> target{0.5, -1.0, 1.5, 0.2};
    const WeightTemplate tmpl = smallworld_template();
    Objective f = [&](std::span<const double> w, Rng&) {
        const auto a = tmpl.restrict(w);
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += (a[i] - target[i]) * (a[i] - target[i]);
        return -s;
    };
    Rng rng(17);
    const GaResult r = ga_optimize(f, tmpl, {}, rng);
    ASSERT_EQ(r.best_alpha.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_NEAR(r.best_alpha[i], target[i], 0.05);
    EXPECT_EQ(r.trace.size(), 60u);
    for (std::size_t g = 1; g < r.trace.size(); ++g)
        EXPECT_GE(r.trace[g], r.trace[g - 1]);
    for (std::size_t m = 0; m < 16; ++m)
        if (std::find(tmpl.mask.begin(), tmpl.mask.end(), static_cast<int>(m) + 1) == tmpl.mask.end()) {
            EXPECT_EQ(r.best_wtilde[m], 0.0);
        }
}

TEST(Ga, IdenticalPopulationWithoutMutationIsFixed)
{
    GaConfig cfg;
    cfg.init_center = {0.3, -0.7, 1.1, 2.0};
    cfg.init_spread = 0.0;
    cfg.mutation_scale = 0.0;
    cfg.generations = 10;
    Objective f = [](std::span<const double> w, Rng&) { return -std::abs(w[0]); };
    Rng rng(1);
    const GaResult r = ga_optimize(f, smallworld_template(), cfg, rng);
    EXPECT_EQ(r.best_alpha, cfg.init_center);
}

TEST(Ga, FailuresScoreMinusInfinityAndParallelMatchesSerial)
{
    Objective f = [](std::span<const double> w, Rng& rng) {
        if (w[0] > 1.0)
            throw std::runtime_error("fails");
        return -w[0] * w[0] + 0.01 * rng.uniform01();
    };
    GaConfig cfg;
    cfg.generations = 8;
    Rng a(3), b(3);
    const GaResult serial = ga_optimize(f, smallworld_template(), cfg, a);
    cfg.jobs = 4;
    const GaResult threaded = ga_optimize(f, smallworld_template(), cfg, b);
    EXPECT_EQ(serial.best_alpha, threaded.best_alpha);
    EXPECT_EQ(serial.trace, threaded.trace);
    EXPECT_TRUE(std::isfinite(serial.best_value));
}

TEST(Ga, EmptyMaskRejected)
{
    Rng rng(1);
    Objective f = [](std::span<const double>, Rng&) { return 0.0; };
    EXPECT_THROW(ga_optimize(f, WeightTemplate{16, {}}, {}, rng), std::invalid_argument);
}

TEST(Objectives, SmallWorldPresetBeatsZeroWeights)
{
    SmallWorldObjectiveConfig cfg;
    cfg.ks = {3, 5};
    cfg.samples = 4;
    cfg.reference_samples = 4;
    Rng a(5), b(5);
    const double preset = objective_smallworld(smallworld_preset().wtilde, cfg, a);
    const double zero = objective_smallworld(std::vector<double>(16, 0.0), cfg, b);
    EXPECT_GT(preset, zero);
    EXPECT_NEAR(zero, 1.0, 0.15);
}

TEST(Objectives, ModularityPresetBeatsRandom)
{
    ModularityObjectiveConfig cfg;
    cfg.cluster_counts = {10};
    cfg.samples = 5;
    Rng a(6), b(6);
    const double preset = objective_modularity(modularity_preset().wtilde, cfg, a);
    double rn = 0;
    for (int s = 0; s < 5; ++s) {
        const Digraph g = generate_random_network(60, BinomialInDegree{0.1}, b);
        rn += modularity(g, hierarchical_clustering(hamming_distance_matrix(g), 10)).q / 5.0;
    }
    EXPECT_GT(preset, rn);
}

TEST(Arc, EndpointsAndAngles)
{
    const std::vector<double> a{3, 0, 4}, b{0, 2, 0};
    const auto p0 = arc_interpolate(a, b, 0.0);
    const auto p1 = arc_interpolate(a, b, 1.0);
    EXPECT_NEAR(p0[0], 0.6, 1e-15);
    EXPECT_NEAR(p0[2], 0.8, 1e-15);
    EXPECT_NEAR(p1[1], 1.0, 1e-15);
    const auto mid = arc_interpolate(a, b, 0.5);
    EXPECT_NEAR(norm(mid), 1.0, 1e-12);
    EXPECT_NEAR(angle(mid, a), std::numbers::pi / 4, 1e-12);
    EXPECT_NEAR(angle(mid, b), std::numbers::pi / 4, 1e-12);
    const std::vector<double> neg{-3, 0, -4}, zero{0, 0, 0};
    EXPECT_THROW(arc_interpolate(a, neg, 0.5), std::invalid_argument);
    EXPECT_THROW(arc_interpolate(a, zero, 0.5), std::invalid_argument);
}

TEST(Arc, DeltaAnglesAndPresetAngle)
{
    const MotifCatalog& cat = catalog(3);
    EXPECT_NEAR(angle(delta_weights(cat, MotifId{2}), delta_weights(cat, MotifId{3})), std::numbers::pi / 2, 1e-15);
    const std::vector<double> p = modularity_preset().wtilde;
    double sq = 0;
    for (double x : p)
        sq += x * x;
    EXPECT_NEAR(angle(p, delta_weights(cat, MotifId{2})), std::acos(1.3 / std::sqrt(sq)), 1e-14);
}
