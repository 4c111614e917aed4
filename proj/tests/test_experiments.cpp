#include <mbn/experiments.hpp>
#include <mbn/report.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace mbn;

TEST(WeightSource, Parsing)
{
    EXPECT_EQ(parse_weight_source("delta:8", 3).wtilde, delta_weights(catalog(3), MotifId{8}));
    EXPECT_EQ(parse_weight_source("delta:8", 3).label, "delta8");
    EXPECT_EQ(parse_weight_source("preset:modularity", 3).wtilde, modularity_preset().wtilde);
    EXPECT_EQ(parse_weight_source("zero", 4).wtilde.size(), 218u);
    EXPECT_THROW(parse_weight_source("delta:17", 3), ParseError);
    EXPECT_THROW(parse_weight_source("delta:x", 3), ParseError);
    EXPECT_THROW(parse_weight_source("preset:smallworld", 4), ParseError);
    EXPECT_THROW(parse_weight_source("preset:other", 3), ParseError);
    EXPECT_THROW(parse_weight_source("uniform", 3), ParseError);
    EXPECT_THROW(parse_weight_source("file:/nonexistent/w.json", 3), ParseError);
}

TEST(WeightSource, Files)
{
    const std::string path = ::testing::TempDir() + "mbn_weights.json";
    {
        std::ofstream(path) << R"({"wtilde": [1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,2.5]})";
    }
    EXPECT_EQ(parse_weight_source("file:" + path, 3).wtilde[15], 2.5);
    {
        std::ofstream(path) << "[1, 2]";
    }
    EXPECT_THROW(parse_weight_source("file:" + path, 3), ParseError);
    {
        std::ofstream(path) << "[1, 2";
    }
    EXPECT_THROW(parse_weight_source("file:" + path, 3), ParseError);
    std::remove(path.c_str());
}

TEST(Sweep, RowsSummaryAndDeterminism)
{
    SweepSpec spec;
    spec.n = 20;
    spec.samples = 3;
    spec.p_values = {0.2, 0.1};
    spec.conditions = {parse_weight_source("delta:8", 3), random_condition()};
    spec.measured_motifs = {1, 8};
    const SweepResult a = sweep_motif_counts(spec);
    spec.jobs = 3;
    const SweepResult b = sweep_motif_counts(spec);
    EXPECT_EQ(a.table.to_csv("x"), b.table.to_csv("x"));
    // (2 conditions) x (2 motifs) x (2 p values + summary)
    EXPECT_EQ(a.table.rows.size(), 12u);
    for (const auto& c : a.cells)
        for (const auto& s : c.samples)
            EXPECT_EQ(s.total(), binomial(20, 3));
    const auto* row = a.table.find("RN", 0.1, "motif8");
    ASSERT_NE(row, nullptr);
    EXPECT_EQ(row->count, 3u);

    // summary: 2 x trapezoid over {0, 0.1, 0.2} with the empty graph at p = 0
    const auto c1 = a.cell("delta8", 0.1).counts(MotifId{1});
    const auto c2 = a.cell("delta8", 0.2).counts(MotifId{1});
    std::vector<double> expected;
    for (std::size_t s = 0; s < 3; ++s)
        expected.push_back(2.0 * (0.05 * (1140.0 + c1[s]) + 0.05 * (c1[s] + c2[s])));
    const ResultRow* avg = nullptr;
    for (const auto& r : a.table.rows)
        if (r.condition == "delta8" && r.parameter_name == "p_average" && r.measure == "motif1")
            avg = &r;
    ASSERT_NE(avg, nullptr);
    EXPECT_NEAR(avg->mean, mean(expected), 1e-9);
}

TEST(Sweep, SharedDegreePlansAcrossConditions)
{
    SweepSpec spec;
    spec.n = 25;
    spec.samples = 2;
    spec.p_values = {0.2};
    spec.conditions = {parse_weight_source("delta:8", 3), parse_weight_source("delta:10", 3), random_condition()};
    const SweepResult r = sweep_motif_counts(spec);
    for (std::size_t s = 0; s < 2; ++s) {
        std::uint64_t edges8 = 0, edges_rn = 0;
        const auto& c8 = r.cell("delta8", 0.2).samples[s];
        const auto& crn = r.cell("RN", 0.2).samples[s];
        for (std::size_t m = 0; m < 16; ++m) {
            const auto e = static_cast<std::uint64_t>(catalog(3).edge_count(MotifId::from_index(m)));
            edges8 += e * c8.counts[m];
            edges_rn += e * crn.counts[m];
        }
        EXPECT_EQ(edges8, edges_rn);
    }
}

TEST(Sweep, Validation)
{
    SweepSpec spec;
    spec.conditions = {random_condition()};
    spec.p_values = {0.0};
    EXPECT_THROW(sweep_motif_counts(spec), std::invalid_argument);
    spec.p_values = {0.1};
    spec.samples = 0;
    EXPECT_THROW(sweep_motif_counts(spec), std::invalid_argument);
    spec.samples = 1;
    spec.conditions.clear();
    EXPECT_THROW(sweep_motif_counts(spec), std::invalid_argument);
}

TEST(EmptyStrategies, FormulaRowsEqualCensusRows)
{
    const std::vector<std::size_t> ks{3, 4};
    const ResultTable t = empty_strategy_comparison(12, ks, 2, 1);
    for (double k : {3.0, 4.0})
        for (std::string s : {"intra", "inter"}) {
            const auto* counted = t.find(s, k, "motif1");
            const auto* formula = t.find(s + "-formula", k, "motif1");
            ASSERT_NE(counted, nullptr);
            ASSERT_NE(formula, nullptr);
            EXPECT_EQ(counted->mean, formula->mean);
        }
    EXPECT_NE(t.find("RN", 3.0, "motif1"), nullptr);
    EXPECT_NE(t.find("MBN-delta1", 4.0, "motif1"), nullptr);
}

TEST(GlobalEval, SmallRun)
{
    GlobalEvalSpec spec;
    spec.measure = GlobalMeasure::modularity;
    spec.n = 40;
    spec.samples = 2;
    spec.parameters = {5};
    const std::vector<int> deltas{4};
    const std::vector<double> qs{0.1};
    spec.conditions = default_global_conditions(spec.measure, deltas, qs);
    const GlobalEvalResult r = global_feature_eval(spec);
    EXPECT_EQ(r.table.rows.size(), 4u);
    EXPECT_EQ(r.cell("RN", 5).values.size(), 2u);
    EXPECT_NE(r.table.find("MBN-modularity", 5.0, "Q"), nullptr);
    EXPECT_NE(r.table.find("WS-q0.1", 5.0, "Q"), nullptr);
}

TEST(Continuum, EndpointsAndAngles)
{
    ContinuumSpec spec;
    spec.n = 30;
    spec.samples = 2;
    spec.steps = 2;
    spec.parameter = 5;
    const ContinuumResult r = continuum_experiment(modularity_preset().wtilde, 2, spec);
    ASSERT_EQ(r.points.size(), 4u);
    EXPECT_NEAR(r.points.front().phi, 0.0, 1e-12);
    EXPECT_NEAR(r.points.back().phi, angle(modularity_preset().wtilde, delta_weights(catalog(3), MotifId{2})), 1e-12);
    for (std::size_t i = 1; i < r.points.size(); ++i)
        EXPECT_GT(r.points[i].phi, r.points[i - 1].phi);
    EXPECT_EQ(r.table.rows.size(), 2 * 4u + 2u);
}

TEST(ResultTable, SerialisationEmbedsInvocation)
{
    ResultTable t;
    const std::vector<double> v{1.0, 3.0};
    t.add("RN", "p", 0.1, "motif8", v);
    const std::string csv = t.to_csv("mbn sweep --seed 1");
    EXPECT_NE(csv.find("# invocation: mbn sweep --seed 1"), std::string::npos);
    EXPECT_NE(csv.find("RN,p,0.1,motif8,2,1.414213562,2"), std::string::npos);
    const auto j = t.to_json("mbn sweep --seed 1");
    EXPECT_EQ(j["invocation"], "mbn sweep --seed 1");
    EXPECT_EQ(j["rows"][0]["mean"], 2.0);
}

TEST(Report, CatalogJson)
{
    const auto j = catalog_json(catalog(3));
    EXPECT_EQ(j["class_count"], 16);
    EXPECT_EQ(j["classes"][7]["edges"], 3);
    EXPECT_EQ(j["transitions"].size(), 32u);
    EXPECT_EQ(j["classes"][0]["adapts_to"], nlohmann::json::array({2}));
}

TEST(Parallel, PropagatesExceptions)
{
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7)
                         throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
    std::vector<int> hits(100, 0);
    parallel_for(100, 4, [&](std::size_t i) { hits[i] = static_cast<int>(i); });
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(hits[static_cast<std::size_t>(i)], i);
}

TEST(Sweep, VanishingProbabilityLeavesOnlyEmptyTriads)
{
    SweepSpec spec;
    spec.n = 30;
    spec.samples = 2;
    spec.p_values = {1e-12};
    spec.conditions = {parse_weight_source("delta:8", 3), random_condition()};
    const SweepResult r = sweep_motif_counts(spec);
    for (const auto& cell : r.cells)
        for (const auto& c : cell.samples) {
            EXPECT_EQ(c[MotifId{1}], binomial(30, 3));
            EXPECT_EQ(c.total(), c[MotifId{1}]);
        }
}

TEST(EmptyStrategies, EmptyPromotingMbnSitsBetweenStrategiesAboveRandom)
{
    const std::vector<std::size_t> ks{3, 4, 5};
    const ResultTable t = empty_strategy_comparison(24, ks, 5, 2);
    for (double k : {3.0, 4.0, 5.0}) {
        const double mbn = t.find("MBN-delta1", k, "motif1")->mean;
        EXPECT_GE(mbn, t.find("intra", k, "motif1")->mean);
        EXPECT_LE(mbn, t.find("inter", k, "motif1")->mean);
        EXPECT_LT(t.find("RN", k, "motif1")->mean, t.find("intra", k, "motif1")->mean);
    }
}
