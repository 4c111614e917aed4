#include <mbn/baselines.hpp>

#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace mbn;

TEST(RandomNetwork, FollowsPlan)
{
    Rng rng(4);
    const std::vector<std::size_t> deg{1, 0, 4, 2, 3};
    const Digraph g = generate_random_network(5, ExplicitInDegree{deg}, rng);
    for (std::size_t v = 0; v < 5; ++v)
        EXPECT_EQ(g.in_degree(v), deg[v]);
}

TEST(RandomNetwork, SourcesRoughlyUniform)
{
    Rng rng(5);
    std::vector<int> hits(10, 0);
    for (int t = 0; t < 2000; ++t) {
        const Digraph g = generate_random_network(10, DeltaInDegree{1}, rng);
        for (std::size_t u = 1; u < 10; ++u)
            hits[u] += g.has_edge(u, 0) ? 1 : 0;
    }
    for (std::size_t u = 1; u < 10; ++u)
        EXPECT_NEAR(hits[u], 2000.0 / 9.0, 50);
}

TEST(WattsStrogatz, RingWithoutRewiring)
{
    Rng rng(1);
    const Digraph g = generate_ws_directed(10, 3, 0.0, rng);
    for (std::size_t v = 0; v < 10; ++v) {
        EXPECT_EQ(g.in_degree(v), 3u);
        for (std::size_t d = 1; d <= 3; ++d)
            EXPECT_TRUE(g.has_edge((v + 10 - d) % 10, v));
    }
}

TEST(WattsStrogatz, RewiringKeepsInDegree)
{
    Rng rng(2);
    const Digraph g = generate_ws_directed(50, 4, 1.0, rng);
    std::size_t ring_edges = 0;
    for (std::size_t v = 0; v < 50; ++v) {
        EXPECT_EQ(g.in_degree(v), 4u);
        for (std::size_t d = 1; d <= 4; ++d)
            ring_edges += g.has_edge((v + 50 - d) % 50, v);
    }
    EXPECT_LT(ring_edges, 40u);
    EXPECT_THROW(generate_ws_directed(5, 5, 0.1, rng), std::invalid_argument);
    EXPECT_THROW(generate_ws_directed(5, 2, 1.5, rng), std::invalid_argument);
}

TEST(Strategies, InDegreeIsK)
{
    for (auto s : {EmptyStrategy::intra, EmptyStrategy::inter}) {
        const Digraph g = build_strategy(s, 20, 4);
        for (std::size_t v = 0; v < 20; ++v)
            EXPECT_EQ(g.in_degree(v), 4u);
    }
}

TEST(Strategies, ClosedFormsMatchCensus)
{
    const MotifCatalog& cat = catalog(3);
    for (std::size_t n : {12u, 20u})
        for (std::size_t k = 3; 2 * k <= n && k <= 6; ++k) {
            EXPECT_EQ(census(intra_connectivity(n, k), cat)[MotifId{1}], binomial(n - k, 3));
            EXPECT_EQ(census(inter_connectivity(n, k), cat)[MotifId{1}], binomial(n - k, 3) + binomial(k, 3));
        }
}

TEST(Strategies, Validation)
{
    EXPECT_THROW(intra_connectivity(10, 2), std::invalid_argument);
    EXPECT_THROW(intra_connectivity(4, 4), std::invalid_argument);
    EXPECT_THROW(inter_connectivity(7, 4), std::invalid_argument);
    EXPECT_NO_THROW(inter_connectivity(8, 4));
}

TEST(Rewire, NeighbourhoodPreservesInDegree)
{
    const Digraph g = intra_connectivity(8, 3);
    const auto moves = rewire_neighborhood(g);
    EXPECT_EQ(moves.size(), g.edge_count() * (8 - 1 - 3));
    for (const auto& r : moves) {
        const Digraph h = apply_rewire(g, r);
        for (std::size_t v = 0; v < 8; ++v)
            ASSERT_EQ(h.in_degree(v), g.in_degree(v));
    }
    EXPECT_THROW(apply_rewire(g, {7, 0, 6}), std::invalid_argument);
}

TEST(Rewire, StrategiesAreLocallyOptimal)
{
    const MotifCatalog& cat = catalog(3);
    for (auto s : {EmptyStrategy::intra, EmptyStrategy::inter}) {
        const Digraph g = build_strategy(s, 12, 3);
        const auto base = census(g, cat)[MotifId{1}];
        std::size_t strictly_worse = 0;
        for (const auto& r : rewire_neighborhood(g)) {
            const auto after = census(apply_rewire(g, r), cat)[MotifId{1}];
            EXPECT_LE(after, base);
            strictly_worse += after < base;
        }
        EXPECT_GT(strictly_worse, 0u);
    }
}
