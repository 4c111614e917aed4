#include <mbn/motif_catalog.hpp>

#include "support/fraction.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <map>
#include <set>

using namespace mbn;
using namespace testing_support;

TEST(Catalog, ClassCounts)
{
    EXPECT_EQ(build_catalog(3).class_count(), 16u);
    EXPECT_EQ(build_catalog(4).class_count(), 218u);
    EXPECT_THROW(build_catalog(2), std::invalid_argument);
    EXPECT_THROW(build_catalog(5), std::invalid_argument);
}

TEST(Catalog, PartitionMatchesMatrixCanonicalForm)
{
    for (int size : {3, 4}) {
        const MotifCatalog& cat = catalog(size);
        std::map<std::vector<int>, int> class_of_form;
        std::set<int> seen;
        for (std::uint32_t code = 0; code < cat.code_count(); ++code) {
            const auto form = matrix_canonical_form(size, edges_of_code(size, code));
            const int id = cat.classify(code).value;
            const auto [it, inserted] = class_of_form.emplace(form, id);
            ASSERT_EQ(it->second, id) << "size " << size << " code " << code;
            if (inserted) {
                ASSERT_TRUE(seen.insert(id).second) << "two forms share class " << id;
            }
        }
        EXPECT_EQ(class_of_form.size(), cat.class_count());
    }
}

TEST(Catalog, IdsSortedByEdgeCount)
{
    for (int size : {3, 4}) {
        const MotifCatalog& cat = catalog(size);
        for (std::size_t c = 1; c < cat.class_count(); ++c)
            EXPECT_LE(cat.edge_count(MotifId::from_index(c - 1)), cat.edge_count(MotifId::from_index(c)));
        EXPECT_EQ(cat.edge_count(MotifId{1}), 0);
        EXPECT_EQ(cat.edge_count(MotifId::from_index(cat.class_count() - 1)), size * (size - 1));
    }
}

TEST(Catalog, TriadNumberingMatchesDrawings)
{
    const MotifCatalog& cat = catalog(3);
    for (int m = 1; m <= 16; ++m)
        EXPECT_EQ(cat.classify(code_of(3, triad_drawings()[static_cast<std::size_t>(m - 1)])).value, m)
            << "motif " << m;
}

TEST(Catalog, OrbitConsistencyUnderRelabelling)
{
    const MotifCatalog& cat = catalog(3);
    for (std::uint32_t code = 0; code < cat.code_count(); ++code) {
        const Digraph g = graph_of(3, edges_of_code(3, code));
        std::array<Node, 3> perm{0, 1, 2};
        do {
            EXPECT_EQ(cat.classify(induced_code(g.relabeled(perm), std::array<Node, 3>{0, 1, 2})),
                      cat.classify(code));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    const MotifCatalog& cat4 = catalog(4);
    Rng rng(11);
    for (int t = 0; t < 300; ++t) {
        const auto code = static_cast<std::uint32_t>(rng.uniform_below(cat4.code_count()));
        const Digraph g = graph_of(4, edges_of_code(4, code));
        std::array<Node, 4> perm{0, 1, 2, 3};
        for (int s = 3; s > 0; --s)
            std::swap(perm[static_cast<std::size_t>(s)], perm[rng.uniform_below(static_cast<std::uint64_t>(s) + 1)]);
        EXPECT_EQ(cat4.classify(induced_code(g.relabeled(perm), std::array<Node, 4>{0, 1, 2, 3})),
                  cat4.classify(code));
    }
}

TEST(Catalog, DerivedFAgreesWithPrintedExceptRowThree)
{
    const MotifCatalog& cat = catalog(3);
    int matching = 0;
    for (int from = 1; from <= 16; ++from) {
        std::set<int> row;
        for (int to = 1; to <= 16; ++to)
            if (cat.adapts(MotifId{from}, MotifId{to}))
                row.insert(to);
        if (row == printed_f()[static_cast<std::size_t>(from - 1)])
            ++matching;
        else
            EXPECT_EQ(from, 3);
    }
    EXPECT_EQ(matching, 15);
    EXPECT_FALSE(cat.adapts(MotifId{3}, MotifId{9}));
    EXPECT_TRUE(cat.adapts(MotifId{3}, MotifId{7}));
    EXPECT_TRUE(cat.adapts(MotifId{3}, MotifId{8}));
}

TEST(Catalog, FIsOneEdgeRelation)
{
    for (int size : {3, 4}) {
        const MotifCatalog& cat = catalog(size);
        for (std::size_t a = 0; a < cat.class_count(); ++a)
            for (std::size_t b = 0; b < cat.class_count(); ++b)
                if (cat.adapts(MotifId::from_index(a), MotifId::from_index(b))) {
                    EXPECT_EQ(cat.edge_count(MotifId::from_index(b)), cat.edge_count(MotifId::from_index(a)) + 1);
                }
    }
}

TEST(Catalog, DerivedGMatchesPrintedUnderRowMapping)
{
    const MotifCatalog& cat = catalog(3);
    ASSERT_EQ(cat.premotif_count(), 32u);
    std::set<std::uint32_t> rows;
    for (std::uint32_t r = 0; r < 32; ++r) {
        const auto t = cat.transition(r);
        const std::uint32_t row = printed_row_of(r);
        rows.insert(row);
        EXPECT_EQ(t.destroyed.value, printed_g()[row].first) << "premotif " << r;
        EXPECT_EQ(t.formed.value, printed_g()[row].second) << "premotif " << r;
        int minus = 0, plus = 0;
        for (int m = 1; m <= 16; ++m) {
            const int e = cat.g_entry(r, MotifId{m});
            minus += e == -1;
            plus += e == 1;
        }
        EXPECT_EQ(minus, 1);
        EXPECT_EQ(plus, 1);
    }
    EXPECT_EQ(rows.size(), 32u);
}

TEST(Catalog, PremotifsNeverContainCandidateEdge)
{
    for (int size : {3, 4}) {
        const MotifCatalog& cat = catalog(size);
        EXPECT_EQ(cat.premotif_count(), size == 3 ? 32u : 2048u);
        std::set<std::uint32_t> codes;
        for (std::uint32_t r = 0; r < cat.premotif_count(); ++r) {
            const std::uint32_t code = cat.premotif_code(r);
            EXPECT_EQ(code & cat.candidate_bit(), 0u);
            codes.insert(code);
            const auto t = cat.transition(r);
            EXPECT_EQ(cat.edge_count(t.formed), cat.edge_count(t.destroyed) + 1);
        }
        EXPECT_EQ(codes.size(), cat.premotif_count());
    }
}

TEST(Census, ConservationAndExtremes)
{
    const MotifCatalog& cat = catalog(3);
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const Digraph g = random_graph(9, 0.3, rng);
        EXPECT_EQ(census(g, cat).total(), binomial(9, 3));
        EXPECT_EQ(census(g, catalog(4)).total(), binomial(9, 4));
    }
    const auto empty = census(Digraph(10), cat);
    EXPECT_EQ(empty[MotifId{1}], binomial(10, 3));
    const auto full = census(Digraph::complete(7), catalog(4));
    EXPECT_EQ(full[MotifId{218}], binomial(7, 4));
    EXPECT_THROW(census(Digraph(2), cat), std::invalid_argument);
}

TEST(Census, FeedForwardTriangle)
{
    const Digraph g = graph_of(4, {{0, 1}, {1, 2}, {0, 2}});
    const auto c = census(g, catalog(3));
    EXPECT_EQ(c[MotifId{8}], 1u);
    EXPECT_EQ(c[MotifId{2}], 3u);
}

namespace {

std::vector<Fraction> series_adaptation(const std::vector<Fraction>& wtilde, const MotifCatalog& cat, long long n)
{
    std::vector<Fraction> term = wtilde, total = wtilde;
    for (std::size_t power = 1; power <= cat.class_count(); ++power) {
        std::vector<Fraction> next(term.size(), Fraction(0));
        for (std::size_t a = 0; a < term.size(); ++a)
            for (std::size_t b = 0; b < term.size(); ++b)
                if (cat.adapts(MotifId::from_index(a), MotifId::from_index(b)))
                    next[a] = next[a] + term[b] / Fraction(n);
        term = next;
        for (std::size_t a = 0; a < term.size(); ++a)
            total[a] = total[a] + term[a];
    }
    return total;
}

} // namespace

TEST(Adaptation, FeedForwardIdentityExact)
{
    const MotifCatalog& cat = catalog(3);
    for (long long n : {5LL, 50LL, 100LL}) {
        std::vector<Fraction> d8(16, Fraction(0));
        d8[7] = Fraction(1);
        const auto w = adapt_weights<Fraction>(d8, cat, static_cast<std::size_t>(n));
        std::vector<Fraction> expected(16, Fraction(0));
        expected[7] = Fraction(1);
        expected[2] = expected[4] = expected[5] = Fraction(1) / Fraction(n);
        expected[1] = Fraction(3) / Fraction(n * n);
        expected[0] = Fraction(3) / Fraction(n * n * n);
        for (std::size_t i = 0; i < 16; ++i)
            EXPECT_EQ(w[i], expected[i]) << "class " << i + 1 << " n " << n;
    }
}

TEST(Adaptation, BackSubstitutionEqualsSeries)
{
    const MotifCatalog& cat = catalog(3);
    Rng rng(21);
    for (long long n : {5LL, 50LL}) {
        for (int t = 0; t < 10; ++t) {
            std::vector<Fraction> wt(16);
            std::vector<double> wd(16);
            for (std::size_t i = 0; i < 16; ++i) {
                const long long v = static_cast<long long>(rng.uniform_below(41)) - 20;
                wt[i] = Fraction(v);
                wd[i] = static_cast<double>(v);
            }
            const auto exact = adapt_weights<Fraction>(wt, cat, static_cast<std::size_t>(n));
            const auto series = series_adaptation(wt, cat, n);
            const auto fast = adapt_weights(wd, cat, static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < 16; ++i) {
                EXPECT_EQ(exact[i], series[i]);
                EXPECT_NEAR(fast[i], exact[i].to_double(), 1e-12 * std::max(1.0, std::abs(exact[i].to_double())));
            }
        }
    }
}

TEST(Adaptation, LengthAndSizeChecks)
{
    const std::vector<double> short_w(5, 1.0);
    EXPECT_THROW(adapt_weights(short_w, catalog(3), 10), std::invalid_argument);
    const std::vector<double> w(16, 1.0);
    EXPECT_THROW(adapt_weights(w, catalog(3), 1), std::invalid_argument);
}

TEST(Adaptation, DeltaWeights)
{
    const auto d = delta_weights(catalog(3), MotifId{5});
    EXPECT_EQ(d[4], 1.0);
    EXPECT_EQ(std::count(d.begin(), d.end(), 0.0), 15);
    EXPECT_THROW(delta_weights(catalog(3), MotifId{17}), std::invalid_argument);
    EXPECT_THROW(delta_weights(catalog(3), MotifId{0}), std::invalid_argument);
}
