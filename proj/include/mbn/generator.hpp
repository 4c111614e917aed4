#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "degree.hpp"
#include "digraph.hpp"
#include "motif_catalog.hpp"
#include "rng.hpp"

namespace mbn {

/// Scores of every node as a new input of one target node.
struct ScoreVector {
    std::vector<double> lambda;
    std::vector<std::uint8_t> eligible; // i != k and edge i->k absent

    std::size_t eligible_count() const
    {
        return static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), std::uint8_t{1}));
    }
};

/// Three-node scores for target k, given v = G w (32 entries).
///
/// For every eligible i the auxiliary nodes j are bucketed by the pair states
/// (i,j) and (j,k); each of the 16 bucket sizes comes from one AND + popcount
/// over packed rows, and lambda_i = sum over buckets of size * v[premotif].
inline ScoreVector calculate_points_3(Node k, const Digraph& g, std::span<const double> v)
{
    const std::size_t n = g.size();
    const std::size_t words = g.words();
    if (v.size() != 32)
        throw std::invalid_argument("calculate_points_3: expected 32 pre-motif values");
    if (k >= n)
        throw std::out_of_range("calculate_points_3: target out of range");

    std::vector<Word> valid = bits::full_mask(n);
    bits::reset(valid, k);
    const auto out_k = g.out_row(k);
    const auto in_k = g.in_row(k);
    // b digit of the (j,k) pair: 1 j->k only, 2 k->j only, 3 both.
    std::vector<std::array<Word, 4>> bmask(words);
    for (std::size_t w = 0; w < words; ++w) {
        const Word to_k = in_k[w];
        const Word from_k = out_k[w];
        bmask[w] = {~to_k & ~from_k & valid[w], to_k & ~from_k & valid[w], from_k & ~to_k & valid[w],
                    to_k & from_k & valid[w]};
    }

    ScoreVector s{std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k || g.has_edge(i, k))
            continue;
        s.eligible[i] = 1;
        const std::size_t c = g.has_edge(k, i) ? 16 : 0;
        const auto out_i = g.out_row(i);
        const auto in_i = g.in_row(i);
        std::array<std::size_t, 16> q{};
        for (std::size_t w = 0; w < words; ++w) {
            Word keep = valid[w];
            if (w == (i >> 6))
                keep &= ~(Word{1} << (i & 63));
            const Word fwd = out_i[w];
            const Word bwd = in_i[w];
            const std::array<Word, 4> a{~fwd & ~bwd & keep, fwd & ~bwd & keep, bwd & ~fwd & keep,
                                        fwd & bwd & keep};
            for (std::size_t da = 0; da < 4; ++da) {
                if (a[da] == 0)
                    continue;
                for (std::size_t db = 0; db < 4; ++db)
                    q[da + 4 * db] += static_cast<std::size_t>(std::popcount(a[da] & bmask[w][db]));
            }
        }
        double lambda = 0.0;
        for (std::size_t r = 0; r < 16; ++r)
            if (q[r] != 0)
                lambda += static_cast<double>(q[r]) * v[r + c];
        s.lambda[i] = lambda;
    }
    return s;
}

/// Four-node scores for target k, given v = G w (2048 entries).
///
/// Auxiliary nodes are visited as ordered pairs (j1, j2), so every unordered
/// 4-set is counted twice; the uniform factor does not move the argmax.
inline ScoreVector calculate_points_4(Node k, const Digraph& g, std::span<const double> v)
{
    const std::size_t n = g.size();
    if (v.size() != 2048)
        throw std::invalid_argument("calculate_points_4: expected 2048 pre-motif values");
    if (k >= n)
        throw std::out_of_range("calculate_points_4: target out of range");

    auto pair_state = [&](std::size_t x, std::size_t y) -> std::uint32_t {
        return (g.has_edge(x, y) ? 1U : 0U) | (g.has_edge(y, x) ? 2U : 0U);
    };
    std::vector<std::uint8_t> state(n * n, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y)
                state[x * n + y] = static_cast<std::uint8_t>(pair_state(x, y));

    ScoreVector s{std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 0)};
    std::vector<std::uint32_t> aux;
    std::vector<std::uint32_t> first(n), second(n);
    aux.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k || g.has_edge(i, k))
            continue;
        s.eligible[i] = 1;
        const std::uint32_t c = g.has_edge(k, i) ? 1024U : 0U;
        aux.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || j == k)
                continue;
            aux.push_back(static_cast<std::uint32_t>(j));
            const std::uint32_t ij = state[i * n + j];
            const std::uint32_t jk = state[j * n + k];
            first[j] = ij + 64U * jk + c;
            second[j] = 4U * ij + 256U * jk;
        }
        double lambda = 0.0;
        for (std::uint32_t j1 : aux) {
            const std::uint8_t* row = &state[static_cast<std::size_t>(j1) * n];
            const std::uint32_t base = first[j1];
            for (std::uint32_t j2 : aux)
                if (j2 != j1)
                    lambda += v[base + second[j2] + 16U * row[j2]];
        }
        s.lambda[i] = lambda;
    }
    return s;
}

inline ScoreVector calculate_points(int motif_size, Node k, const Digraph& g, std::span<const double> v)
{
    return motif_size == 3 ? calculate_points_3(k, g, v) : calculate_points_4(k, g, v);
}

/// Samples a target with probability u_k / sum(u). Empty when the plan is complete.
inline std::optional<Node> pick_target(const DegreePlan& plan, Rng& rng)
{
    const std::size_t total = plan.total_unassigned();
    if (total == 0)
        return std::nullopt;
    std::uint64_t r = rng.uniform_below(total);
    for (std::size_t k = 0; k < plan.unassigned.size(); ++k) {
        if (r < plan.unassigned[k])
            return static_cast<Node>(k);
        r -= plan.unassigned[k];
    }
    throw std::logic_error("pick_target: weighted walk fell off the end");
}

/// Uniform choice among eligible nodes scoring within rel_tol * max|lambda| of the best.
inline Node pick_source(const ScoreVector& s, Rng& rng, double rel_tol = 1e-9)
{
    double best = -std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (std::size_t i = 0; i < s.lambda.size(); ++i) {
        if (!s.eligible[i])
            continue;
        best = std::max(best, s.lambda[i]);
        scale = std::max(scale, std::abs(s.lambda[i]));
    }
    if (best == -std::numeric_limits<double>::infinity())
        throw std::logic_error("pick_source: no eligible source node");
    const double cutoff = best - rel_tol * scale;
    std::vector<Node> tied;
    for (std::size_t i = 0; i < s.lambda.size(); ++i)
        if (s.eligible[i] && s.lambda[i] >= cutoff)
            tied.push_back(static_cast<Node>(i));
    return tied[rng.uniform_below(tied.size())];
}

struct GeneratorOptions {
    int motif_size = 3;
    bool adapt_weights = true;
    double tie_tolerance = 1e-9;
};

/// Motif-based network generation.
///
/// Draws the in-degree plan, then repeatedly picks a target k weighted by its
/// missing inputs and connects the best-scoring eligible source to it until
/// every node has its planned in-degree. `trace`, when given, receives the
/// edges in insertion order.
inline Digraph generate_mbn(std::size_t n, const InDegreeSpec& spec, std::span<const double> wtilde,
                            const GeneratorOptions& opt, Rng& rng,
                            std::vector<std::pair<Node, Node>>* trace = nullptr)
{
    if (opt.motif_size != 3 && opt.motif_size != 4)
        throw std::invalid_argument("generate_mbn: motif size must be 3 or 4");
    if (n < static_cast<std::size_t>(opt.motif_size))
        throw std::invalid_argument("generate_mbn: network smaller than the motif size");
    const MotifCatalog& cat = catalog(opt.motif_size);
    if (wtilde.size() != cat.class_count())
        throw std::invalid_argument("generate_mbn: weight vector has " + std::to_string(wtilde.size()) +
                                    " entries, expected " + std::to_string(cat.class_count()));

    DegreePlan plan = draw_in_degrees(spec, n, rng);
    const std::vector<double> w =
        opt.adapt_weights ? adapt_weights(wtilde, cat, n) : std::vector<double>(wtilde.begin(), wtilde.end());
    const std::vector<double> v = premotif_values(cat, w);

    Digraph g(n);
    if (trace)
        trace->clear();
    while (const auto k = pick_target(plan, rng)) {
        const ScoreVector scores = calculate_points(opt.motif_size, *k, g, v);
        const Node i = pick_source(scores, rng, opt.tie_tolerance);
        g.add_edge(i, *k);
        --plan.unassigned[*k];
        if (trace)
            trace->emplace_back(i, *k);
    }
    return g;
}

} // namespace mbn
