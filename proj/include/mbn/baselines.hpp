#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "degree.hpp"
#include "digraph.hpp"
#include "motif_catalog.hpp"
#include "rng.hpp"

namespace mbn {

/// Random network with the given in-degree spec: each node draws its n_i
/// sources uniformly without replacement from the other N-1 nodes.
inline Digraph generate_random_network(std::size_t n, const InDegreeSpec& spec, Rng& rng)
{
    const DegreePlan plan = draw_in_degrees(spec, n, rng);
    Digraph g(n);
    std::vector<Node> pool(n - 1);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t at = 0;
        for (std::size_t u = 0; u < n; ++u)
            if (u != v)
                pool[at++] = static_cast<Node>(u);
        // partial Fisher-Yates
        for (std::size_t t = 0; t < plan.targets[v]; ++t) {
            const std::size_t pick = t + rng.uniform_below(pool.size() - t);
            std::swap(pool[t], pool[pick]);
            g.add_edge(pool[t], v);
        }
    }
    return g;
}

/// Directed Watts-Strogatz ring.
///
/// Node v first receives inputs from v-1, ..., v-K (mod n). Then each edge,
/// visited by target and ring offset, has its source replaced with
/// probability q by a uniform node that is neither v nor already a source
/// of v. In-degrees stay exactly K.
inline Digraph generate_ws_directed(std::size_t n, std::size_t k, double q, Rng& rng)
{
    if (n < 2 || k < 1 || k > n - 1)
        throw std::invalid_argument("generate_ws_directed: need 1 <= K <= N-1");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("generate_ws_directed: q must lie in [0,1]");
    Digraph g(n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t d = 1; d <= k; ++d)
            g.add_edge((v + n - d) % n, v);
    std::vector<Node> options;
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t d = 1; d <= k; ++d) {
            if (!rng.bernoulli(q))
                continue;
            const std::size_t src = (v + n - d) % n;
            if (!g.has_edge(src, v))
                continue; // already moved by an earlier rewire of this target
            options.clear();
            for (std::size_t u = 0; u < n; ++u)
                if (u != v && u != src && !g.has_edge(u, v))
                    options.push_back(static_cast<Node>(u));
            if (options.empty())
                continue;
            g.remove_edge(src, v);
            g.add_edge(options[rng.uniform_below(options.size())], v);
        }
    }
    return g;
}

enum class EmptyStrategy { intra, inter };

inline void check_strategy(EmptyStrategy s, std::size_t n, std::size_t k)
{
    if (k < 3)
        throw std::invalid_argument("empty-motif strategy: K must be at least 3");
    if (s == EmptyStrategy::intra && k + 1 > n)
        throw std::invalid_argument("intra-connectivity: need K+1 <= N");
    if (s == EmptyStrategy::inter && 2 * k > n)
        throw std::invalid_argument("inter-connectivity: need 2K <= N");
}

/// Nodes 0..K form a bidirectionally complete cluster; every other node
/// receives inputs from nodes 0..K-1.
inline Digraph intra_connectivity(std::size_t n, std::size_t k)
{
    check_strategy(EmptyStrategy::intra, n, k);
    Digraph g(n);
    for (std::size_t a = 0; a <= k; ++a)
        for (std::size_t b = 0; b <= k; ++b)
            if (a != b)
                g.add_edge(a, b);
    for (std::size_t v = k + 1; v < n; ++v)
        for (std::size_t a = 0; a < k; ++a)
            g.add_edge(a, v);
    return g;
}

/// Nodes 0..K-1 project to every node K..N-1; nodes K..2K-1 project back to 0..K-1.
inline Digraph inter_connectivity(std::size_t n, std::size_t k)
{
    check_strategy(EmptyStrategy::inter, n, k);
    Digraph g(n);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t v = k; v < n; ++v)
            g.add_edge(a, v);
    for (std::size_t b = k; b < 2 * k; ++b)
        for (std::size_t a = 0; a < k; ++a)
            g.add_edge(b, a);
    return g;
}

inline Digraph build_strategy(EmptyStrategy s, std::size_t n, std::size_t k)
{
    return s == EmptyStrategy::intra ? intra_connectivity(n, k) : inter_connectivity(n, k);
}

/// Closed-form empty three-node motif count of a strategy network.
inline std::uint64_t empty_motif_count(EmptyStrategy s, std::size_t n, std::size_t k)
{
    check_strategy(s, n, k);
    const std::uint64_t outside = binomial(n - k, 3);
    return s == EmptyStrategy::intra ? outside : outside + binomial(k, 3);
}

/// Replace the source of edge source->target with new_source.
struct SourceRewire {
    Node source;
    Node target;
    Node new_source;
};

/// Every in-degree-preserving single-source rewire of g.
inline std::vector<SourceRewire> rewire_neighborhood(const Digraph& g)
{
    std::vector<SourceRewire> out;
    const std::size_t n = g.size();
    for (auto [src, dst] : g.edges())
        for (std::size_t alt = 0; alt < n; ++alt)
            if (alt != dst && !g.has_edge(alt, dst))
                out.push_back({src, dst, static_cast<Node>(alt)});
    return out;
}

inline Digraph apply_rewire(Digraph g, const SourceRewire& r)
{
    if (!g.remove_edge(r.source, r.target))
        throw std::invalid_argument("apply_rewire: edge to rewire is absent");
    if (!g.add_edge(r.new_source, r.target))
        throw std::invalid_argument("apply_rewire: replacement edge already present");
    return g;
}

} // namespace mbn
