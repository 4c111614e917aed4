#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "degree.hpp"
#include "digraph.hpp"
#include "rng.hpp"

namespace mbn {

/// A metric could not be formed (zero denominator, no reachable pairs, ...).
class DegenerateMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------- clustering

/// Local clustering of node i with edge directions relaxed:
///   C_i = 1/(8 C(m_i,2)) * sum_{j<k} (M_ij+M_ji)(M_ik+M_ki)(M_jk+M_kj)
/// where m_i counts distinct in- or out-neighbours. Zero when m_i < 2.
inline double local_clustering(const Digraph& g, std::size_t i)
{
    std::vector<Node> nb;
    const auto out = g.out_row(i);
    const auto in = g.in_row(i);
    for (std::size_t w = 0; w < g.words(); ++w)
        for (Word word = out[w] | in[w]; word != 0; word &= word - 1)
            nb.push_back(static_cast<Node>(w * 64 + std::countr_zero(word)));
    const std::size_t m = nb.size();
    if (m < 2)
        return 0.0;
    auto weight = [&](std::size_t a, std::size_t b) {
        return (g.has_edge(a, b) ? 1 : 0) + (g.has_edge(b, a) ? 1 : 0);
    };
    std::uint64_t sum = 0;
    for (std::size_t x = 0; x < m; ++x) {
        const int wx = weight(i, nb[x]);
        for (std::size_t y = x + 1; y < m; ++y) {
            const int wxy = weight(nb[x], nb[y]);
            if (wxy != 0)
                sum += static_cast<std::uint64_t>(wx * weight(i, nb[y]) * wxy);
        }
    }
    return static_cast<double>(sum) / (8.0 * static_cast<double>(m * (m - 1) / 2));
}

/// Mean of the local clustering coefficients over all nodes.
inline double clustering_coefficient(const Digraph& g)
{
    if (g.size() == 0)
        return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        total += local_clustering(g, i);
    return total / static_cast<double>(g.size());
}

// --------------------------------------------------------------- path length

struct PathStats {
    double harmonic_mean = std::numeric_limits<double>::infinity(); // +inf when nothing is reachable
    std::size_t reachable_pairs = 0;
    double reciprocal_sum = 0.0;

    bool finite() const noexcept { return std::isfinite(harmonic_mean); }
};

/// Harmonic mean of directed shortest-path lengths over ordered pairs i != j.
/// Unreachable pairs add nothing to the reciprocal sum but still count in N(N-1).
inline PathStats harmonic_path_length(const Digraph& g)
{
    const std::size_t n = g.size();
    const std::size_t words = g.words();
    PathStats stats;
    std::vector<Word> seen(words), frontier(words), next(words);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(seen.begin(), seen.end(), 0);
        std::fill(frontier.begin(), frontier.end(), 0);
        bits::set(seen, s);
        bits::set(frontier, s);
        for (std::size_t depth = 1;; ++depth) {
            std::fill(next.begin(), next.end(), 0);
            for (std::size_t w = 0; w < words; ++w)
                for (Word word = frontier[w]; word != 0; word &= word - 1) {
                    const auto row = g.out_row(w * 64 + std::countr_zero(word));
                    for (std::size_t x = 0; x < words; ++x)
                        next[x] |= row[x];
                }
            std::size_t found = 0;
            for (std::size_t w = 0; w < words; ++w) {
                next[w] &= ~seen[w];
                seen[w] |= next[w];
                found += static_cast<std::size_t>(std::popcount(next[w]));
            }
            if (found == 0)
                break;
            stats.reachable_pairs += found;
            stats.reciprocal_sum += static_cast<double>(found) / static_cast<double>(depth);
            frontier.swap(next);
        }
    }
    if (stats.reciprocal_sum > 0.0)
        stats.harmonic_mean = static_cast<double>(n * (n - 1)) / stats.reciprocal_sum;
    return stats;
}

// ----------------------------------------------------------- small-worldness

/// Mean clustering and path length of degree-matched random networks.
struct RandomReference {
    double c_rand = 0.0;
    double l_rand = 0.0;
    std::size_t samples = 0;
};

inline RandomReference random_reference(std::size_t n, const InDegreeSpec& spec, std::size_t samples, Rng& rng)
{
    if (samples < 1)
        throw std::invalid_argument("random_reference: need at least one reference network");
    RandomReference ref{0.0, 0.0, samples};
    for (std::size_t s = 0; s < samples; ++s) {
        const Digraph r = generate_random_network(n, spec, rng);
        ref.c_rand += clustering_coefficient(r);
        ref.l_rand += harmonic_path_length(r).harmonic_mean;
    }
    ref.c_rand /= static_cast<double>(samples);
    ref.l_rand /= static_cast<double>(samples);
    return ref;
}

struct SmallWorldnessReport {
    double s = 0.0;
    double c = 0.0;
    double l = 0.0;
    double c_rand = 0.0;
    double l_rand = 0.0;
    std::size_t n_reference = 0;
};

/// S = (C / C_rand) / (L / L_rand).
inline SmallWorldnessReport small_worldness(const Digraph& g, const RandomReference& ref)
{
    SmallWorldnessReport r;
    r.c = clustering_coefficient(g);
    r.l = harmonic_path_length(g).harmonic_mean;
    r.c_rand = ref.c_rand;
    r.l_rand = ref.l_rand;
    r.n_reference = ref.samples;
    if (!(ref.c_rand > 0.0))
        throw DegenerateMetric("small-worldness: C_rand is zero");
    if (!std::isfinite(ref.l_rand) || !(ref.l_rand > 0.0))
        throw DegenerateMetric("small-worldness: L_rand is not finite");
    if (!std::isfinite(r.l) || !(r.l > 0.0))
        throw DegenerateMetric("small-worldness: L of the graph is not finite");
    r.s = (r.c / r.c_rand) / (r.l / r.l_rand);
    return r;
}

inline SmallWorldnessReport small_worldness(const Digraph& g, const InDegreeSpec& spec, std::size_t reference_samples,
                                            Rng& rng)
{
    return small_worldness(g, random_reference(g.size(), spec, reference_samples, rng));
}

// ---------------------------------------------------------------- partitions

struct Partition {
    std::vector<std::size_t> assignment;
    std::size_t n_clust = 0;

    static Partition single(std::size_t n) { return {std::vector<std::size_t>(n, 0), n == 0 ? 0u : 1u}; }

    static Partition singletons(std::size_t n)
    {
        Partition p{std::vector<std::size_t>(n), n};
        std::iota(p.assignment.begin(), p.assignment.end(), std::size_t{0});
        return p;
    }

    /// Relabels clusters 0.. in order of first appearance.
    static Partition from_labels(std::span<const std::size_t> labels)
    {
        Partition p;
        p.assignment.resize(labels.size());
        std::vector<std::size_t> remap;
        std::vector<std::size_t> seen;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto it = std::find(seen.begin(), seen.end(), labels[i]);
            if (it == seen.end()) {
                seen.push_back(labels[i]);
                p.assignment[i] = seen.size() - 1;
            } else {
                p.assignment[i] = static_cast<std::size_t>(it - seen.begin());
            }
        }
        p.n_clust = seen.size();
        return p;
    }

    std::vector<std::vector<Node>> members() const
    {
        std::vector<std::vector<Node>> out(n_clust);
        for (std::size_t i = 0; i < assignment.size(); ++i)
            out.at(assignment[i]).push_back(static_cast<Node>(i));
        return out;
    }

    friend bool operator==(const Partition&, const Partition&) = default;
};

// ---------------------------------------------------------------- modularity

enum class ModularityVariant { full, simplified };

struct ModularityOptions {
    ModularityVariant variant = ModularityVariant::full;
    /// Full variant only: keep the i == j expected terms inside each cluster.
    /// With them the one-cluster modularity is exactly zero.
    bool include_diagonal = true;
};

struct ModularityReport {
    double q = 0.0;
    Partition partition;
    ModularityVariant variant = ModularityVariant::full;
    std::size_t intra_edges = 0;
    std::size_t inter_edges = 0;
};

/// Full: Q = 1/E sum_I sum_{i,j in I} (M_ij - m_i^out m_j^in / E).
/// Simplified: the expected term is the density p = E / (N(N-1)), summed
/// over ordered pairs of distinct nodes.
inline ModularityReport modularity(const Digraph& g, const Partition& part, ModularityOptions opt = {})
{
    const std::size_t n = g.size();
    if (part.assignment.size() != n)
        throw std::invalid_argument("modularity: partition size does not match the graph");
    const std::size_t e = g.edge_count();
    if (e == 0)
        throw DegenerateMetric("modularity: undefined for a graph without edges");
    const double edges = static_cast<double>(e);

    std::vector<double> out_sum(part.n_clust, 0.0), in_sum(part.n_clust, 0.0), diag(part.n_clust, 0.0);
    std::vector<double> size(part.n_clust, 0.0);
    std::size_t intra = 0;
    for (auto [a, b] : g.edges())
        if (part.assignment[a] == part.assignment[b])
            ++intra;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = part.assignment[i];
        if (c >= part.n_clust)
            throw std::invalid_argument("modularity: label outside [0, n_clust)");
        const double o = static_cast<double>(g.out_degree(i));
        const double d = static_cast<double>(g.in_degree(i));
        out_sum[c] += o;
        in_sum[c] += d;
        diag[c] += o * d;
        size[c] += 1.0;
    }

    double expected = 0.0;
    if (opt.variant == ModularityVariant::full) {
        for (std::size_t c = 0; c < part.n_clust; ++c)
            expected += out_sum[c] * in_sum[c] - (opt.include_diagonal ? 0.0 : diag[c]);
        expected /= edges;
    } else {
        const double p = edges / (static_cast<double>(n) * static_cast<double>(n - 1));
        for (std::size_t c = 0; c < part.n_clust; ++c)
            expected += p * size[c] * (size[c] - 1.0);
    }
    ModularityReport r;
    r.q = (static_cast<double>(intra) - expected) / edges;
    r.partition = part;
    r.variant = opt.variant;
    r.intra_edges = intra;
    r.inter_edges = e - intra;
    return r;
}

// ------------------------------------------------------ hierarchical merging

/// Symmetric distance matrix, row-major.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> d;

    double operator()(std::size_t i, std::size_t j) const { return d[i * n + j]; }
    double& operator()(std::size_t i, std::size_t j) { return d[i * n + j]; }
};

/// d_ij = 1/2 sum_{k != i,j} (|M_ik - M_jk| + |M_ki - M_kj|).
inline DistanceMatrix hamming_distance_matrix(const Digraph& g)
{
    const std::size_t n = g.size();
    const std::size_t words = g.words();
    DistanceMatrix dm{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::size_t diff = 0;
            for (std::size_t w = 0; w < words; ++w) {
                Word keep = ~Word{0};
                if (w == (i >> 6))
                    keep &= ~(Word{1} << (i & 63));
                if (w == (j >> 6))
                    keep &= ~(Word{1} << (j & 63));
                diff += static_cast<std::size_t>(std::popcount((g.out_row(i)[w] ^ g.out_row(j)[w]) & keep));
                diff += static_cast<std::size_t>(std::popcount((g.in_row(i)[w] ^ g.in_row(j)[w]) & keep));
            }
            dm(i, j) = dm(j, i) = 0.5 * static_cast<double>(diff);
        }
    }
    return dm;
}

/// Agglomerative clustering: repeatedly merge the closest pair of clusters
/// (lowest index pair on ties); the merged cluster's distance to every other
/// cluster is the mean of the two old distances.
inline Partition hierarchical_clustering(const DistanceMatrix& dist, std::size_t n_clust)
{
    const std::size_t n = dist.n;
    if (n_clust < 1 || n_clust > n)
        throw std::invalid_argument("hierarchical_clustering: n_clust must lie in [1, N]");
    DistanceMatrix d = dist;
    std::vector<std::uint8_t> active(n, 1);
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), std::size_t{0});
    for (std::size_t clusters = n; clusters > n_clust; --clusters) {
        std::size_t best_a = n, best_b = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            if (!active[a])
                continue;
            for (std::size_t b = a + 1; b < n; ++b)
                if (active[b] && d(a, b) < best) {
                    best = d(a, b);
                    best_a = a;
                    best_b = b;
                }
        }
        for (std::size_t j = 0; j < n; ++j)
            if (active[j] && j != best_a && j != best_b)
                d(best_a, j) = d(j, best_a) = 0.5 * d(best_a, j) + 0.5 * d(best_b, j);
        active[best_b] = 0;
        for (auto& l : label)
            if (l == best_b)
                l = best_a;
    }
    return Partition::from_labels(label);
}

// --------------------------------------------------------- bisection wrapper

/// Proposes a two-way split of `members` (0/1 per member, in member order).
using SplitHeuristic = std::function<std::vector<std::uint8_t>(const Digraph&, std::span<const Node>, Rng&)>;

/// Greedy two-way modularity split.
///
/// Starts from a random balanced split and keeps moving the single node with
/// the largest positive modularity gain until none is left; the best of a few
/// restarts is returned.
inline std::vector<std::uint8_t> greedy_modularity_split(const Digraph& g, std::span<const Node> members, Rng& rng)
{
    const std::size_t s = members.size();
    if (s < 2)
        return std::vector<std::uint8_t>(s, 0);
    const double edges = std::max<double>(1.0, static_cast<double>(g.edge_count()));
    const std::size_t words = g.words();
    std::vector<double> od(s), id(s);
    for (std::size_t x = 0; x < s; ++x) {
        od[x] = static_cast<double>(g.out_degree(members[x]));
        id[x] = static_cast<double>(g.in_degree(members[x]));
    }

    constexpr int restarts = 4;
    std::vector<std::uint8_t> best_side;
    double best_score = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> order(s);
    for (int attempt = 0; attempt < restarts; ++attempt) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t t = s - 1; t > 0; --t)
            std::swap(order[t], order[rng.uniform_below(t + 1)]);
        std::vector<std::uint8_t> side(s, 0);
        for (std::size_t t = 0; t < s / 2; ++t)
            side[order[t]] = 1;

        std::array<std::vector<Word>, 2> mask{std::vector<Word>(words, 0), std::vector<Word>(words, 0)};
        std::array<double, 2> a{0, 0}, b{0, 0}, e{0, 0};
        std::array<std::size_t, 2> count{0, 0};
        for (std::size_t x = 0; x < s; ++x) {
            bits::set(mask[side[x]], members[x]);
            a[side[x]] += od[x];
            b[side[x]] += id[x];
            ++count[side[x]];
        }
        auto links = [&](std::size_t x, int sd) {
            std::size_t c = 0;
            const auto out = g.out_row(members[x]);
            const auto in = g.in_row(members[x]);
            for (std::size_t w = 0; w < words; ++w)
                c += static_cast<std::size_t>(std::popcount(out[w] & mask[sd][w]) +
                                              std::popcount(in[w] & mask[sd][w]));
            return static_cast<double>(c);
        };
        for (std::size_t x = 0; x < s; ++x)
            e[side[x]] += links(x, side[x]);
        e[0] /= 2.0;
        e[1] /= 2.0;

        for (std::size_t step = 0; step < 8 * s; ++step) {
            double gain_best = 1e-12;
            std::size_t pick = s;
            for (std::size_t x = 0; x < s; ++x) {
                const int from = side[x], to = 1 - side[x];
                if (count[from] == 1)
                    continue;
                const double de = links(x, to) - links(x, from);
                const double before = a[from] * b[from] + a[to] * b[to];
                const double after = (a[from] - od[x]) * (b[from] - id[x]) + (a[to] + od[x]) * (b[to] + id[x]);
                const double gain = de - (after - before) / edges;
                if (gain > gain_best) {
                    gain_best = gain;
                    pick = x;
                }
            }
            if (pick == s)
                break;
            const int from = side[pick], to = 1 - side[pick];
            e[from] -= links(pick, from);
            e[to] += links(pick, to);
            bits::reset(mask[from], members[pick]);
            bits::set(mask[to], members[pick]);
            a[from] -= od[pick];
            b[from] -= id[pick];
            a[to] += od[pick];
            b[to] += id[pick];
            --count[from];
            ++count[to];
            side[pick] = static_cast<std::uint8_t>(to);
        }
        const double score = e[0] + e[1] - (a[0] * b[0] + a[1] * b[1]) / edges;
        if (score > best_score) {
            best_score = score;
            best_side = side;
        }
    }
    return best_side;
}

/// Top-down clustering: starting from one cluster, every current cluster is
/// tentatively split in two and the proposal with the largest full-variant
/// modularity is kept, until n_clust clusters exist.
inline Partition bisection_clustering(const Digraph& g, std::size_t n_clust, Rng& rng,
                                      const SplitHeuristic& split = greedy_modularity_split)
{
    const std::size_t n = g.size();
    if (n_clust < 1 || n_clust > n)
        throw std::invalid_argument("bisection_clustering: n_clust must lie in [1, N]");
    Partition current = Partition::single(n);
    auto score = [&](const Partition& p) { return g.edge_count() == 0 ? 0.0 : modularity(g, p).q; };
    while (current.n_clust < n_clust) {
        const auto groups = current.members();
        Partition best;
        double best_q = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < groups.size(); ++c) {
            if (groups[c].size() < 2)
                continue;
            std::vector<std::uint8_t> side = split(g, groups[c], rng);
            const auto ones = static_cast<std::size_t>(std::count(side.begin(), side.end(), std::uint8_t{1}));
            if (side.size() != groups[c].size())
                throw std::logic_error("bisection_clustering: split heuristic returned the wrong size");
            if (ones == 0 || ones == side.size()) {
                std::fill(side.begin(), side.end(), 0);
                side.back() = 1;
            }
            Partition proposal = current;
            for (std::size_t x = 0; x < side.size(); ++x)
                if (side[x])
                    proposal.assignment[groups[c][x]] = current.n_clust;
            proposal.n_clust = current.n_clust + 1;
            const double q = score(proposal);
            if (q > best_q) {
                best_q = q;
                best = std::move(proposal);
            }
        }
        current = Partition::from_labels(best.assignment);
    }
    return current;
}

} // namespace mbn
