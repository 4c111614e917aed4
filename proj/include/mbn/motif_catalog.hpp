#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "digraph.hpp"

namespace mbn {

/// 1-based motif class number within a catalog.
struct MotifId {
    int value = 1;

    constexpr std::size_t index() const noexcept { return static_cast<std::size_t>(value - 1); }
    static constexpr MotifId from_index(std::size_t i) noexcept { return MotifId{static_cast<int>(i) + 1}; }

    friend constexpr auto operator<=>(MotifId, MotifId) = default;
};

/// Effect of adding the candidate edge i->k to one pre-motif: exactly one
/// class loses a member and one class gains one.
struct PremotifTransition {
    MotifId destroyed;
    MotifId formed;
};

namespace detail {

inline int pair_count(int size) noexcept { return size * (size - 1); }

inline std::uint32_t permute_code(std::uint32_t code, int size, std::span<const int> perm) noexcept
{
    std::uint32_t out = 0;
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b)
            if (a != b && ((code >> pair_bit(size, a, b)) & 1U))
                out |= 1U << pair_bit(size, perm[a], perm[b]);
    return out;
}

inline std::vector<std::vector<int>> all_permutations(int size)
{
    std::vector<int> p(static_cast<std::size_t>(size));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline std::uint32_t code_of_edges(int size, std::initializer_list<std::pair<int, int>> edges) noexcept
{
    std::uint32_t code = 0;
    for (auto [a, b] : edges)
        code |= 1U << pair_bit(size, a, b);
    return code;
}

// One representative per three-node class, listed in class-id order. The
// numbering follows the customary figure of the 16 triads: ids grow with the
// edge count, and within each edge count the order is pinned by which classes
// reach which by one added edge (see docs/motif_numbering.md).
inline std::array<std::uint32_t, 16> triad_representatives() noexcept
{
    return {
        code_of_edges(3, {}),                                       // 1  empty
        code_of_edges(3, {{0, 1}}),                                 // 2  single edge
        code_of_edges(3, {{0, 2}, {1, 2}}),                         // 3  convergent
        code_of_edges(3, {{0, 1}, {1, 0}}),                         // 4  mutual dyad
        code_of_edges(3, {{0, 1}, {1, 2}}),                         // 5  chain
        code_of_edges(3, {{0, 1}, {0, 2}}),                         // 6  divergent
        code_of_edges(3, {{0, 1}, {1, 0}, {2, 0}}),                 // 7  input to dyad
        code_of_edges(3, {{0, 1}, {0, 2}, {1, 2}}),                 // 8  feed-forward
        code_of_edges(3, {{0, 1}, {1, 0}, {0, 2}}),                 // 9  output from dyad
        code_of_edges(3, {{0, 1}, {1, 2}, {2, 0}}),                 // 10 feedback cycle
        code_of_edges(3, {{0, 1}, {1, 0}, {2, 0}, {2, 1}}),         // 11 divergent into dyad
        code_of_edges(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}}),         // 12 two dyads
        code_of_edges(3, {{0, 1}, {1, 0}, {1, 2}, {2, 0}}),         // 13 dyad + cycle
        code_of_edges(3, {{0, 1}, {1, 0}, {0, 2}, {1, 2}}),         // 14 dyad converging out
        code_of_edges(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}}), // 15 five edges
        code_of_edges(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}), // 16 complete
    };
}

} // namespace detail

/// Motif classes of one subgraph size together with the pre-motif
/// transition table (G) and the one-edge adaptation relation (F).
///
/// Class ids are ordered by non-decreasing edge count, so F is strictly upper
/// triangular in id order.
class MotifCatalog {
public:
    explicit MotifCatalog(int size) : size_(size)
    {
        if (size != 3 && size != 4)
            throw std::invalid_argument("MotifCatalog: motif size must be 3 or 4, got " +
                                        std::to_string(size));
        enumerate_classes();
        derive_f();
        derive_g();
    }

    int motif_size() const noexcept { return size_; }
    std::size_t class_count() const noexcept { return canonical_.size(); }
    std::size_t premotif_count() const noexcept { return transitions_.size(); }
    std::size_t code_count() const noexcept { return class_of_code_.size(); }
    int code_bits() const noexcept { return detail::pair_count(size_); }

    MotifId classify(std::uint32_t code) const
    {
        if (code >= class_of_code_.size())
            throw std::invalid_argument("classify: code has more bits than the catalog size allows");
        return MotifId{class_of_code_[code]};
    }

    std::uint32_t canonical_code(MotifId m) const { return canonical_.at(m.index()); }
    int edge_count(MotifId m) const { return std::popcount(canonical_.at(m.index())); }

    /// Smallest labelled code over all node relabellings.
    std::uint32_t canonicalize(std::uint32_t code) const
    {
        std::uint32_t best = code;
        for (const auto& p : perms_)
            best = std::min(best, detail::permute_code(code, size_, p));
        return best;
    }

    /// F(from, to) == true iff one added edge turns a `from` subgraph into a `to` subgraph.
    bool adapts(MotifId from, MotifId to) const
    {
        return f_.at(from.index() * class_count() + to.index()) != 0;
    }

    const PremotifTransition& transition(std::uint32_t premotif) const { return transitions_.at(premotif); }
    std::span<const PremotifTransition> transitions() const noexcept { return transitions_; }

    /// Dense G entry: -1 destroyed, +1 formed, 0 otherwise.
    int g_entry(std::uint32_t premotif, MotifId m) const
    {
        const auto& t = transition(premotif);
        return m == t.formed ? 1 : (m == t.destroyed ? -1 : 0);
    }

    /// Labelled code of pre-motif r before the candidate edge is added.
    ///
    /// Three-node layout: positions i=0, j=1, k=2 and r = a + 4b + 16c, where
    /// a encodes the (i,j) pair and b the (j,k) pair as 0 none, 1 forward
    /// only (i->j resp. j->k), 2 backward only, 3 both; c is the k->i edge.
    ///
    /// Four-node layout: positions i=0, j1=1, j2=2, k=3 and five base-4 digits
    /// for the pairs (i,j1) (i,j2) (j1,j2) (j1,k) (j2,k), least significant
    /// first, then the k->i bit (value 1024).
    std::uint32_t premotif_code(std::uint32_t r) const
    {
        const int k = size_ - 1;
        std::uint32_t code = 0;
        auto put_pair = [&](std::uint32_t digit, int a, int b) {
            if (digit & 1U)
                code |= 1U << pair_bit(size_, a, b);
            if (digit & 2U)
                code |= 1U << pair_bit(size_, b, a);
        };
        if (size_ == 3) {
            put_pair(r & 3U, 0, 1);
            put_pair((r >> 2) & 3U, 1, 2);
        } else {
            put_pair(r & 3U, 0, 1);
            put_pair((r >> 2) & 3U, 0, 2);
            put_pair((r >> 4) & 3U, 1, 2);
            put_pair((r >> 6) & 3U, 1, 3);
            put_pair((r >> 8) & 3U, 2, 3);
        }
        const std::uint32_t back_bit = size_ == 3 ? 16U : 1024U;
        if (r & back_bit)
            code |= 1U << pair_bit(size_, k, 0);
        return code;
    }

    /// Bit of the candidate edge i->k in a labelled pre-motif code.
    std::uint32_t candidate_bit() const noexcept { return 1U << pair_bit(size_, 0, size_ - 1); }

private:
    void enumerate_classes()
    {
        perms_ = detail::all_permutations(size_);
        const std::uint32_t codes = 1U << detail::pair_count(size_);
        std::vector<std::uint32_t> canon(codes);
        for (std::uint32_t c = 0; c < codes; ++c)
            canon[c] = canonicalize(c);

        std::vector<std::uint32_t> reps(canon);
        std::sort(reps.begin(), reps.end());
        reps.erase(std::unique(reps.begin(), reps.end()), reps.end());

        if (size_ == 3) {
            canonical_.clear();
            for (std::uint32_t rep : detail::triad_representatives())
                canonical_.push_back(canonicalize(rep));
            std::vector<std::uint32_t> check(canonical_);
            std::sort(check.begin(), check.end());
            if (check != reps)
                throw std::logic_error("MotifCatalog: triad numbering table is inconsistent");
        } else {
            std::stable_sort(reps.begin(), reps.end(), [](std::uint32_t a, std::uint32_t b) {
                return std::popcount(a) < std::popcount(b);
            });
            canonical_ = reps;
        }

        std::map<std::uint32_t, int> id_of;
        for (std::size_t i = 0; i < canonical_.size(); ++i)
            id_of[canonical_[i]] = static_cast<int>(i) + 1;
        class_of_code_.resize(codes);
        for (std::uint32_t c = 0; c < codes; ++c)
            class_of_code_[c] = id_of.at(canon[c]);
    }

    void derive_f()
    {
        const std::size_t n = class_count();
        f_.assign(n * n, 0);
        for (std::size_t l = 0; l < n; ++l) {
            const std::uint32_t code = canonical_[l];
            for (int bit = 0; bit < code_bits(); ++bit) {
                if ((code >> bit) & 1U)
                    continue;
                const MotifId to = classify(code | (1U << bit));
                f_[l * n + to.index()] = 1;
            }
        }
    }

    void derive_g()
    {
        const std::uint32_t count = size_ == 3 ? 32U : 2048U;
        transitions_.resize(count);
        for (std::uint32_t r = 0; r < count; ++r) {
            const std::uint32_t before = premotif_code(r);
            transitions_[r] = {classify(before), classify(before | candidate_bit())};
        }
    }

    int size_;
    std::vector<std::vector<int>> perms_;
    std::vector<std::uint32_t> canonical_;
    std::vector<int> class_of_code_;
    std::vector<std::uint8_t> f_;
    std::vector<PremotifTransition> transitions_;
};

inline MotifCatalog build_catalog(int size) { return MotifCatalog(size); }

/// Shared immutable catalogs, built on first use.
inline const MotifCatalog& catalog(int size)
{
    if (size == 3) {
        static const MotifCatalog c3(3);
        return c3;
    }
    if (size == 4) {
        static const MotifCatalog c4(4);
        return c4;
    }
    throw std::invalid_argument("catalog: motif size must be 3 or 4");
}

struct MotifCensus {
    int motif_size = 3;
    std::vector<std::uint64_t> counts;

    std::uint64_t operator[](MotifId m) const { return counts.at(m.index()); }
    std::uint64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

    friend bool operator==(const MotifCensus&, const MotifCensus&) = default;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

/// Brute-force count of every induced subgraph class over all node subsets.
inline MotifCensus census(const Digraph& g, const MotifCatalog& cat)
{
    const int s = cat.motif_size();
    const std::size_t n = g.size();
    if (n < static_cast<std::size_t>(s))
        throw std::invalid_argument("census: graph has fewer nodes than the motif size");
    MotifCensus out{s, std::vector<std::uint64_t>(cat.class_count(), 0)};
    std::array<Node, 4> t{};
    if (s == 3) {
        for (t[0] = 0; t[0] < n; ++t[0])
            for (t[1] = t[0] + 1; t[1] < n; ++t[1])
                for (t[2] = t[1] + 1; t[2] < n; ++t[2])
                    ++out.counts[cat.classify(induced_code(g, std::span<const Node>(t.data(), 3))).index()];
    } else {
        for (t[0] = 0; t[0] < n; ++t[0])
            for (t[1] = t[0] + 1; t[1] < n; ++t[1])
                for (t[2] = t[1] + 1; t[2] < n; ++t[2])
                    for (t[3] = t[2] + 1; t[3] < n; ++t[3])
                        ++out.counts[cat.classify(induced_code(g, t)).index()];
    }
    return out;
}

/// Effective weights w solving (I - F/N) w = wtilde.
///
/// F only links a class to classes with one more edge and ids are sorted by
/// edge count, so the system is solved exactly by back-substitution from the
/// last id down. Templated so exact rational types can be used.
template <typename T>
std::vector<T> adapt_weights(std::span<const T> wtilde, const MotifCatalog& cat, std::size_t n)
{
    const std::size_t m = cat.class_count();
    if (wtilde.size() != m)
        throw std::invalid_argument("adapt_weights: weight vector has " + std::to_string(wtilde.size()) +
                                    " entries, catalog has " + std::to_string(m));
    if (n < 2)
        throw std::invalid_argument("adapt_weights: network size must be at least 2");
    std::vector<T> w(wtilde.begin(), wtilde.end());
    const T size = static_cast<T>(static_cast<long long>(n));
    for (std::size_t l = m; l-- > 0;) {
        T acc = static_cast<T>(0);
        for (std::size_t to = l + 1; to < m; ++to)
            if (cat.adapts(MotifId::from_index(l), MotifId::from_index(to)))
                acc = acc + w[to];
        w[l] = wtilde[l] + acc / size;
    }
    return w;
}

inline std::vector<double> adapt_weights(std::span<const double> wtilde, const MotifCatalog& cat, std::size_t n)
{
    return adapt_weights<double>(wtilde, cat, n);
}

/// Per-pre-motif score contribution v = G w.
inline std::vector<double> premotif_values(const MotifCatalog& cat, std::span<const double> w)
{
    if (w.size() != cat.class_count())
        throw std::invalid_argument("premotif_values: weight length mismatch");
    std::vector<double> v(cat.premotif_count());
    for (std::size_t r = 0; r < v.size(); ++r) {
        const auto& t = cat.transition(static_cast<std::uint32_t>(r));
        v[r] = w[t.formed.index()] - w[t.destroyed.index()];
    }
    return v;
}

/// Unit vector on class m.
inline std::vector<double> delta_weights(const MotifCatalog& cat, MotifId m)
{
    if (m.value < 1 || m.index() >= cat.class_count())
        throw std::invalid_argument("delta_weights: motif id " + std::to_string(m.value) + " out of range");
    std::vector<double> w(cat.class_count(), 0.0);
    w[m.index()] = 1.0;
    return w;
}

} // namespace mbn
