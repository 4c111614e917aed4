#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbn {

using Node = std::uint32_t;
using Word = std::uint64_t;

/// Thrown for malformed input text (edge lists, specs, weight files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace bits {

constexpr std::size_t words_for(std::size_t n) noexcept { return (n + 63) / 64; }

inline bool test(std::span<const Word> set, std::size_t i) noexcept
{
    return (set[i >> 6] >> (i & 63)) & 1U;
}

inline void set(std::span<Word> set, std::size_t i) noexcept { set[i >> 6] |= Word{1} << (i & 63); }
inline void reset(std::span<Word> set, std::size_t i) noexcept { set[i >> 6] &= ~(Word{1} << (i & 63)); }

inline std::size_t count(std::span<const Word> set) noexcept
{
    std::size_t c = 0;
    for (Word w : set)
        c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

/// Mask with the low n bits set, spread over words_for(n) words.
inline std::vector<Word> full_mask(std::size_t n)
{
    std::vector<Word> m(words_for(n), ~Word{0});
    if (n % 64 != 0)
        m.back() = (Word{1} << (n % 64)) - 1;
    return m;
}

} // namespace bits

/// Dense directed graph without self-loops.
///
/// Both the out-rows and the in-columns are kept as packed bitsets so that
/// motif scoring can combine them with word-wide operations.
class Digraph {
public:
    Digraph() = default;

    explicit Digraph(std::size_t n)
        : n_(n), words_(bits::words_for(n)), out_(n * words_), in_(n * words_)
    {
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t words() const noexcept { return words_; }
    std::size_t edge_count() const noexcept { return edges_; }

    bool has_edge(std::size_t from, std::size_t to) const noexcept
    {
        return bits::test(out_row(from), to);
    }

    /// Returns false if the edge was already present.
    bool add_edge(std::size_t from, std::size_t to)
    {
        check(from, to);
        if (has_edge(from, to))
            return false;
        bits::set(row(out_, from), to);
        bits::set(row(in_, to), from);
        ++edges_;
        return true;
    }

    bool remove_edge(std::size_t from, std::size_t to)
    {
        check(from, to);
        if (!has_edge(from, to))
            return false;
        bits::reset(row(out_, from), to);
        bits::reset(row(in_, to), from);
        --edges_;
        return true;
    }

    /// Bit j set iff edge i->j.
    std::span<const Word> out_row(std::size_t i) const noexcept
    {
        return {out_.data() + i * words_, words_};
    }

    /// Bit j set iff edge j->i.
    std::span<const Word> in_row(std::size_t i) const noexcept
    {
        return {in_.data() + i * words_, words_};
    }

    std::size_t out_degree(std::size_t i) const noexcept { return bits::count(out_row(i)); }
    std::size_t in_degree(std::size_t i) const noexcept { return bits::count(in_row(i)); }

    std::vector<std::pair<Node, Node>> edges() const
    {
        std::vector<std::pair<Node, Node>> list;
        list.reserve(edges_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t w = 0; w < words_; ++w)
                for (Word word = out_[i * words_ + w]; word != 0; word &= word - 1)
                    list.emplace_back(static_cast<Node>(i),
                                      static_cast<Node>(w * 64 + std::countr_zero(word)));
        return list;
    }

    /// Graph with every edge reversed.
    Digraph transposed() const
    {
        Digraph t(n_);
        t.out_ = in_;
        t.in_ = out_;
        t.edges_ = edges_;
        return t;
    }

    /// Graph with node i renamed to perm[i].
    Digraph relabeled(std::span<const Node> perm) const
    {
        if (perm.size() != n_)
            throw std::invalid_argument("relabeled: permutation size mismatch");
        Digraph r(n_);
        for (auto [a, b] : edges())
            r.add_edge(perm[a], perm[b]);
        return r;
    }

    static Digraph complete(std::size_t n)
    {
        Digraph g(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    g.add_edge(i, j);
        return g;
    }

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    std::span<Word> row(std::vector<Word>& store, std::size_t i) noexcept
    {
        return {store.data() + i * words_, words_};
    }

    void check(std::size_t from, std::size_t to) const
    {
        if (from >= n_ || to >= n_)
            throw std::out_of_range("Digraph: node id out of range");
        if (from == to)
            throw std::invalid_argument("Digraph: self-loops are not allowed");
    }

    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::size_t edges_ = 0;
    std::vector<Word> out_;
    std::vector<Word> in_;
};

/// Off-diagonal adjacency of the subgraph induced by an ordered node tuple.
///
/// Bit order: ordered position pairs (a,b), a != b, enumerated with a as the
/// major index and b as the minor index. For three nodes the bits are
/// (0,1) (0,2) (1,0) (1,2) (2,0) (2,1) -> bits 0..5; four nodes give twelve
/// bits the same way, (0,1) (0,2) (0,3) (1,0) ... (3,2).
constexpr int pair_bit(int size, int a, int b) noexcept
{
    return a * (size - 1) + (b < a ? b : b - 1);
}

inline std::uint32_t induced_code(const Digraph& g, std::span<const Node> nodes)
{
    const int size = static_cast<int>(nodes.size());
    if (size != 3 && size != 4)
        throw std::invalid_argument("induced_code: tuple must have 3 or 4 nodes");
    for (int a = 0; a < size; ++a) {
        if (nodes[a] >= g.size())
            throw std::out_of_range("induced_code: node id out of range");
        for (int b = 0; b < a; ++b)
            if (nodes[a] == nodes[b])
                throw std::invalid_argument("induced_code: duplicate node");
    }
    std::uint32_t code = 0;
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b)
            if (a != b && g.has_edge(nodes[a], nodes[b]))
                code |= 1U << pair_bit(size, a, b);
    return code;
}

// Edge-list text: "n=<count>" header, then one "source,target" line per edge.

inline std::string write_edge_list(const Digraph& g)
{
    std::string out = "n=" + std::to_string(g.size()) + "\n";
    for (auto [a, b] : g.edges()) {
        out += std::to_string(a);
        out += ',';
        out += std::to_string(b);
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::size_t parse_index(std::string_view s, std::size_t line)
{
    s = trim(s);
    if (s.empty())
        throw ParseError("line " + std::to_string(line) + ": empty field");
    std::size_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            throw ParseError("line " + std::to_string(line) + ": not a non-negative integer: '" +
                             std::string(s) + "'");
        v = v * 10 + static_cast<std::size_t>(c - '0');
        if (v > (std::size_t{1} << 40))
            throw ParseError("line " + std::to_string(line) + ": value too large");
    }
    return v;
}

} // namespace detail

/// Parses the edge-list format. Blank lines and lines starting with '#' are
/// skipped; self-loops, out-of-range ids and repeated edges are rejected.
inline Digraph read_edge_list(std::string_view text)
{
    std::size_t line_no = 0;
    bool have_header = false;
    Digraph g;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = detail::trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (line.empty() || line.front() == '#')
            continue;
        if (!have_header) {
            if (line.substr(0, 2) != "n=")
                throw ParseError("line " + std::to_string(line_no) + ": expected 'n=<count>' header");
            g = Digraph(detail::parse_index(line.substr(2), line_no));
            have_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'source,target'");
        const std::size_t a = detail::parse_index(line.substr(0, comma), line_no);
        const std::size_t b = detail::parse_index(line.substr(comma + 1), line_no);
        if (a >= g.size() || b >= g.size())
            throw ParseError("line " + std::to_string(line_no) + ": node id out of range");
        if (a == b)
            throw ParseError("line " + std::to_string(line_no) + ": self-loop " + std::to_string(a));
        if (!g.add_edge(a, b))
            throw ParseError("line " + std::to_string(line_no) + ": duplicate edge");
    }
    if (!have_header)
        throw ParseError("edge list: missing 'n=<count>' header");
    return g;
}

} // namespace mbn
