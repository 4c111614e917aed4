#pragma once

#include <cstddef>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "digraph.hpp"
#include "rng.hpp"

namespace mbn {

class InvalidSpec : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// In-degree n_i ~ Binomial(N-1, p).
struct BinomialInDegree {
    double p = 0.0;
    friend bool operator==(const BinomialInDegree&, const BinomialInDegree&) = default;
};

/// Every node receives exactly k inputs.
struct DeltaInDegree {
    std::size_t k = 0;
    friend bool operator==(const DeltaInDegree&, const DeltaInDegree&) = default;
};

/// Per-node in-degrees given up front.
struct ExplicitInDegree {
    std::vector<std::size_t> degrees;
    friend bool operator==(const ExplicitInDegree&, const ExplicitInDegree&) = default;
};

using InDegreeSpec = std::variant<BinomialInDegree, DeltaInDegree, ExplicitInDegree>;

/// Target in-degrees and the inputs still missing at each node.
struct DegreePlan {
    std::vector<std::size_t> targets;
    std::vector<std::size_t> unassigned;

    std::size_t total_unassigned() const
    {
        return std::accumulate(unassigned.begin(), unassigned.end(), std::size_t{0});
    }
};

inline void validate(const InDegreeSpec& spec, std::size_t n)
{
    if (n < 2)
        throw InvalidSpec("in-degree spec: need at least 2 nodes");
    if (const auto* b = std::get_if<BinomialInDegree>(&spec)) {
        if (!(b->p >= 0.0 && b->p <= 1.0))
            throw InvalidSpec("binomial in-degree: p must lie in [0,1]");
    } else if (const auto* d = std::get_if<DeltaInDegree>(&spec)) {
        if (d->k > n - 1)
            throw InvalidSpec("delta in-degree: K=" + std::to_string(d->k) + " exceeds N-1=" +
                              std::to_string(n - 1));
    } else {
        const auto& e = std::get<ExplicitInDegree>(spec);
        if (e.degrees.size() != n)
            throw InvalidSpec("explicit in-degree: expected " + std::to_string(n) + " entries, got " +
                              std::to_string(e.degrees.size()));
        for (std::size_t v : e.degrees)
            if (v > n - 1)
                throw InvalidSpec("explicit in-degree: entry exceeds N-1");
    }
}

inline DegreePlan draw_in_degrees(const InDegreeSpec& spec, std::size_t n, Rng& rng)
{
    validate(spec, n);
    DegreePlan plan;
    plan.targets.resize(n);
    if (const auto* b = std::get_if<BinomialInDegree>(&spec)) {
        for (auto& t : plan.targets) {
            std::size_t hits = 0;
            for (std::size_t trial = 0; trial + 1 < n; ++trial)
                hits += rng.bernoulli(b->p) ? 1 : 0;
            t = hits;
        }
    } else if (const auto* d = std::get_if<DeltaInDegree>(&spec)) {
        std::fill(plan.targets.begin(), plan.targets.end(), d->k);
    } else {
        plan.targets = std::get<ExplicitInDegree>(spec).degrees;
    }
    plan.unassigned = plan.targets;
    return plan;
}

/// Mean in-degree the spec produces on n nodes.
inline double expected_in_degree(const InDegreeSpec& spec, std::size_t n)
{
    if (const auto* b = std::get_if<BinomialInDegree>(&spec))
        return b->p * static_cast<double>(n - 1);
    if (const auto* d = std::get_if<DeltaInDegree>(&spec))
        return static_cast<double>(d->k);
    const auto& e = std::get<ExplicitInDegree>(spec).degrees;
    return e.empty() ? 0.0
                     : static_cast<double>(std::accumulate(e.begin(), e.end(), std::size_t{0})) /
                           static_cast<double>(e.size());
}

inline std::vector<std::size_t> parse_degree_list(std::string_view text)
{
    std::string buf(text);
    for (char& c : buf)
        if (c == ',' || c == ';')
            c = ' ';
    std::istringstream in(buf);
    std::vector<std::size_t> out;
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            throw ParseError("degree list: bad entry '" + tok + "'");
        }
        if (pos != tok.size() || v < 0)
            throw ParseError("degree list: bad entry '" + tok + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

/// Parses "binomial:<p>", "delta:<K>" or "file:<path>".
inline InDegreeSpec parse_in_degree_spec(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("in-degree spec: expected 'binomial:<p>', 'delta:<K>' or 'file:<path>'");
    const std::string kind(text.substr(0, colon));
    const std::string arg(text.substr(colon + 1));
    try {
        std::size_t pos = 0;
        if (kind == "binomial") {
            const double p = std::stod(arg, &pos);
            if (pos != arg.size())
                throw ParseError("bad probability");
            return BinomialInDegree{p};
        }
        if (kind == "delta") {
            const long long k = std::stoll(arg, &pos);
            if (pos != arg.size() || k < 0)
                throw ParseError("bad K");
            return DeltaInDegree{static_cast<std::size_t>(k)};
        }
    } catch (const ParseError&) {
        throw ParseError("in-degree spec: malformed '" + std::string(text) + "'");
    } catch (const std::exception&) {
        throw ParseError("in-degree spec: malformed '" + std::string(text) + "'");
    }
    if (kind == "file") {
        std::ifstream in(arg);
        if (!in)
            throw ParseError("in-degree spec: cannot open '" + arg + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return ExplicitInDegree{parse_degree_list(ss.str())};
    }
    throw ParseError("in-degree spec: unknown kind '" + kind + "'");
}

inline std::string to_string(const InDegreeSpec& spec)
{
    std::ostringstream os;
    if (const auto* b = std::get_if<BinomialInDegree>(&spec))
        os << "binomial:" << b->p;
    else if (const auto* d = std::get_if<DeltaInDegree>(&spec))
        os << "delta:" << d->k;
    else
        os << "explicit:" << std::get<ExplicitInDegree>(spec).degrees.size();
    return os.str();
}

} // namespace mbn
