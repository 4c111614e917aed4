#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "baselines.hpp"
#include "degree.hpp"
#include "generator.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace mbn {

// ------------------------------------------------------------------ presets

struct Preset {
    std::string_view name;
    std::vector<double> wtilde;
};

/// Bidirected-motif weights that yield high small-worldness.
inline const Preset& smallworld_preset()
{
    static const Preset p{"smallworld", {-1.351, 0, 0, 1.407, 0, 0, 0, 0, 0, 0, 0, 1.755, 0, 0, 0, 0.567}};
    return p;
}

/// Weights that yield strong community structure.
inline const Preset& modularity_preset()
{
    static const Preset p{"modularity", {1.852, 1.3, 0, 0.838, 0, 0, 0, 0, 0.084, 0, 0, -2.111, 0, 0, 0, 0.1317}};
    return p;
}

inline const Preset& preset_by_name(std::string_view name)
{
    if (name == "smallworld")
        return smallworld_preset();
    if (name == "modularity")
        return modularity_preset();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected smallworld or modularity)");
}

// -------------------------------------------------------- weight templates

/// Free motif ids (1-based); every other weight is pinned at zero.
struct WeightTemplate {
    std::size_t class_count = 16;
    std::vector<int> mask;

    std::vector<double> expand(std::span<const double> alpha) const
    {
        if (alpha.size() != mask.size())
            throw std::invalid_argument("WeightTemplate::expand: alpha length does not match the mask");
        std::vector<double> w(class_count, 0.0);
        for (std::size_t t = 0; t < mask.size(); ++t)
            w.at(static_cast<std::size_t>(mask[t] - 1)) = alpha[t];
        return w;
    }

    std::vector<double> restrict(std::span<const double> w) const
    {
        std::vector<double> alpha;
        for (int m : mask)
            alpha.push_back(w[static_cast<std::size_t>(m - 1)]);
        return alpha;
    }
};

inline WeightTemplate smallworld_template() { return {16, {1, 4, 12, 16}}; }
inline WeightTemplate modularity_template() { return {16, {1, 2, 4, 9, 12, 16}}; }
/// Alternative modularity mask varying motifs 6 and 7 instead of 2 and 9.
inline WeightTemplate modularity_alt_template() { return {16, {1, 4, 6, 7, 12, 16}}; }

// ---------------------------------------------------------- genetic search

struct GaConfig {
    std::size_t population = 40;
    std::size_t generations = 60;
    std::size_t tournament = 3;
    std::size_t elite = 2;
    double crossover_rate = 0.8;
    /// Gaussian mutation scale; shrinks linearly to zero over the run.
    double mutation_scale = 0.3;
    /// Initial individuals: init_center + init_spread * N(0,1) per gene.
    std::vector<double> init_center;
    double init_spread = 1.0;
    /// Threads used for the fitness evaluations of one generation.
    std::size_t jobs = 1;
};

/// Objective of a full weight vector; the Rng is a per-evaluation stream.
using Objective = std::function<double(std::span<const double>, Rng&)>;

struct GaResult {
    std::vector<double> best_wtilde;
    std::vector<double> best_alpha;
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<double> trace; ///< best-so-far value after each generation
};

/// Real-coded GA over the free coordinates of a weight template.
///
/// Tournament selection, uniform crossover, shrinking Gaussian mutation and a
/// small elite. Each evaluation gets an Rng derived from (generation, slot),
/// so runs are reproducible.
inline GaResult ga_optimize(const Objective& objective, const WeightTemplate& tmpl, const GaConfig& cfg, Rng& rng)
{
    const std::size_t dim = tmpl.mask.size();
    if (dim == 0)
        throw std::invalid_argument("ga_optimize: weight template has no free coordinates");
    if (cfg.population < 2 || cfg.generations < 1 || cfg.tournament < 1)
        throw std::invalid_argument("ga_optimize: population >= 2, generations >= 1 and tournament >= 1 required");
    if (!cfg.init_center.empty() && cfg.init_center.size() != dim)
        throw std::invalid_argument("ga_optimize: init_center length does not match the mask");

    const Rng base = rng;
    auto evaluate = [&](const std::vector<double>& alpha, std::size_t gen, std::size_t slot) {
        Rng eval_rng = base.derive(stream_id(0xe7a1, gen, slot));
        try {
            const double v = objective(tmpl.expand(alpha), eval_rng);
            return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
        } catch (const std::exception&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    std::vector<std::vector<double>> pop(cfg.population, std::vector<double>(dim));
    for (auto& ind : pop)
        for (std::size_t d = 0; d < dim; ++d)
            ind[d] = (cfg.init_center.empty() ? 0.0 : cfg.init_center[d]) + cfg.init_spread * rng.normal();
    std::vector<double> fit(cfg.population);
    parallel_for(pop.size(), cfg.jobs, [&](std::size_t s) { fit[s] = evaluate(pop[s], 0, s); });

    GaResult result;
    auto record = [&] {
        for (std::size_t s = 0; s < pop.size(); ++s)
            if (fit[s] > result.best_value || result.best_alpha.empty()) {
                result.best_value = fit[s];
                result.best_alpha = pop[s];
            }
        result.trace.push_back(result.best_value);
    };
    record();

    auto tournament = [&]() -> const std::vector<double>& {
        std::size_t best = rng.uniform_below(pop.size());
        for (std::size_t t = 1; t < cfg.tournament; ++t) {
            const std::size_t c = rng.uniform_below(pop.size());
            if (fit[c] > fit[best])
                best = c;
        }
        return pop[best];
    };

    for (std::size_t gen = 1; gen < cfg.generations; ++gen) {
        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return fit[x] > fit[y]; });

        const double sigma =
            cfg.mutation_scale * (1.0 - static_cast<double>(gen) / static_cast<double>(cfg.generations));
        std::vector<std::vector<double>> next;
        std::vector<double> next_fit;
        for (std::size_t e = 0; e < std::min(cfg.elite, pop.size()); ++e) {
            next.push_back(pop[order[e]]);
            next_fit.push_back(fit[order[e]]);
        }
        while (next.size() < pop.size()) {
            std::vector<double> child = tournament();
            if (rng.bernoulli(cfg.crossover_rate)) {
                const auto& other = tournament();
                for (std::size_t d = 0; d < dim; ++d)
                    if (rng.bernoulli(0.5))
                        child[d] = other[d];
            }
            if (sigma > 0.0)
                for (auto& x : child)
                    x += sigma * rng.normal();
            next.push_back(std::move(child));
        }
        const std::size_t kept = next_fit.size();
        next_fit.resize(next.size());
        parallel_for(next.size() - kept, cfg.jobs,
                     [&](std::size_t t) { next_fit[kept + t] = evaluate(next[kept + t], gen, kept + t); });
        pop = std::move(next);
        fit = std::move(next_fit);
        record();
    }
    result.best_wtilde = tmpl.expand(result.best_alpha);
    return result;
}

// ------------------------------------------------------ global objectives

struct SmallWorldObjectiveConfig {
    std::size_t n = 100;
    std::vector<std::size_t> ks{2, 3, 4, 5, 6};
    std::size_t samples = 20;
    std::size_t reference_samples = 20;
};

struct ModularityObjectiveConfig {
    std::size_t n = 60;
    std::vector<std::size_t> cluster_counts = [] {
        std::vector<std::size_t> v;
        for (std::size_t c = 2; c <= 20; ++c)
            v.push_back(c);
        return v;
    }();
    std::size_t samples = 20;
};

/// Mean small-worldness of generated networks over every delta:K spec.
inline double objective_smallworld(std::span<const double> wtilde, const SmallWorldObjectiveConfig& cfg, Rng& rng)
{
    if (cfg.ks.empty() || cfg.samples < 1)
        throw std::invalid_argument("objective_smallworld: empty configuration");
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t k : cfg.ks) {
        const InDegreeSpec spec = DeltaInDegree{k};
        try {
            const RandomReference ref = random_reference(cfg.n, spec, cfg.reference_samples, rng);
            for (std::size_t s = 0; s < cfg.samples; ++s) {
                const Digraph g = generate_mbn(cfg.n, spec, wtilde, {}, rng);
                total += small_worldness(g, ref).s;
                ++count;
            }
        } catch (const DegenerateMetric&) {
            return -std::numeric_limits<double>::infinity();
        }
    }
    return total / static_cast<double>(count);
}

/// Mean full-variant modularity under hierarchical clustering into N_clust
/// groups, with binomial in-degree p = 1/N_clust, over every N_clust.
inline double objective_modularity(std::span<const double> wtilde, const ModularityObjectiveConfig& cfg, Rng& rng)
{
    if (cfg.cluster_counts.empty() || cfg.samples < 1)
        throw std::invalid_argument("objective_modularity: empty configuration");
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t c : cfg.cluster_counts) {
        const InDegreeSpec spec = BinomialInDegree{1.0 / static_cast<double>(c)};
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const Digraph g = generate_mbn(cfg.n, spec, wtilde, {}, rng);
            try {
                total += modularity(g, hierarchical_clustering(hamming_distance_matrix(g), c)).q;
            } catch (const DegenerateMetric&) {
                return -std::numeric_limits<double>::infinity();
            }
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

// -------------------------------------------------------- arc interpolation

inline double norm(std::span<const double> w)
{
    double s = 0.0;
    for (double x : w)
        s += x * x;
    return std::sqrt(s);
}

/// phi = arccos(a.b / (|a||b|)), evaluated as 2 atan2(|a^ - b^|, |a^ + b^|)
/// on the unit vectors so small angles keep full precision.
inline double angle(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("angle: length mismatch");
    const double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("angle: zero vector");
    double diff = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i] / na, y = b[i] / nb;
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

/// Point at parameter t on the great arc from a/|a| to b/|b|.
inline std::vector<double> arc_interpolate(std::span<const double> a, std::span<const double> b, double t)
{
    const double phi = angle(a, b);
    if (std::numbers::pi - phi < 1e-12)
        throw std::invalid_argument("arc_interpolate: antiparallel vectors have no unique arc");
    const double na = norm(a), nb = norm(b);
    std::vector<double> out(a.size());
    if (phi < 1e-15) {
        for (std::size_t i = 0; i < a.size(); ++i)
            out[i] = a[i] / na;
        return out;
    }
    const double sa = std::sin((1.0 - t) * phi) / std::sin(phi);
    const double sb = std::sin(t * phi) / std::sin(phi);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = sa * a[i] / na + sb * b[i] / nb;
    return out;
}

} // namespace mbn
