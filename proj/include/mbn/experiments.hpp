#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "baselines.hpp"
#include "degree.hpp"
#include "generator.hpp"
#include "metrics.hpp"
#include "motif_catalog.hpp"
#include "optimizer.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace mbn {

inline constexpr std::string_view version = "1.0.0";

// ------------------------------------------------------------- weight input

/// A named weight vector used as one experimental condition.
struct WeightSource {
    std::string label;
    std::vector<double> wtilde;
    bool adapt = true;
    bool random_network = false; ///< condition is a random network, weights unused
};

inline std::vector<double> parse_weight_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("weights: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("weights: '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("wtilde"))
        j = j["wtilde"];
    if (!j.is_array())
        throw ParseError("weights: expected a JSON array or an object with a 'wtilde' array");
    std::vector<double> w;
    for (const auto& x : j) {
        if (!x.is_number())
            throw ParseError("weights: non-numeric entry");
        w.push_back(x.get<double>());
    }
    return w;
}

/// Parses "delta:<id>", "preset:<name>", "file:<path>" or "zero".
inline WeightSource parse_weight_source(std::string_view text, int motif_size)
{
    const MotifCatalog& cat = catalog(motif_size);
    const std::string s(text);
    if (s == "zero")
        return {"zero", std::vector<double>(cat.class_count(), 0.0)};
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw ParseError("weights: expected delta:<id>, preset:<name>, file:<path> or zero");
    const std::string kind = s.substr(0, colon), arg = s.substr(colon + 1);
    if (kind == "delta") {
        int id = 0;
        try {
            std::size_t pos = 0;
            id = std::stoi(arg, &pos);
            if (pos != arg.size())
                throw ParseError("");
        } catch (const std::exception&) {
            throw ParseError("weights: bad delta id '" + arg + "'");
        }
        if (id < 1 || static_cast<std::size_t>(id) > cat.class_count())
            throw ParseError("weights: delta id " + arg + " outside [1, " + std::to_string(cat.class_count()) + "]");
        return {"delta" + arg, delta_weights(cat, MotifId{id})};
    }
    if (kind == "preset") {
        if (motif_size != 3)
            throw ParseError("weights: presets are defined for three-node motifs only");
        try {
            return {std::string(preset_by_name(arg).name), preset_by_name(arg).wtilde};
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    if (kind == "file") {
        auto w = parse_weight_file(arg);
        if (w.size() != cat.class_count())
            throw ParseError("weights: file has " + std::to_string(w.size()) + " entries, expected " +
                             std::to_string(cat.class_count()));
        return {"file", std::move(w)};
    }
    throw ParseError("weights: unknown source kind '" + kind + "'");
}

inline WeightSource random_condition() { return {"RN", {}, true, true}; }

inline Digraph generate_condition(const WeightSource& c, std::size_t n, const InDegreeSpec& spec, int motif_size,
                                  Rng& rng)
{
    if (c.random_network)
        return generate_random_network(n, spec, rng);
    GeneratorOptions opt;
    opt.motif_size = motif_size;
    opt.adapt_weights = c.adapt;
    return generate_mbn(n, spec, c.wtilde, opt, rng);
}

// ------------------------------------------------------------ result table

struct ResultRow {
    std::string condition;
    std::string parameter_name;
    double parameter = 0.0;
    std::string measure;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t count = 0;
};

inline std::string format_number(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

struct ResultTable {
    std::vector<ResultRow> rows;

    void add(std::string condition, std::string parameter_name, double parameter, std::string measure,
             std::span<const double> values)
    {
        rows.push_back({std::move(condition), std::move(parameter_name), parameter, std::move(measure), mean(values),
                        stddev(values), values.size()});
    }

    const ResultRow* find(std::string_view condition, double parameter, std::string_view measure) const
    {
        for (const auto& r : rows)
            if (r.condition == condition && r.measure == measure && std::abs(r.parameter - parameter) < 1e-12)
                return &r;
        return nullptr;
    }

    std::string to_csv(std::string_view invocation) const
    {
        std::string out = "# mbn " + std::string(version) + "\n# invocation: " + std::string(invocation) + "\n";
        out += "condition,parameter_name,parameter,measure,mean,sd,count\n";
        for (const auto& r : rows)
            out += r.condition + "," + r.parameter_name + "," + format_number(r.parameter) + "," + r.measure + "," +
                   format_number(r.mean) + "," + format_number(r.sd) + "," + std::to_string(r.count) + "\n";
        return out;
    }

    nlohmann::json to_json(std::string_view invocation) const
    {
        nlohmann::json j;
        j["version"] = std::string(version);
        j["invocation"] = std::string(invocation);
        j["rows"] = nlohmann::json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"condition", r.condition},
                                 {"parameter_name", r.parameter_name},
                                 {"parameter", r.parameter},
                                 {"measure", r.measure},
                                 {"mean", std::isfinite(r.mean) ? nlohmann::json(r.mean) : nlohmann::json(nullptr)},
                                 {"sd", std::isfinite(r.sd) ? nlohmann::json(r.sd) : nlohmann::json(nullptr)},
                                 {"count", r.count}});
        return j;
    }
};

// ------------------------------------------------------ motif-count sweeps

struct SweepSpec {
    std::size_t n = 100;
    std::uint64_t seed = 1;
    std::size_t samples = 20;
    int motif_size = 3;
    std::vector<double> p_values{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    std::vector<WeightSource> conditions; ///< add random_condition() for the RN baseline
    std::vector<int> measured_motifs;     ///< empty: every class
    std::size_t jobs = 1;
};

struct SweepCell {
    std::string condition;
    double p = 0.0;
    std::vector<MotifCensus> samples;

    std::vector<double> counts(MotifId m) const
    {
        std::vector<double> v;
        for (const auto& c : samples)
            v.push_back(static_cast<double>(c[m]));
        return v;
    }
};

struct SweepResult {
    std::vector<SweepCell> cells; // condition-major, then p
    ResultTable table;

    const SweepCell& cell(std::string_view condition, double p) const
    {
        for (const auto& c : cells)
            if (c.condition == condition && std::abs(c.p - p) < 1e-12)
                return c;
        throw std::out_of_range("SweepResult: no cell for " + std::string(condition));
    }
};

/// Motif censuses over a grid of binomial connection probabilities.
///
/// Each (p, sample) pair owns one derived random stream shared by all
/// conditions, so conditions see identical in-degree plans. Besides one row
/// per (condition, p, motif), the table carries a "p_average" row per
/// condition and motif: twice the trapezoid integral over [0, p_max], anchored
/// at the empty graph for p = 0 (equal to the mean over (0, 0.5] when the
/// grid ends at 0.5).
inline SweepResult sweep_motif_counts(const SweepSpec& spec)
{
    if (spec.samples < 1)
        throw std::invalid_argument("sweep: sample count must be at least 1");
    if (spec.conditions.empty())
        throw std::invalid_argument("sweep: no conditions");
    for (double p : spec.p_values)
        if (!(p > 0.0 && p <= 1.0))
            throw std::invalid_argument("sweep: p values must lie in (0, 1]");
    const MotifCatalog& cat = catalog(spec.motif_size);
    std::vector<double> ps = spec.p_values;
    std::sort(ps.begin(), ps.end());

    SweepResult res;
    for (const auto& c : spec.conditions)
        for (double p : ps)
            res.cells.push_back({c.label, p, std::vector<MotifCensus>(spec.samples)});

    const std::size_t per_cell = spec.samples;
    const Rng root(spec.seed);
    parallel_for(res.cells.size() * per_cell, spec.jobs, [&](std::size_t job) {
        const std::size_t ci = job / per_cell, s = job % per_cell;
        const std::size_t cond = ci / ps.size(), pi = ci % ps.size();
        Rng rng = root.derive(stream_id(pi, s, static_cast<std::uint64_t>(spec.motif_size)));
        const Digraph g = generate_condition(spec.conditions[cond], spec.n, BinomialInDegree{ps[pi]},
                                             spec.motif_size, rng);
        res.cells[ci].samples[s] = census(g, cat);
    });

    std::vector<int> motifs = spec.measured_motifs;
    if (motifs.empty())
        for (std::size_t m = 1; m <= cat.class_count(); ++m)
            motifs.push_back(static_cast<int>(m));

    const double empty_total = static_cast<double>(binomial(spec.n, static_cast<std::uint64_t>(spec.motif_size)));
    for (std::size_t cond = 0; cond < spec.conditions.size(); ++cond) {
        for (int m : motifs) {
            const std::string measure = "motif" + std::to_string(m);
            std::vector<double> integral(spec.samples, 0.0);
            double prev_p = 0.0;
            std::vector<double> prev(spec.samples, m == 1 ? empty_total : 0.0);
            for (std::size_t pi = 0; pi < ps.size(); ++pi) {
                const auto& cell = res.cells[cond * ps.size() + pi];
                const auto v = cell.counts(MotifId{m});
                res.table.add(cell.condition, "p", ps[pi], measure, v);
                for (std::size_t s = 0; s < spec.samples; ++s)
                    integral[s] += 0.5 * (ps[pi] - prev_p) * (v[s] + prev[s]);
                prev = v;
                prev_p = ps[pi];
            }
            for (auto& x : integral)
                x *= 2.0;
            res.table.add(spec.conditions[cond].label, "p_average", ps.back(), measure, integral);
        }
    }
    return res;
}

// ---------------------------------------------- empty-motif strategy table

/// Empty-motif counts per K for the empty-promoting MBN, both constructive
/// strategies (census and closed form) and random networks, all with delta:K
/// in-degrees.
inline ResultTable empty_strategy_comparison(std::size_t n, std::span<const std::size_t> ks, std::size_t samples,
                                             std::uint64_t seed, std::size_t jobs = 1)
{
    const MotifCatalog& cat = catalog(3);
    ResultTable t;
    const Rng root(seed);
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        const std::size_t k = ks[ki];
        const double kk = static_cast<double>(k);
        for (auto strategy : {EmptyStrategy::intra, EmptyStrategy::inter}) {
            const std::string name = strategy == EmptyStrategy::intra ? "intra" : "inter";
            const double counted = static_cast<double>(census(build_strategy(strategy, n, k), cat)[MotifId{1}]);
            const double formula = static_cast<double>(empty_motif_count(strategy, n, k));
            t.add(name, "K", kk, "motif1", std::span<const double>(&counted, 1));
            t.add(name + "-formula", "K", kk, "motif1", std::span<const double>(&formula, 1));
        }
        std::vector<double> mbn(samples), rn(samples);
        const WeightSource empty{"MBN-delta1", delta_weights(cat, MotifId{1})};
        parallel_for(2 * samples, jobs, [&](std::size_t job) {
            const std::size_t s = job % samples;
            Rng rng = root.derive(stream_id(ki, s, 0xe1));
            const bool is_rn = job >= samples;
            const Digraph g = generate_condition(is_rn ? random_condition() : empty, n, DeltaInDegree{k}, 3, rng);
            (is_rn ? rn : mbn)[s] = static_cast<double>(census(g, cat)[MotifId{1}]);
        });
        t.add("MBN-delta1", "K", kk, "motif1", mbn);
        t.add("RN", "K", kk, "motif1", rn);
    }
    return t;
}

// ------------------------------------------------- global feature sweeps

enum class GlobalMeasure { smallworld, modularity };

/// One network-producing condition of a global-feature evaluation.
struct GlobalCondition {
    std::string label;
    WeightSource weights;       ///< used unless ws_q >= 0
    double ws_q = -1.0;         ///< directed Watts-Strogatz with this rewiring probability
};

struct GlobalEvalSpec {
    GlobalMeasure measure = GlobalMeasure::smallworld;
    std::size_t n = 200;
    std::size_t samples = 20;
    std::uint64_t seed = 1;
    /// K values (small-worldness, delta:K in-degree) or cluster counts
    /// (modularity, binomial p = 1/N_clust in-degree).
    std::vector<std::size_t> parameters;
    std::vector<GlobalCondition> conditions;
    std::size_t reference_samples = 20;
    std::size_t jobs = 1;
};

struct GlobalCell {
    std::string condition;
    std::size_t parameter = 0;
    std::vector<double> values;
};

struct GlobalEvalResult {
    std::vector<GlobalCell> cells;
    ResultTable table;

    const GlobalCell& cell(std::string_view condition, std::size_t parameter) const
    {
        for (const auto& c : cells)
            if (c.condition == condition && c.parameter == parameter)
                return c;
        throw std::out_of_range("GlobalEvalResult: no cell for " + std::string(condition));
    }
};

inline InDegreeSpec global_spec(GlobalMeasure m, std::size_t parameter)
{
    if (m == GlobalMeasure::smallworld)
        return DeltaInDegree{parameter};
    return BinomialInDegree{1.0 / static_cast<double>(parameter)};
}

/// Measure value of one graph: S against a shared reference, or Q after
/// hierarchical clustering into `parameter` groups.
inline double global_value(GlobalMeasure m, const Digraph& g, std::size_t parameter, const RandomReference& ref)
{
    if (m == GlobalMeasure::smallworld)
        return small_worldness(g, ref).s;
    return modularity(g, hierarchical_clustering(hamming_distance_matrix(g), parameter)).q;
}

inline GlobalEvalResult global_feature_eval(const GlobalEvalSpec& spec)
{
    GlobalEvalResult res;
    const Rng root(spec.seed);
    const std::string measure = spec.measure == GlobalMeasure::smallworld ? "S" : "Q";
    for (std::size_t pi = 0; pi < spec.parameters.size(); ++pi) {
        const std::size_t param = spec.parameters[pi];
        const InDegreeSpec indeg = global_spec(spec.measure, param);
        RandomReference ref;
        if (spec.measure == GlobalMeasure::smallworld) {
            Rng ref_rng = root.derive(stream_id(pi, 0x5eed, 0));
            ref = random_reference(spec.n, indeg, spec.reference_samples, ref_rng);
        }
        const std::size_t first = res.cells.size();
        for (const auto& c : spec.conditions)
            res.cells.push_back({c.label, param, std::vector<double>(spec.samples)});
        parallel_for(spec.conditions.size() * spec.samples, spec.jobs, [&](std::size_t job) {
            const std::size_t ci = job / spec.samples, s = job % spec.samples;
            const auto& cond = spec.conditions[ci];
            Rng rng = root.derive(stream_id(pi, s, 0x910b));
            Digraph g;
            if (cond.ws_q >= 0.0) {
                const std::size_t k = spec.measure == GlobalMeasure::smallworld
                                          ? param
                                          : std::max<std::size_t>(
                                                1, static_cast<std::size_t>(std::lround(
                                                       static_cast<double>(spec.n - 1) / static_cast<double>(param))));
                g = generate_ws_directed(spec.n, k, cond.ws_q, rng);
            } else {
                g = generate_condition(cond.weights, spec.n, indeg, 3, rng);
            }
            double v;
            try {
                v = global_value(spec.measure, g, param, ref);
            } catch (const DegenerateMetric&) {
                v = std::numeric_limits<double>::quiet_NaN();
            }
            res.cells[first + ci].values[s] = v;
        });
        for (std::size_t ci = 0; ci < spec.conditions.size(); ++ci) {
            const auto& cell = res.cells[first + ci];
            res.table.add(cell.condition, spec.measure == GlobalMeasure::smallworld ? "K" : "N_clust",
                          static_cast<double>(param), measure, cell.values);
        }
    }
    return res;
}

/// Default condition set: preset MBN, delta MBNs, WS over a q grid, RN.
inline std::vector<GlobalCondition> default_global_conditions(GlobalMeasure m, std::span<const int> delta_ids,
                                                              std::span<const double> ws_q)
{
    const MotifCatalog& cat = catalog(3);
    std::vector<GlobalCondition> out;
    const Preset& preset = m == GlobalMeasure::smallworld ? smallworld_preset() : modularity_preset();
    out.push_back({"MBN-" + std::string(preset.name), {std::string(preset.name), preset.wtilde}});
    for (int d : delta_ids)
        out.push_back({"MBN-delta" + std::to_string(d), {"delta" + std::to_string(d), delta_weights(cat, MotifId{d})}});
    for (double q : ws_q)
        out.push_back({"WS-q" + format_number(q), {}, q});
    out.push_back({"RN", random_condition()});
    return out;
}

// ------------------------------------------------------------- continuum

struct ContinuumSpec {
    GlobalMeasure measure = GlobalMeasure::modularity;
    std::size_t n = 200;
    std::size_t samples = 20;
    std::uint64_t seed = 1;
    std::size_t parameter = 5;  ///< K or N_clust, as in GlobalEvalSpec
    std::size_t steps = 10;     ///< arc points strictly between the two ends
    double side = 1.0;          ///< sign given to phi (negative for the "left" delta)
    std::size_t reference_samples = 20;
    std::size_t jobs = 1;
};

struct ContinuumPoint {
    double phi = 0.0;
    std::vector<double> wtilde;
    std::vector<double> values;
    std::vector<double> motif_counts;
};

struct ContinuumResult {
    std::vector<ContinuumPoint> points;
    std::vector<double> random_values;
    ResultTable table;
};

/// Networks along the great arc from the optimised weights (phi = 0) to a
/// single-motif delta; reports the global measure and the delta motif count
/// per arc point, plus the random-network baseline.
inline ContinuumResult continuum_experiment(std::span<const double> w_opt, int delta_id, const ContinuumSpec& spec)
{
    const MotifCatalog& cat = catalog(3);
    const std::vector<double> delta = delta_weights(cat, MotifId{delta_id});
    const InDegreeSpec indeg = global_spec(spec.measure, spec.parameter);
    const Rng root(spec.seed);
    RandomReference ref;
    if (spec.measure == GlobalMeasure::smallworld) {
        Rng ref_rng = root.derive(stream_id(0x5eed, 1, 0));
        ref = random_reference(spec.n, indeg, spec.reference_samples, ref_rng);
    }

    ContinuumResult res;
    const std::size_t npoints = spec.steps + 2;
    for (std::size_t t = 0; t < npoints; ++t) {
        ContinuumPoint p;
        p.wtilde = arc_interpolate(w_opt, delta, static_cast<double>(t) / static_cast<double>(npoints - 1));
        p.phi = spec.side * angle(p.wtilde, w_opt);
        p.values.resize(spec.samples);
        p.motif_counts.resize(spec.samples);
        res.points.push_back(std::move(p));
    }
    res.random_values.resize(spec.samples);
    std::vector<double> random_counts(spec.samples);

    parallel_for((npoints + 1) * spec.samples, spec.jobs, [&](std::size_t job) {
        const std::size_t pi = job / spec.samples, s = job % spec.samples;
        Rng rng = root.derive(stream_id(s, 0xc0, 0));
        const bool is_rn = pi == npoints;
        const Digraph g = is_rn ? generate_random_network(spec.n, indeg, rng)
                                : generate_mbn(spec.n, indeg, res.points[pi].wtilde, {}, rng);
        double v;
        try {
            v = global_value(spec.measure, g, spec.parameter, ref);
        } catch (const DegenerateMetric&) {
            v = std::numeric_limits<double>::quiet_NaN();
        }
        const double count = static_cast<double>(census(g, cat)[MotifId{delta_id}]);
        if (is_rn) {
            res.random_values[s] = v;
            random_counts[s] = count;
        } else {
            res.points[pi].values[s] = v;
            res.points[pi].motif_counts[s] = count;
        }
    });

    const std::string measure = spec.measure == GlobalMeasure::smallworld ? "S" : "Q";
    const std::string motif = "motif" + std::to_string(delta_id);
    for (const auto& p : res.points) {
        res.table.add("MBN-arc", "phi", p.phi, measure, p.values);
        res.table.add("MBN-arc", "phi", p.phi, motif, p.motif_counts);
    }
    res.table.add("RN", "phi", 0.0, measure, res.random_values);
    res.table.add("RN", "phi", 0.0, motif, random_counts);
    return res;
}

} // namespace mbn
