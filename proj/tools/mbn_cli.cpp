// mbn: generate motif-based networks and run the experiment sweeps.

#include <mbn/mbn.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    std::size_t jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format)
{
    c.format = default_format;
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
    cmd->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw mbn::ParseError("cannot open input file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const Common& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.out, std::ios::binary);
    if (!out || !(out << text))
        throw RuntimeFailure("cannot write '" + c.out + "'");
}

void emit_table(const Common& c, const mbn::ResultTable& t, const std::string& invocation)
{
    emit(c, c.format == "json" ? t.to_json(invocation).dump(2) + "\n" : t.to_csv(invocation));
}

void emit_json(const Common& c, nlohmann::json j, const std::string& invocation)
{
    j["version"] = std::string(mbn::version);
    j["invocation"] = invocation;
    emit(c, j.dump(2) + "\n");
}

std::size_t default_cluster_count(const mbn::InDegreeSpec& spec, std::size_t n)
{
    if (const auto* b = std::get_if<mbn::BinomialInDegree>(&spec); b && b->p > 0.0)
        return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(1.0 / b->p)), 1, n);
    const double mean = mbn::expected_in_degree(spec, n);
    if (mean <= 0.0)
        return 1;
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(static_cast<double>(n - 1) / mean)), 1, n);
}

mbn::GlobalMeasure parse_measure(const std::string& s)
{
    return s == "smallworld" ? mbn::GlobalMeasure::smallworld : mbn::GlobalMeasure::modularity;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Motif-based network generation and experiments"};
    app.set_version_flag("--version", std::string(mbn::version));
    app.require_subcommand(1);

    // the output path is left out so a table does not depend on where it is written
    std::string invocation = "mbn";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--out") {
            ++i;
            continue;
        }
        if (arg.rfind("--out=", 0) == 0)
            continue;
        invocation += " " + arg;
    }

    // generate
    Common gen_c;
    std::size_t gen_n = 100;
    std::string gen_indegree = "binomial:0.2", gen_weights = "zero";
    int gen_size = 3;
    bool gen_no_adapt = false;
    auto* gen = app.add_subcommand("generate", "Generate one motif-based network as an edge list");
    gen->add_option("--n", gen_n, "Number of nodes")->capture_default_str();
    gen->add_option("--indegree", gen_indegree, "binomial:<p>, delta:<K> or file:<path>")->capture_default_str();
    gen->add_option("--motif-size", gen_size, "3 or 4")->check(CLI::IsMember({3, 4}))->capture_default_str();
    gen->add_option("--weights", gen_weights, "delta:<id>, preset:<name>, file:<path> or zero")->capture_default_str();
    gen->add_flag("--no-adapt", gen_no_adapt, "Use the weights without adaptation");
    add_common(gen, gen_c, "csv");

    // census
    Common cen_c;
    std::string cen_in;
    int cen_size = 3;
    auto* cen = app.add_subcommand("census", "Motif census of an edge-list file");
    cen->add_option("--in", cen_in, "Edge-list file")->required();
    cen->add_option("--motif-size", cen_size, "3 or 4")->check(CLI::IsMember({3, 4}))->capture_default_str();
    add_common(cen, cen_c, "json");

    // metrics
    Common met_c;
    std::string met_in, met_indegree, met_clustering = "hierarchical", met_variant = "full";
    std::size_t met_ref = 20, met_clusters = 0;
    auto* met = app.add_subcommand("metrics", "Clustering, path length, small-worldness and modularity");
    met->add_option("--in", met_in, "Edge-list file")->required();
    met->add_option("--indegree", met_indegree, "In-degree spec of the random reference")->required();
    met->add_option("--ref-samples", met_ref, "Random reference networks")->check(CLI::PositiveNumber)
        ->capture_default_str();
    met->add_option("--n-clust", met_clusters, "Cluster count (default: round(1/p) or (N-1)/mean in-degree)");
    met->add_option("--clustering", met_clustering, "Partition method")
        ->check(CLI::IsMember({"hierarchical", "bisection"}))
        ->capture_default_str();
    met->add_option("--variant", met_variant, "Modularity variant")
        ->check(CLI::IsMember({"full", "simplified"}))
        ->capture_default_str();
    add_common(met, met_c, "json");

    // sweep
    Common sw_c;
    std::size_t sw_n = 100, sw_samples = 20;
    int sw_size = 3;
    std::vector<double> sw_p{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    std::vector<std::string> sw_weights;
    std::vector<int> sw_motifs;
    bool sw_no_rn = false, sw_no_adapt = false;
    auto* sw = app.add_subcommand("sweep", "Motif counts over a grid of connection probabilities");
    sw->add_option("--n", sw_n, "Number of nodes")->capture_default_str();
    sw->add_option("--samples", sw_samples, "Networks per cell")->check(CLI::PositiveNumber)->capture_default_str();
    sw->add_option("--motif-size", sw_size, "3 or 4")->check(CLI::IsMember({3, 4}))->capture_default_str();
    sw->add_option("--p", sw_p, "Connection probabilities")->delimiter(',')->capture_default_str();
    sw->add_option("--weights", sw_weights, "Weight sources (repeatable; default every three-edge delta)")
        ->delimiter(';');
    sw->add_option("--motifs", sw_motifs, "Motif ids to report (default all)")->delimiter(',');
    sw->add_flag("--no-rn", sw_no_rn, "Skip the random-network condition");
    sw->add_flag("--no-adapt", sw_no_adapt, "Disable weight adaptation");
    add_common(sw, sw_c, "csv");

    // empty-compare
    Common ec_c;
    std::size_t ec_n = 30, ec_samples = 20;
    std::vector<std::size_t> ec_k{3, 4, 5, 6, 7, 8};
    auto* ec = app.add_subcommand("empty-compare", "Empty-motif counts of MBN, intra, inter and RN");
    ec->add_option("--n", ec_n, "Number of nodes")->capture_default_str();
    ec->add_option("--k", ec_k, "In-degrees K")->delimiter(',')->capture_default_str();
    ec->add_option("--samples", ec_samples, "Networks per cell")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(ec, ec_c, "csv");

    // global-eval
    Common ge_c;
    std::string ge_measure = "smallworld";
    std::size_t ge_n = 200, ge_samples = 20, ge_ref = 20;
    std::vector<std::size_t> ge_params;
    std::vector<int> ge_deltas;
    std::vector<double> ge_q{0.0, 0.1, 0.3, 1.0};
    auto* ge = app.add_subcommand("global-eval", "Small-worldness or modularity per network family");
    ge->add_option("--measure", ge_measure, "smallworld or modularity")
        ->check(CLI::IsMember({"smallworld", "modularity"}))
        ->capture_default_str();
    ge->add_option("--n", ge_n, "Number of nodes")->capture_default_str();
    ge->add_option("--samples", ge_samples, "Networks per cell")->check(CLI::PositiveNumber)->capture_default_str();
    ge->add_option("--params", ge_params, "K values or cluster counts (default 2..6 or 2..20)")->delimiter(',');
    ge->add_option("--deltas", ge_deltas, "Single-motif MBNs to include")->delimiter(',');
    ge->add_option("--ws-q", ge_q, "Watts-Strogatz rewiring probabilities")->delimiter(',')->capture_default_str();
    ge->add_option("--ref-samples", ge_ref, "Random reference networks")->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(ge, ge_c, "csv");

    // continuum
    Common ct_c;
    std::string ct_measure = "modularity", ct_weights;
    int ct_delta = 2, ct_left = 0;
    std::size_t ct_steps = 10, ct_n = 200, ct_samples = 20, ct_param = 10, ct_ref = 20;
    double ct_side = 1.0;
    auto* ct = app.add_subcommand("continuum", "Networks along the arc from optimised weights to a delta");
    ct->add_option("--measure", ct_measure, "smallworld or modularity")
        ->check(CLI::IsMember({"smallworld", "modularity"}))
        ->capture_default_str();
    ct->add_option("--weights", ct_weights, "Start weights (default: preset of the measure)");
    ct->add_option("--delta", ct_delta, "Motif id of the end point")->check(CLI::Range(1, 16))->capture_default_str();
    ct->add_option("--steps", ct_steps, "Interior arc points")->capture_default_str();
    ct->add_option("--side", ct_side, "Sign attached to phi")->capture_default_str();
    ct->add_option("--left-delta", ct_left, "Second end point, reported with negative phi")
        ->check(CLI::Range(1, 16));
    ct->add_option("--n", ct_n, "Number of nodes")->capture_default_str();
    ct->add_option("--samples", ct_samples, "Networks per point")->check(CLI::PositiveNumber)->capture_default_str();
    ct->add_option("--param", ct_param, "K (smallworld) or cluster count (modularity)")->capture_default_str();
    ct->add_option("--ref-samples", ct_ref, "Random reference networks")->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(ct, ct_c, "csv");

    // optimize
    Common op_c;
    std::string op_measure = "smallworld", op_template;
    mbn::GaConfig op_ga;
    std::size_t op_eval_n = 0, op_eval_samples = 20;
    std::vector<std::size_t> op_params;
    auto* op = app.add_subcommand("optimize", "Genetic search for weights maximising a global measure");
    op->add_option("--measure", op_measure, "smallworld or modularity")
        ->check(CLI::IsMember({"smallworld", "modularity"}))
        ->capture_default_str();
    op->add_option("--template", op_template, "smallworld, modularity or modularity-alt (default: the measure)")
        ->check(CLI::IsMember({"smallworld", "modularity", "modularity-alt"}));
    op->add_option("--population", op_ga.population, "Population size")->capture_default_str();
    op->add_option("--generations", op_ga.generations, "Generations")->capture_default_str();
    op->add_option("--tournament", op_ga.tournament, "Tournament size")->capture_default_str();
    op->add_option("--elite", op_ga.elite, "Elite individuals kept per generation")->capture_default_str();
    op->add_option("--crossover", op_ga.crossover_rate, "Crossover rate")->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    op->add_option("--mutation", op_ga.mutation_scale, "Initial mutation scale")->capture_default_str();
    op->add_option("--eval-n", op_eval_n, "Network size per evaluation (default 100 or 60)");
    op->add_option("--eval-samples", op_eval_samples, "Networks per in-degree spec")->check(CLI::PositiveNumber)
        ->capture_default_str();
    op->add_option("--params", op_params, "K values or cluster counts")->delimiter(',');
    add_common(op, op_c, "json");

    // catalog-dump
    Common cd_c;
    int cd_size = 3;
    auto* cd = app.add_subcommand("catalog-dump", "Motif classes, F and G as JSON");
    cd->add_option("--motif-size", cd_size, "3 or 4")->check(CLI::IsMember({3, 4}))->capture_default_str();
    add_common(cd, cd_c, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            const auto spec = mbn::parse_in_degree_spec(gen_indegree);
            mbn::validate(spec, gen_n);
            const auto w = mbn::parse_weight_source(gen_weights, gen_size);
            mbn::Rng rng(gen_c.seed);
            mbn::GeneratorOptions opt;
            opt.motif_size = gen_size;
            opt.adapt_weights = !gen_no_adapt;
            const mbn::Digraph g = mbn::generate_mbn(gen_n, spec, w.wtilde, opt, rng);
            emit(gen_c, "# " + invocation + "\n" + mbn::write_edge_list(g));
        } else if (cen->parsed()) {
            const mbn::Digraph g = mbn::read_edge_list(read_text(cen_in));
            const auto c = mbn::census(g, mbn::catalog(cen_size));
            if (cen_c.format == "json") {
                emit_json(cen_c, mbn::census_json(c), invocation);
            } else {
                std::string s = "# mbn " + std::string(mbn::version) + "\n# invocation: " + invocation + "\nmotif,count\n";
                for (std::size_t m = 0; m < c.counts.size(); ++m)
                    s += std::to_string(m + 1) + "," + std::to_string(c.counts[m]) + "\n";
                emit(cen_c, s);
            }
        } else if (met->parsed()) {
            const mbn::Digraph g = mbn::read_edge_list(read_text(met_in));
            const auto spec = mbn::parse_in_degree_spec(met_indegree);
            mbn::validate(spec, g.size());
            mbn::Rng rng(met_c.seed);
            nlohmann::json j;
            j["N"] = g.size();
            j["E"] = g.edge_count();
            j["C"] = mbn::clustering_coefficient(g);
            j["L"] = mbn::finite_or_null(mbn::harmonic_path_length(g).harmonic_mean);
            try {
                const auto sw = mbn::small_worldness(g, spec, met_ref, rng);
                j["S"] = mbn::finite_or_null(sw.s);
                j["small_worldness"] = mbn::small_worldness_json(sw);
            } catch (const mbn::DegenerateMetric& e) {
                j["S"] = nullptr;
                j["S_error"] = e.what();
            }
            const std::size_t k = met_clusters ? met_clusters : default_cluster_count(spec, g.size());
            if (k > g.size())
                throw mbn::InvalidSpec("--n-clust exceeds the number of nodes");
            const mbn::Partition part = met_clustering == "hierarchical"
                                            ? mbn::hierarchical_clustering(mbn::hamming_distance_matrix(g), k)
                                            : mbn::bisection_clustering(g, k, rng);
            try {
                mbn::ModularityOptions mo;
                mo.variant = met_variant == "full" ? mbn::ModularityVariant::full : mbn::ModularityVariant::simplified;
                const auto q = mbn::modularity(g, part, mo);
                j["Q"] = mbn::finite_or_null(q.q);
                j["modularity"] = mbn::modularity_json(q);
                j["modularity"]["clustering"] = met_clustering;
            } catch (const mbn::DegenerateMetric& e) {
                j["Q"] = nullptr;
                j["Q_error"] = e.what();
            }
            if (met_c.format == "json") {
                emit_json(met_c, j, invocation);
            } else {
                std::string s = "# mbn " + std::string(mbn::version) + "\n# invocation: " + invocation + "\nmeasure,value\n";
                for (const char* key : {"N", "E", "C", "L", "S", "Q"})
                    s += std::string(key) + "," + (j[key].is_null() ? "nan" : mbn::format_number(j[key].get<double>())) +
                         "\n";
                emit(met_c, s);
            }
        } else if (sw->parsed()) {
            mbn::SweepSpec spec;
            spec.n = sw_n;
            spec.seed = sw_c.seed;
            spec.samples = sw_samples;
            spec.motif_size = sw_size;
            spec.p_values = sw_p;
            spec.jobs = sw_c.jobs;
            spec.measured_motifs = sw_motifs;
            if (sw_weights.empty()) {
                const auto& cat = mbn::catalog(sw_size);
                for (std::size_t m = 0; m < cat.class_count(); ++m)
                    if (cat.edge_count(mbn::MotifId::from_index(m)) == 3)
                        sw_weights.push_back("delta:" + std::to_string(m + 1));
            }
            for (const auto& w : sw_weights) {
                auto src = mbn::parse_weight_source(w, sw_size);
                src.adapt = !sw_no_adapt;
                spec.conditions.push_back(std::move(src));
            }
            if (!sw_no_rn)
                spec.conditions.push_back(mbn::random_condition());
            for (int m : spec.measured_motifs)
                if (m < 1 || static_cast<std::size_t>(m) > mbn::catalog(sw_size).class_count())
                    throw mbn::InvalidSpec("--motifs: id " + std::to_string(m) + " out of range");
            emit_table(sw_c, mbn::sweep_motif_counts(spec).table, invocation);
        } else if (ec->parsed()) {
            for (std::size_t k : ec_k) {
                mbn::check_strategy(mbn::EmptyStrategy::intra, ec_n, k);
                mbn::check_strategy(mbn::EmptyStrategy::inter, ec_n, k);
            }
            emit_table(ec_c, mbn::empty_strategy_comparison(ec_n, ec_k, ec_samples, ec_c.seed, ec_c.jobs), invocation);
        } else if (ge->parsed()) {
            mbn::GlobalEvalSpec spec;
            spec.measure = parse_measure(ge_measure);
            spec.n = ge_n;
            spec.samples = ge_samples;
            spec.seed = ge_c.seed;
            spec.reference_samples = ge_ref;
            spec.jobs = ge_c.jobs;
            spec.parameters = ge_params;
            if (spec.parameters.empty())
                for (std::size_t p = 2; p <= (spec.measure == mbn::GlobalMeasure::smallworld ? 6u : 20u); ++p)
                    spec.parameters.push_back(p);
            for (std::size_t p : spec.parameters)
                if (p < 1 || p > ge_n - 1)
                    throw mbn::InvalidSpec("--params: value " + std::to_string(p) + " out of range");
            for (int d : ge_deltas)
                if (d < 1 || d > 16)
                    throw mbn::InvalidSpec("--deltas: id " + std::to_string(d) + " out of range");
            for (double q : ge_q)
                if (!(q >= 0.0 && q <= 1.0))
                    throw mbn::InvalidSpec("--ws-q: values must lie in [0,1]");
            spec.conditions = mbn::default_global_conditions(spec.measure, ge_deltas, ge_q);
            emit_table(ge_c, mbn::global_feature_eval(spec).table, invocation);
        } else if (ct->parsed()) {
            mbn::ContinuumSpec spec;
            spec.measure = parse_measure(ct_measure);
            spec.n = ct_n;
            spec.samples = ct_samples;
            spec.seed = ct_c.seed;
            spec.parameter = ct_param;
            spec.steps = ct_steps;
            spec.side = ct_side;
            spec.reference_samples = ct_ref;
            spec.jobs = ct_c.jobs;
            const std::string source = ct_weights.empty() ? "preset:" + ct_measure : ct_weights;
            const auto w = mbn::parse_weight_source(source, 3);
            mbn::ResultTable table = mbn::continuum_experiment(w.wtilde, ct_delta, spec).table;
            if (ct_left) {
                spec.side = -spec.side;
                for (auto& row : mbn::continuum_experiment(w.wtilde, ct_left, spec).table.rows)
                    if (row.condition != "RN" || (row.measure != "Q" && row.measure != "S"))
                        table.rows.push_back(std::move(row));
            }
            emit_table(ct_c, table, invocation);
        } else if (op->parsed()) {
            const auto measure = parse_measure(op_measure);
            const std::string tname = op_template.empty() ? op_measure : op_template;
            const mbn::WeightTemplate tmpl = tname == "smallworld"   ? mbn::smallworld_template()
                                             : tname == "modularity" ? mbn::modularity_template()
                                                                     : mbn::modularity_alt_template();
            op_ga.jobs = op_c.jobs;
            mbn::Objective objective;
            if (measure == mbn::GlobalMeasure::smallworld) {
                mbn::SmallWorldObjectiveConfig cfg;
                if (op_eval_n)
                    cfg.n = op_eval_n;
                if (!op_params.empty())
                    cfg.ks = op_params;
                cfg.samples = op_eval_samples;
                objective = [cfg](std::span<const double> w, mbn::Rng& r) { return mbn::objective_smallworld(w, cfg, r); };
            } else {
                mbn::ModularityObjectiveConfig cfg;
                cfg.n = op_eval_n ? op_eval_n : 60;
                if (!op_params.empty())
                    cfg.cluster_counts = op_params;
                cfg.samples = op_eval_samples;
                objective = [cfg](std::span<const double> w, mbn::Rng& r) { return mbn::objective_modularity(w, cfg, r); };
            }
            mbn::Rng rng(op_c.seed);
            const auto r = mbn::ga_optimize(objective, tmpl, op_ga, rng);
            nlohmann::json j;
            j["measure"] = op_measure;
            j["template"] = tmpl.mask;
            j["wtilde"] = r.best_wtilde;
            j["alpha"] = r.best_alpha;
            j["objective"] = mbn::finite_or_null(r.best_value);
            j["trace"] = nlohmann::json::array();
            for (double t : r.trace)
                j["trace"].push_back(mbn::finite_or_null(t));
            emit_json(op_c, j, invocation);
        } else if (cd->parsed()) {
            emit_json(cd_c, mbn::catalog_json(mbn::catalog(cd_size)), invocation);
        }
    } catch (const RuntimeFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mbn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
