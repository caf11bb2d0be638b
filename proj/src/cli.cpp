#include "qcomp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qcomp/error.hpp"
#include "qcomp/generate.hpp"
#include "qcomp/restrict.hpp"
#include "qcomp/serialize.hpp"
#include "qcomp/tight_example.hpp"

namespace qcomp {

namespace {

struct Options {
    std::string input, g, mu_g, nu, mu_f, out, tree, z, x, family = "mixed-boundary", format = "json";
    std::uint64_t seed = 0, trials = 0, iterations = 2000, n = 0, t = 0;
    unsigned grid = 16;
    std::size_t max_depth = 0, samples = 20;
    long block = -1;
};

std::string decimal(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", r.to_double());
    return buf;
}

std::string decimal(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", d);
    return buf;
}

Instance load_instance(const Options& o) {
    if (o.input.empty())
        throw InvalidInput("--input is required");
    Json doc = read_json_file(o.input);
    if (!o.g.empty()) {
        const Json g = read_json_file(o.g);
        doc["g"] = g.is_object() && g.contains("g") ? g["g"] : g;
    }
    if (!o.mu_g.empty()) {
        const Json mu = read_json_file(o.mu_g);
        doc["mu_g"] = mu.is_object() && mu.contains("mu_g") ? mu["mu_g"] : mu;
    }
    return decode_instance(doc);
}

PromiseFunction load_g(const Options& o) {
    if (!o.g.empty()) {
        const Json g = read_json_file(o.g);
        return decode_promise_function(g.is_object() && g.contains("g") ? g["g"] : g);
    }
    if (!o.input.empty())
        return decode_promise_function(read_json_file(o.input).at("g"));
    throw InvalidInput("--g or --input is required");
}

const XTree& require_protocol(const Instance& in) {
    if (!in.protocol)
        throw InvalidInput("instance has no protocol");
    return *in.protocol;
}

const Relation& require_relation(const Instance& in) {
    if (!in.f)
        throw InvalidInput("instance has no relation f");
    return *in.f;
}

/// --nu: uniform | points | random:K | all | point:BITS | a distribution file.
std::vector<NamedDistribution> select_nus(const std::string& choice, std::size_t n, std::uint64_t seed,
                                          const std::optional<Distribution>& from_instance) {
    std::vector<NamedDistribution> out;
    auto points = [&] {
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
            const Bitstring z = Bitstring::from_index(k, n);
            out.push_back({"point:" + z.str(), Distribution::point(z)});
        }
    };
    auto randoms = [&](std::size_t count) {
        Rng rng(seed);
        for (std::size_t k = 0; k < count; ++k)
            out.push_back({"random:" + std::to_string(k), random_distribution(rng, n)});
    };
    if (choice.empty() && from_instance) {
        out.push_back({"instance", *from_instance});
    } else if (choice.empty() || choice == "all") {
        out.push_back({"uniform", Distribution::uniform(n)});
        points();
        randoms(3);
    } else if (choice == "uniform") {
        out.push_back({"uniform", Distribution::uniform(n)});
    } else if (choice == "points") {
        points();
    } else if (choice.rfind("random:", 0) == 0) {
        randoms(std::stoul(choice.substr(7)));
    } else if (choice.rfind("point:", 0) == 0) {
        out.push_back({choice, Distribution::point(Bitstring(choice.substr(6)))});
    } else {
        const Json j = read_json_file(choice);
        out.push_back({choice, decode_distribution(j.is_object() && j.contains("nu") ? j["nu"] : j)});
    }
    for (const auto& [name, d] : out)
        if (d.length() != n)
            throw InvalidInput("distribution " + name + " is not over n = " + std::to_string(n) + " bits");
    return out;
}

std::vector<NamedDistribution> select_mu_fs(const Options& o, const Instance& in, std::size_t n) {
    if (!o.mu_f.empty())
        return select_nus(o.mu_f, n, o.seed, std::nullopt);
    if (in.mu_f)
        return {{"instance", *in.mu_f}};
    std::vector<NamedDistribution> out{{"uniform", Distribution::uniform(n)}};
    Rng rng(o.seed ^ 0x6d755f66ULL);
    for (int k = 0; k < 3; ++k)
        out.push_back({"random_full:" + std::to_string(k), random_full_support(rng, n)});
    return out;
}

TransformResult load_or_transform(const Options& o, const Instance& in) {
    if (o.tree.empty())
        return transform_protocol(require_protocol(in), in.g, in.mu_g);
    const Json j = read_json_file(o.tree);
    if (j.is_object() && j.contains("tree"))
        return decode_transform_result(j);
    TransformResult r{decode_polarised_tree(j), {}, {}};
    for (NodeId v = 0; v < r.tree.size(); ++v)
        r.isomorphism.x_to_z.push_back(v);
    return r;
}

PolarisedTree load_tree(const Options& o) {
    if (o.tree.empty())
        throw InvalidInput("--tree is required");
    const Json j = read_json_file(o.tree);
    return decode_polarised_tree(j.is_object() && j.contains("tree") ? j["tree"] : j);
}

std::size_t block_from_flag(long block, std::size_t n) {
    if (block < 0 || static_cast<std::size_t>(block) >= n)
        throw InvalidInput("--block must be in [0, " + std::to_string(n) + ")");
    return static_cast<std::size_t>(block) + 1;
}

template <typename F>
void guarded_checks(VerificationReport& report, const std::string& name, F&& fn) {
    try {
        report.append(fn());
    } catch (const Error& e) {
        report.add(name, false, e.what());
    }
}

// ---------------------------------------------------------------------------

int cmd_transform(const Options& o, std::ostream& out) {
    const Instance in = load_instance(o);
    out << dump_json(encode(transform_protocol(require_protocol(in), in.g, in.mu_g)));
    return exit_ok;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const Instance in = load_instance(o);
    const XTree& p = require_protocol(in);
    const Relation& f = require_relation(in);
    const TransformResult tr = load_or_transform(o, in);
    VerificationReport report;
    guarded_checks(report, "translation", [&] { return verify_translation(p, in.g, in.mu_g, tr.tree, tr.isomorphism); });
    for (const auto& nu : select_nus(o.nu, p.n(), o.seed, in.nu))
        guarded_checks(report, "simulation[" + nu.first + "]",
                       [&] { return verify_simulation(p, f, in.g, in.mu_g, tr.tree, tr.isomorphism, nu); });
    for (const auto& mu_f : select_mu_fs(o, in, p.n())) {
        guarded_checks(report, "structure[" + mu_f.first + "]",
                       [&] { return verify_structure(p, in.g, in.mu_g, tr.tree, mu_f); });
        guarded_checks(report, "predictors[" + mu_f.first + "]",
                       [&] { return verify_predictors(p, in.g, in.mu_g, tr.tree, mu_f); });
    }
    out << dump_json(encode(report));
    return report.pass() ? exit_ok : exit_invariant_failure;
}

void report_csv(const ProtocolReport& r, std::ostream& out) {
    out << "metric,value,value_approx\n";
    out << "error," << r.error.str() << "," << decimal(r.error) << "\n";
    out << "expected_queries," << r.expected_queries.str() << "," << decimal(r.expected_queries) << "\n";
    for (std::size_t i = 0; i < r.block_queries.size(); ++i)
        out << "block_queries_" << i << "," << r.block_queries[i].str() << "," << decimal(r.block_queries[i]) << "\n";
    for (std::size_t v = 0; v < r.reach.size(); ++v)
        out << "reach_" << v << "," << r.reach[v].str() << "," << decimal(r.reach[v]) << "\n";
}

int cmd_stats(const Options& o, std::ostream& out) {
    const Instance in = load_instance(o);
    const Relation& f = require_relation(in);
    const auto nus = select_nus(o.nu.empty() && !in.nu ? "uniform" : o.nu, f.n(), o.seed, in.nu);
    if (nus.size() != 1)
        throw InvalidInput("stats takes a single distribution for --nu");
    const ProtocolReport r = o.tree.empty()
                                 ? evaluate_x_protocol(require_protocol(in), f, in.g,
                                                       lift_distribution(nus[0].second, in.mu_g, in.g))
                                 : evaluate_polarised(load_tree(o), f, nus[0].second);
    if (o.format == "csv")
        report_csv(r, out);
    else
        out << dump_json(encode(r));
    return exit_ok;
}

int cmd_restrict(const Options& o, std::ostream& out, std::ostream& err) {
    const Instance in = load_instance(o);
    const XTree& p = require_protocol(in);
    const std::size_t n = p.n(), m = p.m();
    const Distribution mu_f = in.mu_f ? *in.mu_f : Distribution::uniform(n);
    const Distribution mu = lift_distribution(mu_f, in.mu_g, in.g);
    const XLeafStats stats = x_leaf_stats(p, in.g, in.mu_g, mu_f);
    const bool balanced = is_balanced(in.mu_g, in.g);
    if (!balanced)
        err << "warning: mu_g is not balanced; the inequalities are reported but not enforced\n";

    std::vector<std::size_t> blocks;
    if (o.block >= 0)
        blocks.push_back(block_from_flag(o.block, n));
    else
        for (std::size_t i = 1; i <= n; ++i)
            blocks.push_back(i);
    std::vector<Bitstring> xs;
    if (!o.x.empty()) {
        xs.emplace_back(o.x);
        if (xs[0].size() != n * m)
            throw InvalidInput("--x must have n*m bits");
    } else {
        Rng rng(o.seed);
        for (std::size_t k = 0; k < o.samples; ++k)
            xs.push_back(mu.entries()[rng() % mu.support_size()].bits);
    }

    bool pass = true;
    out << "block,x,delta_x,cost_x,accuracy,cost,trimmed_accuracy,trimmed_cost,accuracy_bound,trimmed_accuracy_bound,"
           "trimmed_cost_bound,trim_no_increase,delta_x_approx,cost_x_approx,trimmed_accuracy_approx,"
           "trimmed_cost_approx\n";
    for (const auto& x : xs)
        for (std::size_t i : blocks) {
            const RestrictionRow r = analyze_restriction(p, in.g, in.mu_g, mu_f, stats, i, x);
            pass = pass && r.pass();
            out << (i - 1) << "," << x.str() << "," << r.delta_x.str() << "," << r.cost_x.str() << ","
                << r.accuracy.str() << "," << r.cost.str() << "," << r.trimmed_accuracy.str() << ","
                << r.trimmed_cost.str() << "," << r.accuracy_bound << "," << r.trimmed_accuracy_bound << ","
                << r.trimmed_cost_bound << "," << r.trim_no_increase << "," << decimal(r.delta_x) << ","
                << decimal(r.cost_x) << "," << decimal(r.trimmed_accuracy) << "," << decimal(r.trimmed_cost) << "\n";
        }
    return (pass || !balanced) ? exit_ok : exit_invariant_failure;
}

int cmd_trim(const Options& o, std::ostream& out) {
    const Instance in = load_instance(o);
    const XTree& p = require_protocol(in);
    if (o.x.empty())
        throw InvalidInput("--x is required");
    const std::size_t block = block_from_flag(o.block, p.n());
    const Bitstring x(o.x);
    const Distribution mu_f = in.mu_f ? *in.mu_f : Distribution::uniform(p.n());
    const XLeafStats stats = x_leaf_stats(p, in.g, in.mu_g, mu_f);
    const XTree restricted = restrict_protocol(p, block, x, stats);
    const TrimResult trimmed = trim_protocol(restricted, in.mu_g, in.g);
    const RestrictionRow row = analyze_restriction(p, in.g, in.mu_g, mu_f, stats, block, x);
    Json doc{{"block", block - 1},
             {"x", x.str()},
             {"restricted", encode(restricted)},
             {"trimmed", encode(trimmed.tree)},
             {"warnings", trimmed.warnings},
             {"delta_x", encode(row.delta_x)},
             {"cost_x", encode(row.cost_x)},
             {"accuracy", encode(row.accuracy)},
             {"cost", encode(row.cost)},
             {"trimmed_accuracy", encode(row.trimmed_accuracy)},
             {"trimmed_cost", encode(row.trimmed_cost)},
             {"pass", row.pass()}};
    out << dump_json(doc);
    return (row.pass() || !trimmed.warnings.empty()) ? exit_ok : exit_invariant_failure;
}

int cmd_hardest(const Options& o, std::ostream& out) {
    const PromiseFunction g = load_g(o);
    SearchOptions so{o.iterations, o.grid, o.seed, o.max_depth};
    const SearchResult r = search_hardest(g, so);
    const TreeFamily family(g.m(), o.max_depth == 0 ? g.m() : o.max_depth);
    out << dump_json(encode(r, &family));
    return exit_ok;
}

int cmd_tight(const Options& o, std::ostream& out) {
    if (o.n == 0 || o.t == 0)
        throw InvalidInput("--n and --t are required");
    const Rational adv = exact_probe_advantage(o.n, o.t);
    const Rational bound = advantage_bound(o.n, o.t);
    out << "n,t,advantage,bound,advantage_approx,bound_approx,trials,seed,family,errors,estimate_approx,"
           "ci_low_approx,ci_high_approx,chernoff_bound_approx,queries_per_run\n";
    out << o.n << "," << o.t << "," << adv.str() << "," << bound.str() << "," << decimal(adv) << ","
        << decimal(bound);
    if (o.trials > 0) {
        const MonteCarloResult mc = monte_carlo_error(o.n, o.t, o.trials, o.seed, input_family_from_string(o.family));
        out << "," << mc.trials << "," << mc.seed << "," << to_string(mc.family) << "," << mc.errors << ","
            << decimal(mc.estimate) << "," << decimal(mc.ci_low) << "," << decimal(mc.ci_high) << ","
            << decimal(mc.chernoff_bound) << "," << mc.queries_per_run << "\n";
    } else {
        out << ",0," << o.seed << ",,,,,," << decimal(chernoff_bound(o.t)) << "," << o.n * o.t << "\n";
    }
    return exit_ok;
}

int cmd_paths(const Options& o, std::ostream& out) {
    const PolarisedTree tree = load_tree(o);
    if (o.z.empty())
        throw InvalidInput("--z is required");
    const Bitstring z(o.z);
    if (z.size() != tree.n())
        throw InvalidInput("--z must have n bits");
    out << dump_json(encode(enumerate_paths(tree, z), tree.n()));
    return exit_ok;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact experiments on polarised protocols for composed query problems", "qcomp"};
    app.require_subcommand(1);
    Options o;

    auto input = [&](CLI::App* c) { c->add_option("--input", o.input, "instance JSON (g, mu_g, f, protocol)"); };
    auto overrides = [&](CLI::App* c) {
        c->add_option("--g", o.g, "promise function JSON, replaces the instance's g");
        c->add_option("--mu-g", o.mu_g, "block distribution JSON, replaces the instance's mu_g");
    };
    auto out_opt = [&](CLI::App* c) { c->add_option("--out", o.out, "write the artifact here instead of stdout"); };
    auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "seed for every random choice (default 0)"); };

    auto* transform = app.add_subcommand("transform", "translate the protocol into a polarised protocol");
    input(transform), overrides(transform), out_opt(transform);

    auto* verify = app.add_subcommand("verify", "check every guarantee of the translation exactly");
    input(verify), overrides(verify), out_opt(verify), seed(verify);
    verify->add_option("--tree", o.tree, "polarised tree or transform output to check (default: translate now)");
    verify->add_option("--nu", o.nu, "uniform | points | random:K | point:BITS | all | FILE");
    verify->add_option("--mu-f", o.mu_f, "distributions for the structural and predictor checks");

    auto* stats = app.add_subcommand("stats", "exact error and query costs");
    input(stats), overrides(stats), out_opt(stats), seed(stats);
    stats->add_option("--tree", o.tree, "evaluate this polarised tree instead of the protocol");
    stats->add_option("--nu", o.nu, "distribution of Z (default uniform)");
    stats->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* restrict = app.add_subcommand("restrict", "restriction and trimming inequalities, one CSV row per (block, x)");
    input(restrict), overrides(restrict), out_opt(restrict), seed(restrict);
    restrict->add_option("--block", o.block, "0-based block (default: all)");
    restrict->add_option("--x", o.x, "fixed input (default: sampled from mu_f o mu_g)");
    restrict->add_option("--samples", o.samples, "number of sampled inputs");

    auto* trim = app.add_subcommand("trim", "restricted and trimmed single-block protocols");
    input(trim), overrides(trim), out_opt(trim);
    trim->add_option("--block", o.block, "0-based block")->required();
    trim->add_option("--x", o.x, "fixed input")->required();

    auto* hardest = app.add_subcommand("hardest", "search for a hard balanced block distribution");
    hardest->add_option("--g", o.g, "promise function JSON");
    hardest->add_option("--input", o.input, "instance JSON providing g");
    out_opt(hardest), seed(hardest);
    hardest->add_option("--grid", o.grid, "weights move in steps of 1/grid per side (max 64)");
    hardest->add_option("--iterations", o.iterations, "grid points to examine and hill-climbing steps");
    hardest->add_option("--max-depth", o.max_depth, "depth of the enumerated trees (default m)");

    auto* tight = app.add_subcommand("tight", "majority-of-probes protocol: exact advantage and Monte Carlo error");
    out_opt(tight), seed(tight);
    tight->add_option("--n", o.n, "block length and number of blocks (perfect square)")->required();
    tight->add_option("--t", o.t, "odd number of probes per block")->required();
    tight->add_option("--trials", o.trials, "Monte Carlo trials (0 skips the simulation)");
    tight->add_option("--family", o.family, "boundary-zero | boundary-one | mixed-boundary | all-zero | all-one");

    auto* paths = app.add_subcommand("paths", "list the computational paths of a polarised tree on z");
    out_opt(paths);
    paths->add_option("--tree", o.tree, "polarised tree JSON")->required();
    paths->add_option("--z", o.z, "input z")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    std::ostringstream buffer;
    int status = exit_ok;
    try {
        if (transform->parsed())
            status = cmd_transform(o, buffer);
        else if (verify->parsed())
            status = cmd_verify(o, buffer);
        else if (stats->parsed())
            status = cmd_stats(o, buffer);
        else if (restrict->parsed())
            status = cmd_restrict(o, buffer, err);
        else if (trim->parsed())
            status = cmd_trim(o, buffer);
        else if (hardest->parsed())
            status = cmd_hardest(o, buffer);
        else if (tight->parsed())
            status = cmd_tight(o, buffer);
        else if (paths->parsed())
            status = cmd_paths(o, buffer);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ConsistencyError& e) {
        err << "internal consistency failure: " << e.what() << "\n";
        return exit_invariant_failure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    if (o.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(o.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << o.out << "\n";
            return exit_usage;
        }
        file << buffer.str();
    }
    return status;
}

} // namespace qcomp
