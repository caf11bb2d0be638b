#include "qcomp/eval.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

#include "qcomp/error.hpp"

namespace qcomp {

namespace {

std::size_t mask_count(std::size_t n) { return std::size_t{1} << n; }

void require_x_dimensions(const XTree& tree, const PromiseFunction& g, const Distribution& mu) {
    if (g.m() != tree.m())
        throw InvalidInput("protocol reads blocks of " + std::to_string(tree.m()) + " bits but g takes " +
                           std::to_string(g.m()));
    if (mu.length() != tree.n() * tree.m())
        throw InvalidInput("distribution is over " + std::to_string(mu.length()) + " bits, protocol reads " +
                           std::to_string(tree.n() * tree.m()));
}

/// Concatenation of every block except `block`.
Bitstring rest_of(const Bitstring& x, std::size_t n, std::size_t m, std::size_t block) {
    std::vector<Bitstring> parts;
    for (std::size_t i = 1; i <= n; ++i)
        if (i != block)
            parts.push_back(x.block(i, m));
    return concat(parts);
}

} // namespace

// ---------------------------------------------------------------------------

Rational ZLaw::reach(NodeId v) const {
    Rational r(0);
    for (const auto& m : mass.at(v))
        r += m;
    return r;
}

Rational ZLaw::known(NodeId v, std::size_t i) const {
    Rational r(0);
    const auto& row = mass.at(v);
    const std::size_t bit = std::size_t{1} << (i - 1);
    for (std::size_t mask = 0; mask < row.size(); ++mask)
        if (mask & bit)
            r += row[mask];
    return r;
}

void propagate_node(const PNode& node, const Bitstring& z, std::span<const Rational> in, std::span<Rational> out0,
                    std::span<Rational> out1, std::span<Rational> index_queries) {
    const Rational one(1);
    if (const auto* f = std::get_if<RandFork>(&node)) {
        const Rational rest = one - f->alpha;
        for (std::size_t mask = 0; mask < in.size(); ++mask) {
            if (in[mask].is_zero())
                continue;
            out0[mask] += in[mask] * f->alpha;
            out1[mask] += in[mask] * rest;
        }
        return;
    }
    if (const auto* q = std::get_if<ZNode>(&node)) {
        const std::size_t bit = std::size_t{1} << (q->index - 1);
        const bool zi = z.at(q->index);
        auto& answer = zi ? out1 : out0;
        const Rational no_query = one - q->alpha;
        const Rational say_one = no_query * q->beta;
        const Rational say_zero = no_query * (one - q->beta);
        for (std::size_t mask = 0; mask < in.size(); ++mask) {
            const Rational& m = in[mask];
            if (m.is_zero())
                continue;
            if (mask & bit) {
                answer[mask] += m;
                continue;
            }
            const Rational queried = m * q->alpha;
            answer[mask | bit] += queried;
            index_queries[q->index - 1] += queried;
            out1[mask] += m * say_one;
            out0[mask] += m * say_zero;
        }
        return;
    }
    if (const auto* mx = std::get_if<ZMixer>(&node)) {
        const std::size_t bit = std::size_t{1} << (mx->index - 1);
        const Rational known0 = one - mx->alpha;
        const Rational unknown0 = one - mx->beta;
        for (std::size_t mask = 0; mask < in.size(); ++mask) {
            const Rational& m = in[mask];
            if (m.is_zero())
                continue;
            const bool known = mask & bit;
            out1[mask] += m * (known ? mx->alpha : mx->beta);
            out0[mask] += m * (known ? known0 : unknown0);
        }
    }
}

ZLaw z_law(const PolarisedTree& tree, const Bitstring& z) {
    if (z.size() != tree.n())
        throw InvalidInput("input z has " + std::to_string(z.size()) + " bits, tree expects " + std::to_string(tree.n()));
    const std::size_t masks = mask_count(tree.n());
    ZLaw law;
    law.mass.assign(tree.size(), std::vector<Rational>(masks));
    law.index_queries.assign(tree.n(), Rational(0));
    law.mass[tree.root()][0] = Rational(1);
    for (NodeId v : tree.top_down()) {
        const PNode& node = tree.node(v);
        const auto kids = children_of(node);
        if (kids.empty())
            continue;
        // Children come later in topological order, so their rows are only
        // written here; copy the input row in case a child aliases it.
        const std::vector<Rational> in = law.mass[v];
        propagate_node(node, z, in, law.mass[kids[0]], law.mass[kids[1]], law.index_queries);
    }
    for (const auto& q : law.index_queries)
        law.expected_queries += q;
    return law;
}

std::vector<ZLaw> z_laws(const PolarisedTree& tree) {
    const std::size_t count = mask_count(tree.n());
    std::vector<ZLaw> laws(count);
    const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < total; ++k)
        laws[static_cast<std::size_t>(k)] = z_law(tree, Bitstring::from_index(static_cast<std::uint64_t>(k), tree.n()));
    return laws;
}

namespace reference {

std::vector<ZLaw> z_laws(const PolarisedTree& tree) {
    const std::size_t count = mask_count(tree.n());
    std::vector<ZLaw> laws;
    laws.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        laws.push_back(z_law(tree, Bitstring::from_index(k, tree.n())));
    return laws;
}

} // namespace reference

// ---------------------------------------------------------------------------

Distribution conditional_z_law(const ProtocolReport& report, NodeId v) {
    const Rational& r = report.reach.at(v);
    if (r.is_zero())
        throw ZeroProbabilityEvent("vertex " + std::to_string(v) + " is reached with probability zero");
    std::vector<Distribution::Entry> entries;
    for (const auto& [z, w] : report.z_mass.at(v))
        entries.push_back({z, w / r});
    return Distribution(std::move(entries));
}

ProtocolReport evaluate_x_protocol(const XTree& tree, const Relation& f, const PromiseFunction& g,
                                   const Distribution& mu) {
    require_x_dimensions(tree, g, mu);
    if (f.n() != tree.n())
        throw InvalidInput("relation is over " + std::to_string(f.n()) + " bits, protocol has n = " +
                           std::to_string(tree.n()));
    ProtocolReport report;
    report.block_queries.assign(tree.n(), Rational(0));
    report.reach.assign(tree.size(), Rational(0));
    report.z_mass.resize(tree.size());
    report.warnings = f.warnings();

    std::vector<NodeId> visited;
    for (const auto& [x, w] : mu.entries()) {
        visited.clear();
        const NodeId leaf = tree.walk(x, &visited);
        const auto z = apply_blocks(g, x);
        for (NodeId v : visited) {
            report.reach[v] += w;
            if (z)
                report.z_mass[v][*z] += w;
            if (const auto* q = std::get_if<XQuery>(&tree.node(v))) {
                report.block_queries[q->block - 1] += w;
                report.expected_queries += w;
            }
        }
        if (!compose_membership(f, g, x, std::get<XLeaf>(tree.node(leaf)).answer))
            report.error += w;
    }
    return report;
}

ProtocolReport evaluate_polarised(const PolarisedTree& tree, const Relation& f, const Distribution& nu) {
    if (nu.length() != tree.n() || f.n() != tree.n())
        throw InvalidInput("relation, distribution and polarised tree disagree on n");
    for (NodeId l : tree.leaves())
        if (!std::get<ZLeaf>(tree.node(l)).answer)
            throw InvalidInput("leaf " + std::to_string(l) + " carries no answer label");

    const auto& entries = nu.entries();
    std::vector<ZLaw> laws(entries.size());
    const auto total = static_cast<std::ptrdiff_t>(entries.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < total; ++k)
        laws[static_cast<std::size_t>(k)] = z_law(tree, entries[static_cast<std::size_t>(k)].bits);

    ProtocolReport report;
    report.block_queries.assign(tree.n(), Rational(0));
    report.reach.assign(tree.size(), Rational(0));
    report.z_mass.resize(tree.size());
    report.warnings = f.warnings();
    const auto leaves = tree.leaves();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& [z, w] = entries[k];
        const ZLaw& law = laws[k];
        for (NodeId v = 0; v < tree.size(); ++v) {
            const Rational r = law.reach(v) * w;
            if (r.is_zero())
                continue;
            report.reach[v] += r;
            report.z_mass[v][z] += r;
        }
        for (std::size_t i = 0; i < tree.n(); ++i)
            report.block_queries[i] += law.index_queries[i] * w;
        report.expected_queries += law.expected_queries * w;
        for (NodeId l : leaves)
            if (!f.accepts(z, *std::get<ZLeaf>(tree.node(l)).answer))
                report.error += law.reach(l) * w;
    }
    return report;
}

Rational conditional_block_queries(const XTree& tree, const Distribution& mu, std::size_t block, const Bitstring& x) {
    if (block == 0 || block > tree.n())
        throw InvalidInput("block index out of range");
    if (mu.length() != tree.n() * tree.m() || x.size() != mu.length())
        throw InvalidInput("conditioning input has the wrong length");
    const Bitstring rest = tree.n() > 1 ? rest_of(x, tree.n(), tree.m(), block) : Bitstring();
    Rational mass(0), queries(0);
    std::vector<NodeId> visited;
    for (const auto& [y, w] : mu.entries()) {
        if (tree.n() > 1 && rest_of(y, tree.n(), tree.m(), block) != rest)
            continue;
        mass += w;
        visited.clear();
        tree.walk(y, &visited);
        for (NodeId v : visited)
            if (const auto* q = std::get_if<XQuery>(&tree.node(v)); q && q->block == block)
                queries += w;
    }
    if (mass.is_zero())
        throw ZeroProbabilityEvent("conditioning event X_{[n]\\" + std::to_string(block) + "} = x has probability zero");
    return queries / mass;
}

std::vector<Rational> x_reach(const XTree& tree, const Distribution& mu) {
    std::vector<Rational> reach(tree.size(), Rational(0));
    std::vector<NodeId> visited;
    for (const auto& [x, w] : mu.entries()) {
        visited.clear();
        tree.walk(x, &visited);
        for (NodeId v : visited)
            reach[v] += w;
    }
    return reach;
}

// ---------------------------------------------------------------------------

namespace {

void predictor(const Rational& mass, const Rational& ones, std::uint8_t& lambda, Rational& delta) {
    if (mass.is_zero()) {
        lambda = 0;
        delta = Rational(0);
        return;
    }
    const Rational zeros = mass - ones;
    lambda = ones > zeros ? 1 : 0;
    delta = (lambda ? ones : zeros) / mass - Rational(1, 2);
}

} // namespace

XLeafStats x_leaf_stats(const XTree& tree, const PromiseFunction& g, const Distribution& mu_g,
                        const Distribution& mu_f) {
    const std::size_t n = tree.n();
    if (mu_f.length() != n)
        throw InvalidInput("mu_f must be over n = " + std::to_string(n) + " bits");
    const Distribution uniform_lift = lift_distribution(Distribution::uniform(n), mu_g, g);
    require_x_dimensions(tree, g, uniform_lift);

    std::vector<Rational> mass(tree.size(), Rational(0));
    std::vector<std::vector<Rational>> ones(tree.size(), std::vector<Rational>(n, Rational(0)));
    for (const auto& [x, w] : uniform_lift.entries()) {
        const NodeId l = tree.walk(x);
        const Bitstring z = *apply_blocks(g, x);
        mass[l] += w;
        for (std::size_t i = 1; i <= n; ++i)
            if (z.at(i))
                ones[l][i - 1] += w;
    }

    XLeafStats stats;
    stats.lambda.assign(tree.size(), std::vector<std::uint8_t>(n, 0));
    stats.delta.assign(tree.size(), std::vector<Rational>(n, Rational(0)));
    stats.tree_delta.assign(n, Rational(0));
    for (NodeId v = 0; v < tree.size(); ++v)
        if (tree.is_leaf(v))
            for (std::size_t i = 0; i < n; ++i)
                predictor(mass[v], ones[v][i], stats.lambda[v][i], stats.delta[v][i]);

    const std::vector<Rational> leaf_law = x_reach(tree, lift_distribution(mu_f, mu_g, g));
    for (NodeId v = 0; v < tree.size(); ++v)
        if (tree.is_leaf(v) && !leaf_law[v].is_zero())
            for (std::size_t i = 0; i < n; ++i)
                stats.tree_delta[i] += leaf_law[v] * stats.delta[v][i];
    return stats;
}

ZLeafStats z_leaf_stats(const PolarisedTree& tree, const Distribution& mu_f) {
    const std::size_t n = tree.n();
    if (mu_f.length() != n)
        throw InvalidInput("mu_f must be over n = " + std::to_string(n) + " bits");
    const PolarityReport polarity = check_polarity(tree);
    if (!polarity.polarised())
        throw InvalidInput("tree is not polarised at vertex " + std::to_string(polarity.violation->vertex) +
                           " for index " + std::to_string(polarity.violation->index));

    const auto laws = z_laws(tree);
    const auto leaves = tree.leaves();
    const std::size_t nodes = tree.size();

    ZLeafStats stats;
    stats.polarity.assign(nodes, std::vector<std::uint8_t>(n, 0));
    stats.q.assign(nodes, std::vector<Rational>(n, Rational(0)));
    stats.lambda.assign(nodes, std::vector<std::uint8_t>(n, 0));
    stats.delta.assign(nodes, std::vector<Rational>(n, Rational(0)));
    stats.tree_delta.assign(n, Rational(0));
    stats.half_mean_q.assign(n, Rational(0));

    for (NodeId l : leaves) {
        // Uniform weights cancel in every conditional below.
        Rational reach(0);
        std::vector<Rational> ones(n, Rational(0)), known(n, Rational(0));
        for (std::size_t k = 0; k < laws.size(); ++k) {
            const Bitstring z = Bitstring::from_index(k, n);
            const Rational r = laws[k].reach(l);
            if (r.is_zero())
                continue;
            reach += r;
            for (std::size_t i = 1; i <= n; ++i) {
                if (z.at(i))
                    ones[i - 1] += r;
                known[i - 1] += laws[k].known(l, i);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            stats.polarity[l][i] = polarity.known_value[l][i] == 1 ? 1 : 0;
            stats.q[l][i] = reach.is_zero() ? Rational(0) : known[i] / reach;
            predictor(reach, ones[i], stats.lambda[l][i], stats.delta[l][i]);
        }
    }

    for (const auto& [z, w] : mu_f.entries()) {
        const ZLaw& law = laws[z.index()];
        for (NodeId l : leaves) {
            const Rational p = law.reach(l) * w;
            if (p.is_zero())
                continue;
            for (std::size_t i = 0; i < n; ++i) {
                stats.tree_delta[i] += p * stats.delta[l][i];
                stats.half_mean_q[i] += p * stats.q[l][i] * Rational(1, 2);
            }
        }
    }
    return stats;
}

// ---------------------------------------------------------------------------

PolarityReport check_polarity(const PolarisedTree& tree) {
    const std::size_t n = tree.n();
    using State = std::pair<NodeId, WState>;
    struct Pred {
        State from;
        PathStep step;
        bool is_root;
    };

    PolarityReport report;
    report.known_value.assign(tree.size(), std::vector<int>(n, -1));
    std::map<State, Pred> seen;
    std::map<std::tuple<NodeId, std::size_t, bool>, WState> witness_state;
    std::deque<State> queue;

    auto path_to = [&](State s) {
        std::vector<PathStep> steps;
        for (;;) {
            const Pred& p = seen.at(s);
            if (p.is_root)
                break;
            steps.push_back(p.step);
            s = p.from;
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
    };

    // Returns false once a violation has been recorded.
    auto arrive = [&](State s, std::optional<Pred> pred) {
        if (seen.contains(s))
            return true;
        seen.emplace(s, pred ? *pred : Pred{s, {}, true});
        const auto& [v, w] = s;
        for (std::size_t i = 1; i <= n; ++i) {
            if (!w.is_known(i))
                continue;
            const bool b = w.value(i);
            witness_state.try_emplace({v, i, b}, w);
            int& kv = report.known_value[v][i - 1];
            if (kv == -1) {
                kv = b ? 1 : 0;
            } else if (kv != (b ? 1 : 0)) {
                const WState other = witness_state.at({v, i, !b});
                auto mine = path_to(s);
                auto theirs = path_to({v, other});
                report.violation = PolarityViolation{v, i, b ? theirs : mine, b ? mine : theirs};
                return false;
            }
        }
        queue.push_back(s);
        return true;
    };

    if (!arrive({tree.root(), WState{}}, std::nullopt))
        return report;
    while (!queue.empty()) {
        const State s = queue.front();
        queue.pop_front();
        const auto& [v, w] = s;
        const PNode& node = tree.node(v);
        std::vector<std::pair<State, PathStep>> next;
        if (const auto* f = std::get_if<RandFork>(&node)) {
            if (f->alpha.sign() > 0)
                next.push_back({{f->left, w}, {v, 0, false}});
            if (f->alpha < Rational(1))
                next.push_back({{f->right, w}, {v, 1, false}});
        } else if (const auto* q = std::get_if<ZNode>(&node)) {
            if (w.is_known(q->index)) {
                const bool b = w.value(q->index);
                next.push_back({{b ? q->child1 : q->child0, w}, {v, b ? 1 : 0, false}});
            } else {
                if (q->alpha.sign() > 0)
                    for (bool b : {false, true}) {
                        WState after = w;
                        after.record(q->index, b);
                        next.push_back({{b ? q->child1 : q->child0, after}, {v, b ? 1 : 0, true}});
                    }
                if (q->alpha < Rational(1)) {
                    if (q->beta.sign() > 0)
                        next.push_back({{q->child1, w}, {v, 1, false}});
                    if (q->beta < Rational(1))
                        next.push_back({{q->child0, w}, {v, 0, false}});
                }
            }
        } else if (const auto* mx = std::get_if<ZMixer>(&node)) {
            const Rational& p1 = w.is_known(mx->index) ? mx->alpha : mx->beta;
            if (p1.sign() > 0)
                next.push_back({{mx->child1, w}, {v, 1, false}});
            if (p1 < Rational(1))
                next.push_back({{mx->child0, w}, {v, 0, false}});
        }
        for (const auto& [t, step] : next)
            if (!arrive(t, Pred{s, step, false}))
                return report;
    }
    return report;
}

IndependenceReport check_block_independence(const XTree& tree, NodeId v, const PromiseFunction& g,
                                            const Distribution& mu, std::size_t block) {
    require_x_dimensions(tree, g, mu);
    const std::size_t n = tree.n(), m = tree.m();
    if (block == 0 || block > n)
        throw InvalidInput("block index out of range");
    if (v >= tree.size())
        throw InvalidInput("vertex " + std::to_string(v) + " does not exist");

    IndependenceReport report;
    for (bool a : {false, true}) {
        std::map<std::pair<Bitstring, Bitstring>, Rational> joint;
        std::map<Bitstring, Rational> own, rest;
        Rational total(0);
        std::vector<NodeId> visited;
        for (const auto& [x, w] : mu.entries()) {
            const Bitstring xi = x.block(block, m);
            if (g(xi) != gvalue_from_bit(a))
                continue;
            visited.clear();
            tree.walk(x, &visited);
            if (std::find(visited.begin(), visited.end(), v) == visited.end())
                continue;
            total += w;
            if (n == 1)
                continue;
            const Bitstring others = rest_of(x, n, m, block);
            joint[{xi, others}] += w;
            own[xi] += w;
            rest[others] += w;
        }
        if (total.is_zero())
            continue;
        report.reached = true;
        if (n == 1)
            continue;
        auto fail = [&](const Bitstring& s, const Bitstring& t) {
            report.pass = false;
            report.value = a ? 1 : 0;
            report.block_value = s;
            report.rest_value = t;
        };
        if (joint.size() != own.size() * rest.size()) {
            for (const auto& [s, ps] : own)
                for (const auto& [t, pt] : rest)
                    if (!joint.contains({s, t})) {
                        fail(s, t);
                        return report;
                    }
        }
        for (const auto& [key, pst] : joint)
            if (pst * total != own.at(key.first) * rest.at(key.second)) {
                fail(key.first, key.second);
                return report;
            }
    }
    return report;
}

LocalityReport check_query_locality(const PolarisedTree& tree, NodeId leaf) {
    return check_query_locality(tree, leaf, z_laws(tree));
}

LocalityReport check_query_locality(const PolarisedTree& tree, NodeId leaf, const std::vector<ZLaw>& laws) {
    const std::size_t n = tree.n();
    if (leaf >= tree.size())
        throw InvalidInput("vertex " + std::to_string(leaf) + " does not exist");
    LocalityReport report;
    report.value.resize(n);
    std::vector<std::array<std::optional<Bitstring>, 2>> first(n);
    for (std::size_t k = 0; k < laws.size(); ++k) {
        const Rational r = laws[k].reach(leaf);
        if (r.is_zero())
            continue;
        const Bitstring z = Bitstring::from_index(k, n);
        for (std::size_t i = 1; i <= n; ++i) {
            const int a = z.at(i) ? 1 : 0;
            const Rational p = laws[k].known(leaf, i) / r;
            auto& slot = report.value[i - 1][a];
            if (!slot) {
                slot = p;
                first[i - 1][a] = z;
            } else if (*slot != p && report.pass) {
                report.pass = false;
                report.index = i;
                report.z_first = first[i - 1][a];
                report.z_second = z;
            }
        }
    }
    return report;
}

} // namespace qcomp
