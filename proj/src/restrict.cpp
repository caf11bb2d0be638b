#include "qcomp/restrict.hpp"

#include <functional>

#include "qcomp/error.hpp"

namespace qcomp {

XTree restrict_protocol(const XTree& p, std::size_t block, const Bitstring& x, const XLeafStats& stats) {
    if (block == 0 || block > p.n())
        throw InvalidInput("block index out of range");
    if (x.size() != p.n() * p.m())
        throw InvalidInput("x must have n*m bits");
    std::vector<XNode> nodes;
    std::function<NodeId(NodeId)> copy = [&](NodeId v) -> NodeId {
        for (;;) {
            if (p.is_leaf(v)) {
                const NodeId id = nodes.size();
                nodes.push_back(XLeaf{stats.lambda.at(v).at(block - 1) ? "1" : "0"});
                return id;
            }
            const auto& q = std::get<XQuery>(p.node(v));
            if (q.block == block)
                break;
            v = x.at((q.block - 1) * p.m() + q.bit) ? q.child1 : q.child0;
        }
        const auto& q = std::get<XQuery>(p.node(v));
        const NodeId id = nodes.size();
        nodes.push_back(XLeaf{});
        const NodeId c0 = copy(q.child0);
        const NodeId c1 = copy(q.child1);
        nodes[id] = XQuery{1, q.bit, c0, c1};
        return id;
    };
    const NodeId root = copy(p.root());
    return XTree(1, p.m(), std::move(nodes), root);
}

TrimResult trim_protocol(const XTree& t, const Distribution& mu_g, const PromiseFunction& g) {
    if (t.n() != 1 || t.m() != g.m() || mu_g.length() != g.m())
        throw InvalidInput("trimming expects a single-block protocol over the inputs of g");
    require_nontrivial(mu_g, g);
    TrimResult out{t, {}};
    if (!is_balanced(mu_g, g))
        out.warnings.push_back("mu_g is not balanced; the trimming guarantees do not apply");

    std::vector<Rational> reach(t.size(), Rational(0)), ones(t.size(), Rational(0));
    std::vector<NodeId> visited;
    for (const auto& [y, w] : mu_g.entries()) {
        visited.clear();
        t.walk(y, &visited);
        const bool value = g(y) == GValue::one;
        for (NodeId v : visited) {
            reach[v] += w;
            if (value)
                ones[v] += w;
        }
    }

    const Rational threshold(3, 4);
    std::vector<XNode> nodes;
    std::function<NodeId(NodeId)> copy = [&](NodeId v) -> NodeId {
        const NodeId id = nodes.size();
        if (!reach[v].is_zero()) {
            const Rational p1 = ones[v] / reach[v];
            if (p1 > threshold || Rational(1) - p1 > threshold) {
                nodes.push_back(XLeaf{p1 > threshold ? "1" : "0"});
                return id;
            }
        }
        if (const auto* leaf = std::get_if<XLeaf>(&t.node(v))) {
            nodes.push_back(*leaf);
            return id;
        }
        const auto q = std::get<XQuery>(t.node(v));
        nodes.push_back(XLeaf{});
        const NodeId c0 = copy(q.child0);
        const NodeId c1 = copy(q.child1);
        nodes[id] = XQuery{1, q.bit, c0, c1};
        return id;
    };
    const NodeId root = copy(t.root());
    out.tree = XTree(1, t.m(), std::move(nodes), root);
    return out;
}

Rational block_accuracy(const XTree& t, const PromiseFunction& g, const Distribution& mu_g) {
    Rational acc(0);
    for (const auto& [y, w] : mu_g.entries()) {
        const GValue v = g(y);
        if (v == GValue::star)
            continue;
        const auto& answer = std::get<XLeaf>(t.node(t.walk(y))).answer;
        if (answer.size() == 1 && answer[0] == to_char(v))
            acc += w;
    }
    return acc;
}

Rational block_expected_queries(const XTree& t, const Distribution& mu_g) {
    Rational total(0);
    std::vector<NodeId> visited;
    for (const auto& [y, w] : mu_g.entries()) {
        visited.clear();
        t.walk(y, &visited);
        total += w * Rational(static_cast<std::int64_t>(visited.size() - 1));
    }
    return total;
}

Rational conditional_delta(const XTree& p, const XLeafStats& stats, const Distribution& mu, std::size_t block,
                           const Bitstring& x) {
    const std::size_t n = p.n(), m = p.m();
    auto same_rest = [&](const Bitstring& y) {
        for (std::size_t i = 1; i <= n; ++i)
            if (i != block && y.block(i, m) != x.block(i, m))
                return false;
        return true;
    };
    Rational mass(0), total(0);
    for (const auto& [y, w] : mu.entries()) {
        if (!same_rest(y))
            continue;
        mass += w;
        total += w * stats.delta.at(p.walk(y)).at(block - 1);
    }
    if (mass.is_zero())
        throw ZeroProbabilityEvent("conditioning event on the other blocks has probability zero");
    return total / mass;
}

RestrictionRow analyze_restriction(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                   const Distribution& mu_f, const XLeafStats& stats, std::size_t block,
                                   const Bitstring& x) {
    const Distribution mu = lift_distribution(mu_f, mu_g, g);
    RestrictionRow row;
    row.block = block;
    row.x = x;
    row.delta_x = conditional_delta(p, stats, mu, block, x);
    row.cost_x = conditional_block_queries(p, mu, block, x);

    const XTree restricted = restrict_protocol(p, block, x, stats);
    const TrimResult trimmed = trim_protocol(restricted, mu_g, g);
    row.warnings = trimmed.warnings;
    row.accuracy = block_accuracy(restricted, g, mu_g);
    row.cost = block_expected_queries(restricted, mu_g);
    row.trimmed_accuracy = block_accuracy(trimmed.tree, g, mu_g);
    row.trimmed_cost = block_expected_queries(trimmed.tree, mu_g);

    const Rational half(1, 2);
    row.accuracy_bound = row.accuracy >= half + row.delta_x / Rational(2);
    row.trimmed_accuracy_bound = row.trimmed_accuracy >= half + row.delta_x / Rational(4);
    row.trimmed_cost_bound = row.trimmed_cost <= Rational(4) * row.cost_x;
    row.trim_no_increase = row.trimmed_cost <= row.cost;
    return row;
}

} // namespace qcomp
