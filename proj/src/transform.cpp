#include "qcomp/transform.hpp"

#include <map>

#include "qcomp/error.hpp"

namespace qcomp {

const char* to_string(TranslationCase c) {
    switch (c) {
    case TranslationCase::unreachable: return "unreachable";
    case TranslationCase::degenerate: return "degenerate";
    case TranslationCase::mixer: return "mixer";
    case TranslationCase::znode: return "znode";
    }
    return "?";
}

namespace {

void require_unit(const Rational& r, const char* name, NodeId v) {
    if (!r.in_unit_interval())
        throw ConsistencyError(std::string(name) + " = " + r.str() + " outside [0,1] at vertex " + std::to_string(v));
}

void require_positive(const Rational& r, const char* what, NodeId v) {
    if (r.sign() <= 0)
        throw ConsistencyError(std::string(what) + " must be positive at vertex " + std::to_string(v));
}

} // namespace

NodeTranslation analyze_node(const NodeEvidence& e) {
    const Rational one(1);
    NodeTranslation t;
    t.vertex = e.vertex;
    t.block = e.block;
    if (e.reach.is_zero()) {
        t.kind = TranslationCase::unreachable;
        t.alpha0 = Rational(1, 2);
        t.beta0 = Rational(1, 2);
        return t;
    }
    if (e.image_reach != e.reach)
        throw ConsistencyError("reach of vertex " + std::to_string(e.vertex) + " is " + e.reach.str() +
                               " but its image is reached with probability " + e.image_reach.str());

    t.p_in = e.reach_z1 / e.reach;
    std::array<Rational, 2> p;
    for (int b = 0; b < 2; ++b)
        p[b] = e.edge[b].is_zero() ? t.p_in : e.edge_z1[b] / e.edge[b];
    t.a0 = p[0] <= p[1] ? 0 : 1;
    t.p_lt = p[t.a0];
    t.p_gt = p[1 - t.a0];
    t.tau_lt = e.edge[t.a0] / e.reach;
    t.tau_gt = one - t.tau_lt;

    if (e.known0.sign() > 0 && e.known1.sign() > 0)
        throw ConsistencyError("image of vertex " + std::to_string(e.vertex) + " is reached knowing both values of Z_" +
                               std::to_string(e.block));
    const Rational known = e.known0 + e.known1;
    t.q_in = known / e.image_reach;
    t.polarity = e.known1.sign() > 0 ? 1 : (e.known0.sign() > 0 ? 0 : -1);
    const Rational unknown = e.image_reach - known;
    if (unknown.sign() > 0)
        t.p_star = e.unknown_z1 / unknown;
    if ((e.known1 + e.unknown_z1) / e.image_reach != t.p_in)
        throw ConsistencyError("law of Z_" + std::to_string(e.block) + " differs between vertex " +
                               std::to_string(e.vertex) + " and its image");

    if (t.p_lt == t.p_gt) {
        t.kind = TranslationCase::degenerate;
        t.alpha0 = t.tau_gt;
        t.beta0 = t.tau_gt;
        return t;
    }
    if (!t.p_star)
        throw ConsistencyError("Z_" + std::to_string(e.block) + " is always known at the image of vertex " +
                               std::to_string(e.vertex) + " yet the query is informative");

    // Work with w_{i₀} ∈ {*, 1}; a known 0 is handled on the complemented problem.
    t.flip = t.polarity == 0;
    const Rational p_in = t.flip ? one - t.p_in : t.p_in;
    const Rational p_lt = t.flip ? one - t.p_gt : t.p_lt;
    const Rational tau_lt = t.flip ? t.tau_gt : t.tau_lt;
    const Rational p_star = t.flip ? one - *t.p_star : *t.p_star;
    const Rational& q = t.q_in;
    const Rational w = q.sign() > 0 ? one : Rational(0);
    if (p_star * (one - q) + q * w != p_in)
        throw ConsistencyError("weighting identity fails at vertex " + std::to_string(e.vertex));

    Rational alpha, beta;
    if (p_star <= p_lt) {
        t.kind = TranslationCase::mixer;
        require_positive(q, "q_in", e.vertex);
        require_positive(tau_lt, "tau_<", e.vertex);
        const Rational g1 = (one - q) * (p_lt - p_star) / (one - p_lt);
        const Rational not_beta = tau_lt / (one - q + g1);
        beta = one - not_beta;
        alpha = one - not_beta * g1 / q;
        t.gamma1 = g1;
    } else {
        t.kind = TranslationCase::znode;
        require_positive(p_star, "p*", e.vertex);
        require_positive(one - p_lt, "1 - p_<", e.vertex);
        const Rational ap = one - p_lt * (one - p_star) / ((one - p_lt) * p_star);
        const Rational g2 = (one - ap * p_star) * (one - q);
        require_positive(g2, "gamma_2", e.vertex);
        const Rational g3 = tau_lt / g2;
        alpha = g3 * ap;
        const Rational rest = one - alpha;
        beta = rest.is_zero() ? Rational(0) : (one - g3) / rest;
        t.alpha_prime = ap;
        t.gamma2 = g2;
        t.gamma3 = g3;
    }
    require_unit(alpha, "alpha", e.vertex);
    require_unit(beta, "beta", e.vertex);

    if (!t.flip) {
        t.alpha0 = alpha;
        t.beta0 = beta;
    } else if (t.kind == TranslationCase::znode) {
        t.alpha0 = alpha;
        t.beta0 = one - beta;
    } else {
        t.alpha0 = one - alpha;
        t.beta0 = one - beta;
    }
    return t;
}

PNode translate_node(const NodeTranslation& t, NodeId child0, NodeId child1) {
    switch (t.kind) {
    case TranslationCase::unreachable:
        return ZMixer{1, t.alpha0, t.beta0, child0, child1};
    case TranslationCase::degenerate:
    case TranslationCase::mixer:
        return ZMixer{t.block, t.alpha0, t.beta0, child0, child1};
    case TranslationCase::znode:
        return ZNode{t.block, t.alpha0, t.beta0, child0, child1};
    }
    throw ConsistencyError("unknown translation case");
}

namespace {

// Masses keyed by (z index << n) | known mask.
using SparseLaw = std::map<std::uint64_t, Rational>;

void propagate_sparse(const PNode& node, std::size_t n, const SparseLaw& in, SparseLaw& out0, SparseLaw& out1) {
    const Rational one(1);
    const std::uint64_t low = (std::uint64_t{1} << n) - 1;
    for (const auto& [key, m] : in) {
        if (m.is_zero())
            continue;
        const std::uint64_t z = key >> n;
        const std::uint64_t mask = key & low;
        if (const auto* q = std::get_if<ZNode>(&node)) {
            const std::uint64_t bit = std::uint64_t{1} << (q->index - 1);
            const bool zi = (z >> (n - q->index)) & 1u;
            auto& answer = zi ? out1 : out0;
            if (mask & bit) {
                answer[key] += m;
                continue;
            }
            answer[(z << n) | mask | bit] += m * q->alpha;
            const Rational rest = m * (one - q->alpha);
            out1[key] += rest * q->beta;
            out0[key] += rest * (one - q->beta);
        } else if (const auto* mx = std::get_if<ZMixer>(&node)) {
            const std::uint64_t bit = std::uint64_t{1} << (mx->index - 1);
            const Rational& p1 = (mask & bit) ? mx->alpha : mx->beta;
            out1[key] += m * p1;
            out0[key] += m * (one - p1);
        } else {
            throw ConsistencyError("transformer emitted an unexpected node kind");
        }
    }
}

} // namespace

TransformResult transform_protocol(const XTree& p, const PromiseFunction& g, const Distribution& mu_g) {
    const std::size_t n = p.n(), m = p.m();
    if (g.m() != m || mu_g.length() != m)
        throw InvalidInput("g, mu_g and the protocol disagree on the block length");
    if (n > PolarisedTree::kMaxIndices)
        throw InvalidInput("at most " + std::to_string(PolarisedTree::kMaxIndices) + " blocks are supported");
    require_nontrivial(mu_g, g);

    const Distribution internal = lift_distribution(Distribution::uniform(n), mu_g, g);
    std::vector<NodeEvidence> evidence(p.size());
    for (NodeId v = 0; v < p.size(); ++v)
        if (const auto* q = std::get_if<XQuery>(&p.node(v))) {
            evidence[v].vertex = v;
            evidence[v].block = q->block;
        }

    std::vector<NodeId> visited;
    for (const auto& [x, w] : internal.entries()) {
        visited.clear();
        p.walk(x, &visited);
        const Bitstring z = *apply_blocks(g, x);
        for (NodeId v : visited) {
            const auto* q = std::get_if<XQuery>(&p.node(v));
            if (!q)
                continue;
            NodeEvidence& e = evidence[v];
            const bool zi = z.at(q->block);
            const int b = x.at((q->block - 1) * m + q->bit) ? 1 : 0;
            e.reach += w;
            e.edge[b] += w;
            if (zi) {
                e.reach_z1 += w;
                e.edge_z1[b] += w;
            }
        }
    }

    std::vector<SparseLaw> inflow(p.size());
    const Rational start = Rational(1) / pow(Rational(2), static_cast<unsigned>(n));
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k)
        inflow[p.root()][k << n] = start;

    std::vector<PNode> nodes(p.size(), ZLeaf{});
    std::vector<NodeTranslation> ledger;
    for (NodeId v : p.top_down()) {
        if (const auto* leaf = std::get_if<XLeaf>(&p.node(v))) {
            nodes[v] = ZLeaf{leaf->answer};
            continue;
        }
        const auto& q = std::get<XQuery>(p.node(v));
        NodeEvidence& e = evidence[v];
        const std::uint64_t bit = std::uint64_t{1} << (q.block - 1);
        for (const auto& [key, mass] : inflow[v]) {
            const std::uint64_t z = key >> n;
            const bool zi = (z >> (n - q.block)) & 1u;
            e.image_reach += mass;
            if (key & bit)
                (zi ? e.known1 : e.known0) += mass;
            else if (zi)
                e.unknown_z1 += mass;
        }
        NodeTranslation t = analyze_node(e);
        const NodeId lt = t.a0 == 0 ? q.child0 : q.child1;
        const NodeId gt = t.a0 == 0 ? q.child1 : q.child0;
        nodes[v] = translate_node(t, lt, gt);
        propagate_sparse(nodes[v], n, inflow[v], inflow[lt], inflow[gt]);
        inflow[v].clear();
        ledger.push_back(std::move(t));
    }

    IsomorphismMap iso;
    iso.x_to_z.resize(p.size());
    for (NodeId v = 0; v < p.size(); ++v)
        iso.x_to_z[v] = v;
    return {PolarisedTree(n, std::move(nodes), p.root()), std::move(iso), std::move(ledger)};
}

} // namespace qcomp
