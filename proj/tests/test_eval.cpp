#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcomp/error.hpp"
#include <functional>

#include "support.hpp"

using namespace qtest;

namespace {

PolarisedTree znode_tree(Rational alpha, Rational beta) {
    return PolarisedTree(1, {ZNode{1, alpha, beta, 1, 2}, ZLeaf{"0"}, ZLeaf{"1"}}, 0);
}

/// Random polarised tree built as a top-down translation image so that it is
/// polarised; parameters are random.
PolarisedTree random_polarised(Rng& rng, std::size_t n, std::size_t depth) {
    std::vector<PNode> nodes;
    std::function<NodeId(std::size_t)> build = [&](std::size_t d) -> NodeId {
        const NodeId id = nodes.size();
        nodes.push_back(ZLeaf{std::string(1, static_cast<char>('0' + rng() % 2))});
        if (d == 0 || rng() % 4 == 0)
            return id;
        const auto r = [&] { return Rational(static_cast<std::int64_t>(rng() % 5), 4); };
        const std::size_t i = 1 + rng() % n;
        const int kind = static_cast<int>(rng() % 3);
        const Rational a = r(), b = r();
        const NodeId c0 = build(d - 1);
        const NodeId c1 = build(d - 1);
        if (kind == 0)
            nodes[id] = ZNode{i, a, b, c0, c1};
        else if (kind == 1)
            nodes[id] = ZMixer{i, a, b, c0, c1};
        else
            nodes[id] = RandFork{a, c0, c1};
        return id;
    };
    build(depth);
    return PolarisedTree(n, std::move(nodes), 0);
}

} // namespace

TEST_CASE("x-protocol evaluation on trivial protocols") {
    const auto in = identity_instance();
    const auto leaf = XTree::leaf(1, 1, "0");
    auto r = evaluate_x_protocol(leaf, *in.f, in.g, Distribution::uniform(1));
    CHECK(r.error == q(1, 2));
    CHECK(r.expected_queries == q(0));

    r = evaluate_x_protocol(*in.protocol, *in.f, in.g, Distribution::uniform(1));
    CHECK(r.error == q(0));
    CHECK(r.expected_queries == q(1));
    CHECK(r.block_queries == std::vector<Rational>{q(1)});
}

TEST_CASE("x-protocol evaluation matches input enumeration") {
    Rng rng(11);
    for (int k = 0; k < 40; ++k) {
        const auto in = random_instance(rng, 2, 2, 3);
        const Distribution nu = random_distribution(rng, 2);
        const Distribution mu = lift_distribution(nu, in.mu_g, in.g);
        const auto r = evaluate_x_protocol(*in.protocol, *in.f, in.g, mu);
        Rational err(0), depth(0);
        for (const auto& e : mu.entries()) {
            if (!compose_membership(*in.f, in.g, e.bits, std::get<XLeaf>(in.protocol->node(walk_raw(*in.protocol, e.bits))).answer))
                err += e.weight;
            depth += e.weight * Rational(static_cast<std::int64_t>(depth_raw(*in.protocol, e.bits)));
        }
        CHECK(r.error == err);
        CHECK(r.expected_queries == depth);
        CHECK(r.error == brute_x_error(*in.protocol, *in.f, in.g, in.mu_g, nu));
        Rational blocks(0);
        for (const auto& d : r.block_queries)
            blocks += d;
        CHECK(blocks == r.expected_queries);
    }
}

TEST_CASE("conditional block queries by enumeration") {
    Rng rng(12);
    for (int k = 0; k < 20; ++k) {
        const auto in = random_instance(rng, 2, 2, 4);
        const Distribution mu = lift_distribution(Distribution::uniform(2), in.mu_g, in.g);
        const Bitstring x = mu.entries()[rng() % mu.support_size()].bits;
        for (std::size_t i = 1; i <= 2; ++i) {
            Rational mass(0), queries(0);
            for (const auto& e : mu.entries()) {
                const std::size_t other = 3 - i;
                if (e.bits.block(other, 2) != x.block(other, 2))
                    continue;
                mass += e.weight;
                std::size_t count = 0;
                for (NodeId v = in.protocol->root(); const auto* qn = std::get_if<XQuery>(&in.protocol->node(v));) {
                    count += qn->block == i;
                    v = e.bits.bits()[(qn->block - 1) * 2 + qn->bit - 1] ? qn->child1 : qn->child0;
                }
                queries += e.weight * Rational(static_cast<std::int64_t>(count));
            }
            CHECK(conditional_block_queries(*in.protocol, mu, i, x) == queries / mass);
        }
    }
}

TEST_CASE("polarised evaluation on trivial trees") {
    const Relation id = Relation::identity_bit();
    auto r = evaluate_polarised(znode_tree(q(1), q(0)), id, Distribution::uniform(1));
    CHECK(r.error == q(0));
    CHECK(r.expected_queries == q(1));
    r = evaluate_polarised(PolarisedTree::leaf(1, "1"), id, Distribution::uniform(1));
    CHECK(r.error == q(1, 2));
    CHECK(r.expected_queries == q(0));
    CHECK_THROWS_AS(evaluate_polarised(PolarisedTree::leaf(1, std::nullopt), id, Distribution::uniform(1)),
                    InvalidInput);
}

TEST_CASE("state propagation matches path enumeration") {
    Rng rng(13);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 1 + k % 3;
        const PolarisedTree t = random_polarised(rng, n, 4);
        const Relation f = random_relation(rng, n, {"0", "1"});
        const Distribution nu = random_distribution(rng, n);
        CHECK(evaluate_polarised(t, f, nu).error == path_error(t, f, nu));
        const auto laws = z_laws(t);
        CHECK(laws.size() == (std::size_t{1} << n));
        for (std::uint64_t zi = 0; zi < laws.size(); ++zi) {
            const Bitstring z = Bitstring::from_index(zi, n);
            const auto paths = enumerate_paths(t, z);
            std::vector<Rational> reach(t.size());
            Rational queries(0);
            for (const auto& p : paths) {
                for (const auto& s : p.steps) {
                    reach[s.node] += p.weight;
                    if (s.queried)
                        queries += p.weight;
                }
                reach[p.leaf] += p.weight;
            }
            for (NodeId v = 0; v < t.size(); ++v)
                CHECK(laws[zi].reach(v) == reach[v]);
            CHECK(laws[zi].expected_queries == queries);
        }
    }
}

TEST_CASE("parallel and serial state propagation agree") {
    Rng rng(14);
    for (int k = 0; k < 20; ++k) {
        const PolarisedTree t = random_polarised(rng, 3, 5);
        const auto a = z_laws(t);
        const auto b = reference::z_laws(t);
        REQUIRE(a.size() == b.size());
        for (std::size_t z = 0; z < a.size(); ++z) {
            CHECK(a[z].mass == b[z].mass);
            CHECK(a[z].index_queries == b[z].index_queries);
        }
    }
}

TEST_CASE("x-leaf predictors") {
    SUBCASE("OR gadget") {
        const auto in = or_instance();
        const auto s = x_leaf_stats(*in.protocol, in.g, in.mu_g, Distribution::uniform(1));
        CHECK(s.delta[2][0] == q(1, 2));
        CHECK(s.delta[1][0] == q(1, 4));
        CHECK(s.lambda[2][0] == 1);
        CHECK(s.lambda[1][0] == 0);
    }
    SUBCASE("unread block has no advantage") {
        const XTree p(2, 1, {XQuery{1, 1, 1, 2}, XLeaf{"0"}, XLeaf{"1"}}, 0);
        const auto s = x_leaf_stats(p, identity_g(), Distribution::uniform(1), Distribution::uniform(2));
        CHECK(s.tree_delta[1] == q(0));
        CHECK(s.tree_delta[0] == q(1, 2));
    }
    SUBCASE("ties go to zero") {
        const auto s = x_leaf_stats(XTree::leaf(1, 1, "0"), identity_g(), Distribution::uniform(1),
                                    Distribution::uniform(1));
        CHECK(s.lambda[0][0] == 0);
        CHECK(s.delta[0][0] == q(0));
    }
}

TEST_CASE("z-leaf predictors") {
    const Distribution u = Distribution::uniform(1);
    auto s = z_leaf_stats(PolarisedTree::leaf(1, "0"), u);
    CHECK(s.q[0][0] == q(0));
    CHECK(s.tree_delta[0] == q(0));

    s = z_leaf_stats(znode_tree(q(1), q(0)), u);
    CHECK(s.q[1][0] == q(1));
    CHECK(s.q[2][0] == q(1));
    CHECK(s.tree_delta[0] == q(1, 2));

    s = z_leaf_stats(znode_tree(q(1, 2), q(1, 2)), u);
    CHECK(s.q[1][0] == q(1, 2));
    CHECK(s.q[2][0] == q(1, 2));
    CHECK(s.tree_delta[0] == s.half_mean_q[0]);

    const PolarisedTree shared(1, {ZNode{1, q(1), q(0), 1, 1}, ZLeaf{"0"}}, 0);
    CHECK_THROWS_AS(z_leaf_stats(shared, u), InvalidInput);
}

TEST_CASE("polarity checker") {
    const PolarisedTree shared(1, {ZNode{1, q(1), q(0), 1, 1}, ZLeaf{"0"}}, 0);
    const auto bad = check_polarity(shared);
    REQUIRE_FALSE(bad.polarised());
    CHECK(bad.violation->vertex == 1);
    CHECK(bad.violation->index == 1);
    CHECK(bad.violation->knows_zero != bad.violation->knows_one);

    const PolarisedTree mixers(2, {ZMixer{1, q(1, 2), q(1, 3), 1, 2}, ZMixer{2, q(1), q(0), 3, 3}, ZLeaf{"a"},
                                   ZLeaf{"b"}},
                               0);
    CHECK(check_polarity(mixers).polarised());
    CHECK(check_polarity(znode_tree(q(1, 2), q(1, 2))).polarised());
}

TEST_CASE("block independence") {
    const auto in = or_instance();
    const PromiseFunction g = or_g();
    const XTree p(2, 2, {XQuery{1, 1, 1, 2}, XQuery{2, 2, 3, 4}, XLeaf{"0"}, XLeaf{"0"}, XLeaf{"1"}}, 0);

    SUBCASE("product and correlated μ_f lifted through μ_g pass") {
        const Distribution corr(std::vector<Distribution::Entry>{{bits("00"), q(1, 2)}, {bits("11"), q(1, 2)}});
        for (const auto& mu_f : {Distribution::uniform(2), corr}) {
            const Distribution mu = lift_distribution(mu_f, Distribution::uniform(2), g);
            for (NodeId v = 0; v < p.size(); ++v)
                for (std::size_t i = 1; i <= 2; ++i)
                    CHECK(check_block_independence(p, v, g, mu, i).pass);
        }
    }
    SUBCASE("correlated bits across blocks fail") {
        // X_{1,2} = X_{2,1}: not of the lifted form.
        std::vector<Distribution::Entry> e;
        for (std::uint64_t k = 0; k < 16; ++k) {
            const Bitstring x = Bitstring::from_index(k, 4);
            if (x.at(2) == x.at(3))
                e.push_back({x, q(1)});
        }
        const Distribution mu = Distribution::normalized(e);
        bool any_fail = false;
        for (NodeId v = 0; v < p.size(); ++v)
            any_fail = any_fail || !check_block_independence(p, v, g, mu, 1).pass;
        CHECK(any_fail);
        CHECK_FALSE(check_block_independence(p, 0, g, mu, 1).pass);
    }
}

TEST_CASE("query locality on a chain of z-nodes") {
    const Rational a1 = q(1, 3), b1 = q(1, 4), a2 = q(1, 2), b2 = q(2, 5);
    // root -> (edge 0) second node -> leaves A (3), B (4); root edge 1 -> C (2).
    const PolarisedTree t(1, {ZNode{1, a1, b1, 1, 2}, ZNode{1, a2, b2, 3, 4}, ZLeaf{"c"}, ZLeaf{"a"}, ZLeaf{"b"}},
                          0);
    const auto r = check_query_locality(t, 3);
    CHECK(r.pass);
    const Rational one(1);
    const Rational stay = (one - a1) * (one - b1);
    const Rational reach_a = a1 + stay * (a2 + (one - a2) * (one - b2));
    const Rational query_a = a1 + stay * a2;
    REQUIRE(r.value[0][0].has_value());
    CHECK(*r.value[0][0] == query_a / reach_a);
    REQUIRE(r.value[0][1].has_value());
    CHECK(*r.value[0][1] == q(0));

    // Single node: per-value formulas from the node parameters.
    const Rational a = q(2, 7), b = q(3, 5);
    const auto single = znode_tree(a, b);
    const auto r0 = check_query_locality(single, 1);
    const auto r1 = check_query_locality(single, 2);
    CHECK(*r0.value[0][0] == a / (a + (one - a) * (one - b)));
    CHECK(*r1.value[0][1] == a / (a + (one - a) * b));
}

TEST_CASE("query locality detects dependence on another index") {
    // Whether Z_1 is queried depends on Z_2, which was read first.
    const PolarisedTree t(2,
                          {ZNode{2, q(1), q(0), 1, 2}, ZNode{1, q(1), q(0), 3, 3}, ZMixer{1, q(0), q(0), 3, 3},
                           ZLeaf{"x"}},
                          0);
    const auto r = check_query_locality(t, 3);
    CHECK_FALSE(r.pass);
    CHECK(r.index == 1);
    CHECK(r.z_first.has_value());
}

TEST_CASE("conditional z law at a vertex") {
    const auto in = or_instance();
    const ProtocolReport r =
        evaluate_x_protocol(*in.protocol, *in.f, in.g, lift_distribution(Distribution::uniform(1), in.mu_g, in.g));
    const Distribution at0 = conditional_z_law(r, 1);
    CHECK(at0.probability(bits("1")) == q(1, 4));
    const ProtocolReport r2 = evaluate_x_protocol(read_first_bit(2), *in.f, in.g,
                                                  Distribution(std::vector<Distribution::Entry>{{bits("01"), q(1)}}));
    CHECK_THROWS_AS(conditional_z_law(r2, 2), ZeroProbabilityEvent);
}
