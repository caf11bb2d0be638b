#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "qcomp/error.hpp"
#include "qcomp/transform.hpp"
#include "qcomp/verify.hpp"
#include "support.hpp"

using namespace qtest;

TEST_CASE("identity instance ledger") {
    const auto in = identity_instance();
    const auto r = transform_protocol(*in.protocol, in.g, in.mu_g);
    REQUIRE(r.ledger.size() == 1);
    const auto& t = r.ledger[0];
    CHECK(t.p_in == q(1, 2));
    CHECK(t.a0 == 0);
    CHECK(t.p_lt == q(0));
    CHECK(t.p_gt == q(1));
    CHECK(t.tau_lt == q(1, 2));
    CHECK(t.q_in == q(0));
    CHECK(t.p_star == q(1, 2));
    CHECK(t.kind == TranslationCase::znode);
    CHECK(t.alpha_prime == q(1));
    CHECK(t.gamma2 == q(1, 2));
    CHECK(t.gamma3 == q(1));
    CHECK(t.alpha0 == q(1));
    CHECK(t.beta0 == q(0));
    const PolarisedTree expect(1, {ZNode{1, q(1), q(0), 1, 2}, ZLeaf{"0"}, ZLeaf{"1"}}, 0);
    CHECK(r.tree == expect);
}

TEST_CASE("OR gadget ledger and semantics") {
    const auto in = or_instance();
    const auto r = transform_protocol(*in.protocol, in.g, in.mu_g);
    REQUIRE(r.ledger.size() == 1);
    const auto& t = r.ledger[0];
    CHECK(t.p_in == q(1, 2));
    CHECK(t.a0 == 0);
    CHECK(t.p_lt == q(1, 4));
    CHECK(t.p_gt == q(1));
    CHECK(t.tau_lt == q(2, 3));
    CHECK(t.q_in == q(0));
    CHECK(t.p_star == q(1, 2));
    CHECK(t.kind == TranslationCase::znode);
    CHECK(t.alpha_prime == q(2, 3));
    CHECK(t.gamma2 == q(2, 3));
    CHECK(t.gamma3 == q(1));
    CHECK(t.alpha0 == q(2, 3));
    CHECK(t.beta0 == q(0));

    // Under uniform Z: P[answer 0] = τ_<, P[Z=1 | answer 0] = p_<, P[Z=1 | answer 1] = p_>.
    Rational a0(0), a0z1(0), a1(0), a1z1(0);
    for (const char* z : {"0", "1"})
        for (const auto& [leaf, w] : path_leaf_law(r.tree, bits(z))) {
            const Rational half_w = w * q(1, 2);
            (leaf == 1 ? a0 : a1) += half_w;
            if (z[0] == '1')
                (leaf == 1 ? a0z1 : a1z1) += half_w;
        }
    CHECK(a0 == q(2, 3));
    CHECK(a0z1 / a0 == q(1, 4));
    CHECK(a1z1 / a1 == q(1));
}

TEST_CASE("irrelevant bit is degenerate") {
    const PromiseFunction first(2, {GValue::zero, GValue::zero, GValue::one, GValue::one});
    const XTree p(1, 2, {XQuery{1, 2, 1, 2}, XLeaf{"0"}, XLeaf{"1"}}, 0);
    const auto r = transform_protocol(p, first, Distribution::uniform(2));
    REQUIRE(r.ledger.size() == 1);
    CHECK(r.ledger[0].kind == TranslationCase::degenerate);
    CHECK(r.ledger[0].p_lt == q(1, 2));
    CHECK(r.ledger[0].p_gt == q(1, 2));
    CHECK(r.ledger[0].tau_gt == q(1, 2));
    CHECK(std::get<ZMixer>(r.tree.node(0)) == ZMixer{1, q(1, 2), q(1, 2), 1, 2});
}

TEST_CASE("single leaf translates to a single leaf") {
    const auto r = transform_protocol(XTree::leaf(2, 1, "7"), identity_g(), Distribution::uniform(1));
    CHECK(r.tree == PolarisedTree::leaf(2, "7"));
    CHECK(r.ledger.empty());
}

TEST_CASE("guard failures raise consistency errors") {
    NodeEvidence e;
    e.block = 1;
    e.reach = q(1, 2);
    e.reach_z1 = q(1, 4);
    e.edge = {q(1, 4), q(1, 4)};
    e.edge_z1 = {q(0), q(1, 4)};
    e.image_reach = q(1, 3);
    CHECK_THROWS_AS(analyze_node(e), ConsistencyError);
    e.image_reach = q(1, 2);
    e.unknown_z1 = q(1, 4);
    const auto t = analyze_node(e);
    CHECK(t.p_in == q(1, 2));
    e.known0 = q(1, 8);
    e.known1 = q(1, 8);
    CHECK_THROWS_AS(analyze_node(e), ConsistencyError);
}

TEST_CASE("unreachable vertices become neutral mixers") {
    // Vertex 3 re-reads X_{1,1} on the 0 side after it was read as 1.
    const XTree p(1, 1,
                  {XQuery{1, 1, 1, 2}, XLeaf{"0"}, XQuery{1, 1, 3, 4}, XQuery{1, 1, 5, 6}, XLeaf{"1"}, XLeaf{"0"},
                   XLeaf{"1"}},
                  0);
    const auto r = transform_protocol(p, identity_g(), Distribution::uniform(1));
    std::size_t unreachable = 0;
    for (const auto& t : r.ledger)
        if (t.kind == TranslationCase::unreachable) {
            ++unreachable;
            CHECK(t.vertex == 3);
            CHECK(std::get<ZMixer>(r.tree.node(3)) == ZMixer{1, q(1, 2), q(1, 2), 5, 6});
        }
    CHECK(unreachable == 1);
    const auto law = path_leaf_law(r.tree, bits("1"));
    CHECK(law.count(5) == 0);
    CHECK(law.count(6) == 0);
}

TEST_CASE("leaf laws survive translation on random instances") {
    std::set<std::string> seen;
    for (const auto& in : instance_corpus(101, 90)) {
        const auto& p = *in.protocol;
        const auto r = transform_protocol(p, in.g, in.mu_g);
        CHECK(check_polarity(r.tree).polarised());
        CHECK(r.tree.is_strict_tree());
        for (const auto& t : r.ledger)
            seen.insert(std::string(to_string(t.kind)) + (t.flip ? "F" : ""));

        for (std::uint64_t zi = 0; zi < (std::uint64_t{1} << p.n()); ++zi) {
            const Bitstring z = Bitstring::from_index(zi, p.n());
            const auto want = x_leaf_law(p, in.g, in.mu_g, z);
            auto got = path_leaf_law(r.tree, z);
            std::map<NodeId, Rational> pulled;
            for (const auto& [leaf, w] : got)
                pulled[r.isomorphism.z_to_x().at(leaf)] = w;
            CHECK(pulled == want);
        }
        const Distribution nu = Distribution::uniform(p.n());
        CHECK(path_error(r.tree, *in.f, nu) == brute_x_error(p, *in.f, in.g, in.mu_g, nu));
    }
    CHECK(seen.count("znode"));
    CHECK(seen.count("degenerate"));
    CHECK(seen.count("unreachable"));
}

TEST_CASE("translation is deterministic") {
    for (const auto& in : instance_corpus(5, 12)) {
        const auto a = transform_protocol(*in.protocol, in.g, in.mu_g);
        const auto b = transform_protocol(*in.protocol, in.g, in.mu_g);
        CHECK(a.tree == b.tree);
        CHECK(a.ledger == b.ledger);
    }
}
