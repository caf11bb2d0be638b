#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcomp/restrict.hpp"
#include "support.hpp"

using namespace qtest;

namespace {

/// x with block i replaced by y.
Bitstring substitute(const Bitstring& x, std::size_t i, std::size_t m, const Bitstring& y) {
    Bitstring out = x;
    for (std::size_t j = 1; j <= m; ++j)
        out.set((i - 1) * m + j, y.at(j));
    return out;
}

std::size_t block_queries_on(const XTree& p, const Bitstring& x, std::size_t block) {
    std::size_t c = 0;
    for (NodeId v = p.root(); const auto* qn = std::get_if<XQuery>(&p.node(v));) {
        c += qn->block == block;
        v = x.bits()[(qn->block - 1) * p.m() + qn->bit - 1] ? qn->child1 : qn->child0;
    }
    return c;
}

Distribution balanced_block(Rng& rng, PromiseFunction& g) {
    g = random_promise_function(rng, g.m());
    return balanced_mixture(random_block_distribution(rng, g), g);
}

} // namespace

TEST_CASE("restriction matches the substitution walk") {
    Rng rng(21);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 1 + k % 3, m = 1 + (k / 3) % 3;
        const auto in = random_instance(rng, n, m, 4);
        const auto& p = *in.protocol;
        const auto stats = x_leaf_stats(p, in.g, in.mu_g, Distribution::uniform(n));
        const Bitstring x = Bitstring::from_index(rng() % (std::uint64_t{1} << (n * m)), n * m);
        for (std::size_t i = 1; i <= n; ++i) {
            const XTree r = restrict_protocol(p, i, x, stats);
            CHECK(r.n() == 1);
            CHECK(r.m() == m);
            for (std::uint64_t yi = 0; yi < (std::uint64_t{1} << m); ++yi) {
                const Bitstring y = Bitstring::from_index(yi, m);
                const Bitstring full = substitute(x, i, m, y);
                const NodeId leaf = walk_raw(p, full);
                const std::string want = std::to_string(stats.lambda[leaf][i - 1]);
                CHECK(std::get<XLeaf>(r.node(walk_raw(r, y))).answer == want);
                CHECK(depth_raw(r, y) == block_queries_on(p, full, i));
            }
        }
    }
}

TEST_CASE("restriction of a protocol reading only other blocks is a leaf") {
    const XTree p(2, 1, {XQuery{2, 1, 1, 2}, XLeaf{"0"}, XLeaf{"1"}}, 0);
    const auto stats = x_leaf_stats(p, identity_g(), Distribution::uniform(1), Distribution::uniform(2));
    const XTree r = restrict_protocol(p, 1, bits("01"), stats);
    CHECK(r.size() == 1);
    CHECK(r.is_leaf(r.root()));
}

TEST_CASE("trimming thresholds") {
    const auto g = identity_g();
    SUBCASE("skewed root is replaced") {
        const Distribution skew(std::vector<Distribution::Entry>{{bits("0"), q(4, 5)}, {bits("1"), q(1, 5)}});
        const auto t = trim_protocol(read_first_bit(1), skew, g);
        CHECK(t.tree.size() == 1);
        CHECK(std::get<XLeaf>(t.tree.node(t.tree.root())).answer == "0");
        CHECK_FALSE(t.warnings.empty());
    }
    SUBCASE("balanced root survives and children are already leaves") {
        const auto t = trim_protocol(read_first_bit(1), Distribution::uniform(1), g);
        CHECK(t.tree == read_first_bit(1));
        CHECK(t.warnings.empty());
    }
    SUBCASE("exactly three quarters is kept") {
        const Distribution edge(std::vector<Distribution::Entry>{{bits("0"), q(3, 4)}, {bits("1"), q(1, 4)}});
        const auto t = trim_protocol(read_first_bit(1), edge, g);
        CHECK(t.tree.size() == 3);
    }
}

TEST_CASE("block accuracy and cost by enumeration") {
    Rng rng(22);
    for (int k = 0; k < 30; ++k) {
        PromiseFunction g(2, std::vector<GValue>(4, GValue::zero));
        const Distribution mu = balanced_block(rng, g);
        const XTree t = random_xtree(rng, 1, 2, 2, {"0", "1"});
        Rational acc(0), cost(0);
        for (const auto& e : mu.entries()) {
            const std::string& a = std::get<XLeaf>(t.node(walk_raw(t, e.bits))).answer;
            if (a == std::string(1, to_char(g(e.bits))))
                acc += e.weight;
            cost += e.weight * Rational(static_cast<std::int64_t>(depth_raw(t, e.bits)));
        }
        CHECK(block_accuracy(t, g, mu) == acc);
        CHECK(block_expected_queries(t, mu) == cost);
    }
}

TEST_CASE("restriction inequalities hold for balanced block laws") {
    Rng rng(23);
    std::size_t rows = 0, trimmed = 0;
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 1 + k % 3, m = 1 + (k / 3) % 3;
        auto in = random_instance(rng, n, m, 4);
        in.mu_g = balanced_mixture(in.mu_g, in.g);
        const Distribution mu_f = k % 2 ? Distribution::uniform(n) : random_full_support(rng, n);
        const auto stats = x_leaf_stats(*in.protocol, in.g, in.mu_g, mu_f);
        const Distribution mu = lift_distribution(mu_f, in.mu_g, in.g);
        for (int s = 0; s < 5; ++s) {
            const Bitstring x = mu.entries()[rng() % mu.support_size()].bits;
            for (std::size_t i = 1; i <= n; ++i) {
                const auto row = analyze_restriction(*in.protocol, in.g, in.mu_g, mu_f, stats, i, x);
                ++rows;
                trimmed += row.trimmed_cost != row.cost;
                CHECK(row.accuracy_bound);
                CHECK(row.trimmed_accuracy_bound);
                CHECK(row.trimmed_cost_bound);
                CHECK(row.trim_no_increase);
                CHECK(row.trimmed_accuracy >= q(1, 2) + row.delta_x / q(4));
                CHECK(row.trimmed_cost <= q(4) * row.cost_x);
                CHECK(row.cost_x == conditional_block_queries(*in.protocol, mu, i, x));
            }
        }
    }
    CHECK(rows > 0);
    CHECK(trimmed > 0);
}
