#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>

#include "qcomp/error.hpp"
#include "qcomp/hardness.hpp"
#include "support.hpp"

using namespace qtest;

namespace {

std::uint64_t count_recursion(std::size_t d, std::size_t k) {
    if (d == 0 || k == 0)
        return 2;
    const std::uint64_t sub = count_recursion(d - 1, k - 1);
    return 2 + k * sub * sub;
}

/// min over trees with δ > 0 of d/δ², by walking the rebuilt trees.
std::optional<Rational> brute_score(const TreeFamily& family, const PromiseFunction& g, const Distribution& mu) {
    std::optional<Rational> best;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const XTree t = family.tree(k);
        Rational acc(0), d(0);
        for (const auto& e : mu.entries()) {
            const std::string& a = std::get<XLeaf>(t.node(walk_raw(t, e.bits))).answer;
            if (a == std::string(1, to_char(g(e.bits))))
                acc += e.weight;
            d += e.weight * Rational(static_cast<std::int64_t>(depth_raw(t, e.bits)));
        }
        const Rational delta = acc - q(1, 2);
        if (delta.sign() > 0) {
            const Rational s = d / (delta * delta);
            if (!best || s < *best)
                best = s;
        }
    }
    return best;
}

void weak_compositions(unsigned total, std::size_t parts, std::vector<unsigned>& cur,
                       std::vector<std::vector<unsigned>>& out) {
    if (parts == 0) {
        if (total == 0)
            out.push_back(cur);
        return;
    }
    for (unsigned k = 0; k <= total; ++k) {
        cur.push_back(k);
        weak_compositions(total - k, parts - 1, cur, out);
        cur.pop_back();
    }
}

} // namespace

TEST_CASE("family sizes follow the counting recursion") {
    CHECK(TreeFamily(1, 1).size() == 6);
    CHECK(TreeFamily(2, 0).size() == 2);
    for (std::size_t m = 1; m <= 3; ++m)
        for (std::size_t d = 0; d <= m; ++d) {
            CHECK(TreeFamily::count(m, d) == count_recursion(d, m));
            CHECK(TreeFamily(m, d).size() == count_recursion(d, m));
        }
    CHECK(TreeFamily(3, 3).size() == 16430);
    CHECK_THROWS_AS(TreeFamily(2, 3), InvalidInput);
}

TEST_CASE("family behaviour tables match the rebuilt trees") {
    const TreeFamily family(3, 2);
    for (std::size_t k = 0; k < family.size(); k += 7) {
        const XTree t = family.tree(k);
        for (std::uint64_t y = 0; y < 8; ++y) {
            const Bitstring yb = Bitstring::from_index(y, 3);
            CHECK(std::to_string(family.output(k, y)) == std::get<XLeaf>(t.node(walk_raw(t, yb))).answer);
            CHECK(family.queries(k, y) == depth_raw(t, yb));
        }
    }
}

TEST_CASE("identity scores four") {
    const TreeFamily family(1, 1);
    const auto c = hardness_score(Distribution::uniform(1), identity_g(), family);
    CHECK(c.score == q(4));
    CHECK(c.best.delta == q(1, 2));
    CHECK(c.best.d == q(1));
    CHECK(brute_score(family, identity_g(), Distribution::uniform(1)) == q(4));
}

TEST_CASE("parity under uniform") {
    const PromiseFunction parity(2, {GValue::zero, GValue::one, GValue::one, GValue::zero});
    const TreeFamily family(2, 2);
    const auto c = hardness_score(Distribution::uniform(2), parity, family);
    CHECK(c.score == *brute_score(family, parity, Distribution::uniform(2)));
    CHECK(c.score == q(8));
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto prof = tree_profile(family, k, parity, Distribution::uniform(2));
        bool reads_twice = false;
        for (std::uint64_t y = 0; y < 4; ++y)
            reads_twice = reads_twice || family.queries(k, y) == 2;
        if (!reads_twice)
            CHECK(prof.delta <= q(0));
    }
}

TEST_CASE("constant trees alone give no certificate") {
    const TreeFamily family(1, 0);
    CHECK_THROWS_AS(hardness_score(Distribution::uniform(1), identity_g(), family), InvalidInput);
}

TEST_CASE("fast and reference scoring agree") {
    Rng rng(31);
    for (int k = 0; k < 25; ++k) {
        const std::size_t m = 1 + k % 3;
        const PromiseFunction g = random_promise_function(rng, m);
        const Distribution mu = balanced_mixture(random_block_distribution(rng, g), g);
        const TreeFamily family(m, m);
        const auto brute = brute_score(family, g, mu);
        if (!brute) {
            CHECK_THROWS_AS(hardness_score(mu, g, family), InvalidInput);
            continue;
        }
        const auto a = hardness_score(mu, g, family);
        const auto b = reference::hardness_score(mu, g, family);
        CHECK(a.score == *brute);
        CHECK(a.score == b.score);
        CHECK(a.best.tree == b.best.tree);
    }
}

TEST_CASE("search on identity returns the uniform law") {
    const auto r = search_hardest(identity_g(), SearchOptions{});
    CHECK(r.best.score == q(4));
    CHECK(r.best.mu == Distribution::uniform(1));
    CHECK(is_balanced(r.best.mu, identity_g()));
}

TEST_CASE("search never falls below the balanced start") {
    const PromiseFunction first(2, {GValue::zero, GValue::zero, GValue::one, GValue::one});
    const auto r = search_hardest(first, SearchOptions{});
    CHECK(r.best.score >= r.start.score);
    CHECK(is_balanced(r.best.mu, first));
}

TEST_CASE("search matches an exhaustive grid sweep") {
    // Partial majority: 000, 001 -> 0; 011, 111 -> 1; rest outside the promise.
    std::vector<GValue> table(8, GValue::star);
    table[0] = table[1] = GValue::zero;
    table[3] = table[7] = GValue::one;
    const PromiseFunction g(3, table);
    const unsigned grid = 16;
    const auto r = search_hardest(g, SearchOptions{2000, grid, 0, 0});
    REQUIRE(r.exhaustive);

    const TreeFamily family(3, 3);
    const auto zeros = g.preimage(false), ones = g.preimage(true);
    std::vector<std::vector<unsigned>> left, right;
    std::vector<unsigned> cur;
    weak_compositions(grid, zeros.size(), cur, left);
    weak_compositions(grid, ones.size(), cur, right);
    CHECK(r.grid_points == left.size() * right.size());
    std::optional<Rational> sweep;
    for (const auto& a : left)
        for (const auto& b : right) {
            std::vector<Distribution::Entry> e;
            for (std::size_t k = 0; k < zeros.size(); ++k)
                if (a[k])
                    e.push_back({zeros[k], Rational(a[k], 2 * grid)});
            for (std::size_t k = 0; k < ones.size(); ++k)
                if (b[k])
                    e.push_back({ones[k], Rational(b[k], 2 * grid)});
            const auto s = brute_score(family, g, Distribution(e));
            if (s && (!sweep || *s > *sweep))
                sweep = s;
        }
    REQUIRE(sweep.has_value());
    const Rational expect = *sweep > r.start.score ? *sweep : r.start.score;
    CHECK(r.best.score == expect);
    CHECK(is_balanced(r.best.mu, g));
    CHECK(hardness_score(r.best.mu, g, family).score == r.best.score);
}

TEST_CASE("sampled search is seeded") {
    std::vector<GValue> table(8, GValue::zero);
    for (std::uint64_t y = 0; y < 8; ++y)
        table[y] = Bitstring::from_index(y, 3).weight() >= 2 ? GValue::one : GValue::zero;
    const PromiseFunction maj(3, table);
    const SearchOptions o{20, 8, 5, 2};
    const auto a = search_hardest(maj, o);
    const auto b = search_hardest(maj, o);
    CHECK_FALSE(a.exhaustive);
    CHECK(a.best.mu == b.best.mu);
    CHECK(a.best.score == b.best.score);
    CHECK(a.best.score >= a.start.score);
    CHECK(is_balanced(a.best.mu, maj));
}
