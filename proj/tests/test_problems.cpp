#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcomp/error.hpp"
#include "support.hpp"

using namespace qtest;

TEST_CASE("rational arithmetic stays exact and reduced") {
    CHECK(q(2, 4) == q(1, 2));
    CHECK((q(1, 3) + q(1, 6)).str() == "1/2");
    CHECK(q(-3, -6).str() == "1/2");
    CHECK(Rational::parse("-7/21") == q(-1, 3));
    CHECK(Rational::parse("5").str() == "5");
    CHECK(binomial(5, 2) == q(10));
    CHECK(pow(q(3, 4), 3) == q(27, 64));
    CHECK_THROWS_AS(q(1) / q(0), ZeroProbabilityEvent);
    CHECK_THROWS_AS(Rational::parse("1/x"), ParseError);
    CHECK_THROWS_AS(Rational::parse("1/0"), Error);
}

TEST_CASE("bitstring indexing is lexicographic and 1-based") {
    const Bitstring b = bits("0110");
    CHECK(b.index() == 6);
    CHECK(Bitstring::from_index(6, 4) == b);
    CHECK(b.at(2));
    CHECK_FALSE(b.at(1));
    CHECK(b.block(2, 2) == bits("10"));
    CHECK(b.weight() == 2);
    CHECK(concat({bits("01"), bits("1")}) == bits("011"));
    CHECK((bits("0110") ^ bits("0011")) == bits("0101"));
}

TEST_CASE("composition membership") {
    const PromiseFunction first(2, {GValue::zero, GValue::zero, GValue::one, GValue::one});
    const Relation id = Relation::identity_bit();
    CHECK(compose_membership(id, first, bits("10"), "1"));
    CHECK_FALSE(compose_membership(id, first, bits("10"), "0"));

    const PromiseFunction partial(2, {GValue::zero, GValue::star, GValue::one, GValue::one});
    CHECK(compose_membership(id, partial, bits("01"), "0"));
    CHECK(compose_membership(id, partial, bits("01"), "1"));
    CHECK_FALSE(apply_blocks(partial, bits("01")).has_value());
}

TEST_CASE("relation with an empty answer set rejects everything and warns") {
    const Relation f = Relation::from_callable(1, {"0", "1"}, [](const Bitstring& z) {
        return z.at(1) ? std::set<std::string>{"1"} : std::set<std::string>{};
    });
    CHECK_FALSE(f.accepts(bits("0"), "0"));
    CHECK_FALSE(f.accepts(bits("0"), "1"));
    CHECK(f.warnings().size() == 1);
}

TEST_CASE("conditional block laws") {
    const auto g = identity_g();
    const auto mu0 = conditional_on_value(Distribution::uniform(1), g, false);
    CHECK(mu0 == Distribution::point(bits("0")));
    CHECK(probability_of_value(Distribution::uniform(2), or_g(), true) == q(3, 4));
    const auto mu1 = conditional_on_value(Distribution::uniform(2), or_g(), true);
    CHECK(mu1.probability(bits("01")) == q(1, 3));
    CHECK(mu1.probability(bits("00")) == q(0));
}

TEST_CASE("lifting ν through μ_g") {
    const auto g = identity_g();
    CHECK(lift_distribution(Distribution::uniform(1), Distribution::uniform(1), g) == Distribution::uniform(1));

    // OR on 2 bits, z = 10: block 1 uniform on {01,10,11}, block 2 fixed 00.
    const auto lifted = lift_distribution(bits("10"), Distribution::uniform(2), or_g());
    CHECK(lifted.support_size() == 3);
    CHECK(lifted.probability(bits("0100")) == q(1, 3));

    Rng rng(7);
    for (int k = 0; k < 30; ++k) {
        const PromiseFunction gg = random_promise_function(rng, 2);
        const Distribution mu_g = random_block_distribution(rng, gg);
        const Distribution nu = random_distribution(rng, 2);
        const Distribution lifted_nu = lift_distribution(nu, mu_g, gg);
        for (std::uint64_t x = 0; x < 16; ++x) {
            const Bitstring xb = Bitstring::from_index(x, 4);
            Rational expect(0);
            for (const auto& e : nu.entries())
                expect += e.weight * lifted_weight(e.bits, mu_g, gg, xb);
            CHECK(lifted_nu.probability(xb) == expect);
        }
    }
}

TEST_CASE("balanced mixture") {
    const auto g = identity_g();
    const Distribution skew(std::vector<Distribution::Entry>{{bits("0"), q(1, 5)}, {bits("1"), q(4, 5)}});
    CHECK(balanced_mixture(skew, g) == Distribution::uniform(1));
    CHECK(is_balanced(Distribution::uniform(1), g));
    CHECK_FALSE(is_balanced(skew, g));
    CHECK_FALSE(is_balanced(Distribution::uniform(2), or_g()));
    CHECK(probability_of_value(balanced_mixture(Distribution::uniform(2), or_g()), or_g(), true) == q(1, 2));
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(Distribution(std::vector<Distribution::Entry>{{bits("0"), q(1, 3)}}), InvalidInput);
    CHECK_THROWS_AS(Distribution(std::vector<Distribution::Entry>{{bits("0"), q(1, 2)}, {bits("0"), q(1, 2)}}),
                    InvalidInput);
    const auto norm = Distribution::normalized({{bits("1"), q(2)}, {bits("0"), q(1)}, {bits("1"), q(1)}});
    CHECK(norm.probability(bits("1")) == q(3, 4));
    CHECK(norm.entries().front().bits == bits("0"));
}

TEST_CASE("nontriviality of μ_g") {
    const PromiseFunction partial(1, {GValue::zero, GValue::star});
    CHECK_THROWS_AS(require_nontrivial(Distribution::uniform(1), partial), InvalidInput);
    CHECK_THROWS_AS(require_nontrivial(Distribution::point(bits("0")), identity_g()), InvalidInput);
    CHECK_NOTHROW(require_nontrivial(Distribution::uniform(1), identity_g()));
}
