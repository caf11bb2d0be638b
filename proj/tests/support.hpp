#pragma once

// Shared fixtures and brute-force oracles. The oracles walk the raw node
// vectors and enumerate inputs directly; they never call the evaluator.

#include <map>
#include <string>
#include <vector>

#include "qcomp/eval.hpp"
#include "qcomp/generate.hpp"
#include "qcomp/instance.hpp"
#include "qcomp/problems.hpp"
#include "qcomp/trees.hpp"

namespace qtest {

using namespace qcomp;

inline Rational q(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

inline PromiseFunction identity_g() { return PromiseFunction(1, {GValue::zero, GValue::one}); }

inline PromiseFunction or_g() {
    return PromiseFunction(2, {GValue::zero, GValue::one, GValue::one, GValue::one});
}

/// Root reads X_{1,1}, leaves answer the bit read.
inline XTree read_first_bit(std::size_t m) {
    return XTree(1, m, {XQuery{1, 1, 1, 2}, XLeaf{"0"}, XLeaf{"1"}}, 0);
}

inline Instance identity_instance() {
    return Instance{identity_g(), Distribution::uniform(1), Relation::identity_bit(), read_first_bit(1),
                    std::nullopt, std::nullopt};
}

inline Instance or_instance() {
    return Instance{or_g(), Distribution::uniform(2), Relation::identity_bit(), read_first_bit(2), std::nullopt,
                    std::nullopt};
}

inline Bitstring bits(const char* s) { return Bitstring(std::string(s)); }

/// Leaf of P on x by following raw child pointers.
inline NodeId walk_raw(const XTree& p, const Bitstring& x) {
    NodeId v = p.root();
    while (const auto* qn = std::get_if<XQuery>(&p.node(v)))
        v = x.bits()[(qn->block - 1) * p.m() + (qn->bit - 1)] ? qn->child1 : qn->child0;
    return v;
}

/// Number of query vertices on the path to x.
inline std::size_t depth_raw(const XTree& p, const Bitstring& x) {
    std::size_t d = 0;
    for (NodeId v = p.root(); const auto* qn = std::get_if<XQuery>(&p.node(v)); ++d)
        v = x.bits()[(qn->block - 1) * p.m() + (qn->bit - 1)] ? qn->child1 : qn->child0;
    return d;
}

/// P[X = x] for X ~ z∘μ_g: product of per-block conditional weights, over
/// every x in {0,1}^{nm}.
inline Rational lifted_weight(const Bitstring& z, const Distribution& mu_g, const PromiseFunction& g,
                              const Bitstring& x) {
    const std::size_t m = g.m();
    Rational w(1);
    for (std::size_t i = 0; i < z.size(); ++i) {
        Rational side(0), here(0);
        const Bitstring xi = x.block(i + 1, m);
        for (const auto& e : mu_g.entries()) {
            const GValue v = g(e.bits);
            if (v == GValue::star || (v == GValue::one) != z.at(i + 1))
                continue;
            side += e.weight;
            if (e.bits == xi)
                here = e.weight;
        }
        if (here.is_zero())
            return Rational(0);
        w *= here / side;
    }
    return w;
}

/// Law of the leaf of P under X ~ z∘μ_g.
inline std::map<NodeId, Rational> x_leaf_law(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                             const Bitstring& z) {
    std::map<NodeId, Rational> law;
    const std::size_t len = p.n() * p.m();
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << len); ++k) {
        const Bitstring x = Bitstring::from_index(k, len);
        const Rational w = lifted_weight(z, mu_g, g, x);
        if (!w.is_zero())
            law[walk_raw(p, x)] += w;
    }
    return law;
}

/// Law of the leaf of P′ on z from explicit path enumeration.
inline std::map<NodeId, Rational> path_leaf_law(const PolarisedTree& tp, const Bitstring& z) {
    std::map<NodeId, Rational> law;
    for (const auto& path : enumerate_paths(tp, z))
        law[path.leaf] += path.weight;
    return law;
}

inline std::string leaf_answer(const PolarisedTree& tp, NodeId v) {
    return std::get<ZLeaf>(tp.node(v)).answer.value_or("");
}

/// Error of P′ under ν by path enumeration.
inline Rational path_error(const PolarisedTree& tp, const Relation& f, const Distribution& nu) {
    Rational err(0);
    for (const auto& e : nu.entries())
        for (const auto& path : enumerate_paths(tp, e.bits)) {
            const auto& leaf = std::get<ZLeaf>(tp.node(path.leaf));
            if (!leaf.answer || !f.accepts(e.bits, *leaf.answer))
                err += e.weight * path.weight;
        }
    return err;
}

/// Error of P for f∘gⁿ under ν∘μ_g by enumeration of z and x.
inline Rational brute_x_error(const XTree& p, const Relation& f, const PromiseFunction& g, const Distribution& mu_g,
                              const Distribution& nu) {
    Rational err(0);
    for (const auto& e : nu.entries())
        for (const auto& [leaf, w] : x_leaf_law(p, g, mu_g, e.bits))
            if (!f.accepts(e.bits, std::get<XLeaf>(p.node(leaf)).answer))
                err += e.weight * w;
    return err;
}

/// Instances spread over n, m ∈ {1,2,3}, depth ≤ 4, from one seed.
inline std::vector<Instance> instance_corpus(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<Instance> out;
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(random_instance(rng, 1 + k % 3, 1 + (k / 3) % 3, 4));
    return out;
}

} // namespace qtest
