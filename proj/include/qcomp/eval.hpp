#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcomp/problems.hpp"
#include "qcomp/trees.hpp"

namespace qcomp {

// ---------------------------------------------------------------------------
// Exact state propagation through a polarised tree on a fixed input z.
//
// With z fixed every set register holds z_i, so the memory is determined by
// the set of known indices; mass[v][mask] is the probability of reaching v
// with exactly the indices in mask queried.

struct ZLaw {
    std::vector<std::vector<Rational>> mass;
    std::vector<Rational> index_queries; // expected queries to Z_i, i = 1..n
    Rational expected_queries;

    Rational reach(NodeId v) const;
    /// P[reach v and w_i set].
    Rational known(NodeId v, std::size_t i) const;
};

/// One node's action applied to the incoming masses. out0/out1 receive the
/// masses leaving on the "0"/"1" edges (left/right for a fork); queries
/// accumulates the mass of Z-queries made, per index.
void propagate_node(const PNode& node, const Bitstring& z, std::span<const Rational> in, std::span<Rational> out0,
                    std::span<Rational> out1, std::span<Rational> index_queries);

ZLaw z_law(const PolarisedTree& tree, const Bitstring& z);

/// Laws for every z in {0,1}^n, indexed by Bitstring::index(). Parallel over z.
std::vector<ZLaw> z_laws(const PolarisedTree& tree);

namespace reference {
std::vector<ZLaw> z_laws(const PolarisedTree& tree);
} // namespace reference

// ---------------------------------------------------------------------------
// Protocol reports.

struct ProtocolReport {
    Rational error;
    Rational expected_queries;
    std::vector<Rational> block_queries; // d^(i), i = 1..n
    std::vector<Rational> reach;         // per vertex
    /// P[reach v, Z = z] for every vertex; inputs violating the promise are
    /// left out.
    std::vector<std::map<Bitstring, Rational>> z_mass;
    std::vector<std::string> warnings;
};

/// Conditional law of Z at v; throws ZeroProbabilityEvent when v is unreachable.
Distribution conditional_z_law(const ProtocolReport& report, NodeId v);

/// Exact error, expected depth and per-block cost of P for f∘gⁿ under μ.
ProtocolReport evaluate_x_protocol(const XTree& tree, const Relation& f, const PromiseFunction& g,
                                   const Distribution& mu);

/// Exact error and cost of a polarised protocol for f under Z ~ nu.
ProtocolReport evaluate_polarised(const PolarisedTree& tree, const Relation& f, const Distribution& nu);

/// d^(i,x): expected number of queries to block i conditioned on
/// X_{[n]∖i} = x_{[n]∖i}.
Rational conditional_block_queries(const XTree& tree, const Distribution& mu, std::size_t block, const Bitstring& x);

/// Law of the leaf reached by P on X ~ mu, per vertex.
std::vector<Rational> x_reach(const XTree& tree, const Distribution& mu);

// ---------------------------------------------------------------------------
// Leaves as predictors of Z_i.

struct XLeafStats {
    // [node][i-1]; meaningful at leaves only.
    std::vector<std::vector<std::uint8_t>> lambda;
    std::vector<std::vector<Rational>> delta;
    std::vector<Rational> tree_delta; // δ_i(T), i = 1..n
};

/// λ and δ under uniform∘μ_g; δ_i(T) aggregated with leaves drawn under
/// μ_f∘μ_g. Ties in "most likely" go to 0; unreachable leaves get λ = 0, δ = 0.
XLeafStats x_leaf_stats(const XTree& tree, const PromiseFunction& g, const Distribution& mu_g, const Distribution& mu_f);

struct ZLeafStats {
    // [node][i-1]; meaningful at leaves only.
    std::vector<std::vector<std::uint8_t>> polarity; // w_i(l'), 0 when never set
    std::vector<std::vector<Rational>> q;            // P[w_i set | l'] under uniform Z
    std::vector<std::vector<std::uint8_t>> lambda;
    std::vector<std::vector<Rational>> delta;
    std::vector<Rational> tree_delta;   // E[δ_i(L')] with L' under μ_f
    std::vector<Rational> half_mean_q;  // (1/2) E[q_i(L')] with L' under μ_f
};

/// Throws InvalidInput if the tree is not polarised.
ZLeafStats z_leaf_stats(const PolarisedTree& tree, const Distribution& mu_f);

// ---------------------------------------------------------------------------
// Structural checks.

struct PolarityViolation {
    NodeId vertex;
    std::size_t index;
    std::vector<PathStep> knows_zero;
    std::vector<PathStep> knows_one;
};

struct PolarityReport {
    std::optional<PolarityViolation> violation;
    /// [node][i-1]: -1 if w_i is never set on arrival, else the only value it
    /// can hold there (first one found if violated).
    std::vector<std::vector<int>> known_value;

    bool polarised() const { return !violation.has_value(); }
};

PolarityReport check_polarity(const PolarisedTree& tree);

struct IndependenceReport {
    bool pass = true;
    bool reached = false; // v had positive probability for some value of Z_i
    int value = -1;       // Z_i value where the factorisation failed
    std::optional<Bitstring> block_value;
    std::optional<Bitstring> rest_value;
};

/// Exact test that X_i and X_{[n]∖i} are independent given [v] and Z_i,
/// which holds when μ = μ_f∘μ_g. Values of Z_i with zero mass at v are
/// skipped; mass on illegal blocks is ignored.
IndependenceReport check_block_independence(const XTree& tree, NodeId v, const PromiseFunction& g,
                                            const Distribution& mu, std::size_t block);

struct LocalityReport {
    bool pass = true;
    /// [i-1][a]: P[Z_i queried | l', z] for reaching z with z_i = a.
    std::vector<std::array<std::optional<Rational>, 2>> value;
    std::size_t index = 0; // witness when failing
    std::optional<Bitstring> z_first;
    std::optional<Bitstring> z_second;
};

/// P[Z_i queried | l', z] may depend on z only through z_i.
LocalityReport check_query_locality(const PolarisedTree& tree, NodeId leaf);
LocalityReport check_query_locality(const PolarisedTree& tree, NodeId leaf, const std::vector<ZLaw>& laws);

} // namespace qcomp
