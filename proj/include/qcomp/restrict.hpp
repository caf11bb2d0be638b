#pragma once

#include <string>
#include <vector>

#include "qcomp/eval.hpp"

namespace qcomp {

// Single-block protocols are XTrees with n = 1 whose leaves are labelled
// "0" or "1"; they read X_{i₀} directly as an m-bit string.

/// P^(i₀,x): keeps queries to block i₀, answers every other query from x,
/// labels each leaf l by λ_{i₀}(l). Only vertices reachable under x survive.
XTree restrict_protocol(const XTree& p, std::size_t block, const Bitstring& x, const XLeafStats& stats);

struct TrimResult {
    XTree tree;
    std::vector<std::string> warnings;
};

/// Replaces, top-down, every vertex v with P[g(Y) = a | v] > 3/4 under
/// Y ~ μ_g by a leaf "a". Vertices unreached under μ_g are kept as they are.
TrimResult trim_protocol(const XTree& t, const Distribution& mu_g, const PromiseFunction& g);

/// P[T(Y) = g(Y)] under Y ~ μ_g (illegal inputs count as wrong).
Rational block_accuracy(const XTree& t, const PromiseFunction& g, const Distribution& mu_g);
/// Expected number of queries of T under Y ~ μ_g.
Rational block_expected_queries(const XTree& t, const Distribution& mu_g);

/// δ^(x)_{i₀}(T): E[δ_{i₀}(l(X)) | X_{[n]∖i₀} = x_{[n]∖i₀}] under X ~ mu.
Rational conditional_delta(const XTree& p, const XLeafStats& stats, const Distribution& mu, std::size_t block,
                           const Bitstring& x);

struct RestrictionRow {
    std::size_t block = 0;
    Bitstring x;
    Rational delta_x;       // δ^(x)
    Rational cost_x;        // d^(i₀,x) under μ_f∘μ_g
    Rational accuracy;      // P^(i₀,x) under μ_g
    Rational cost;
    Rational trimmed_accuracy;
    Rational trimmed_cost;
    bool accuracy_bound = false;         // accuracy ≥ 1/2 + δ^(x)/2
    bool trimmed_accuracy_bound = false; // ≥ 1/2 + δ^(x)/4
    bool trimmed_cost_bound = false;     // ≤ 4·d^(i₀,x)
    bool trim_no_increase = false;       // trimmed cost ≤ untrimmed cost
    std::vector<std::string> warnings;

    bool pass() const { return accuracy_bound && trimmed_accuracy_bound && trimmed_cost_bound && trim_no_increase; }
};

/// Restriction and trimming with all three inequalities evaluated exactly.
/// The inequalities are guaranteed only when μ_g is balanced.
RestrictionRow analyze_restriction(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                   const Distribution& mu_f, const XLeafStats& stats, std::size_t block,
                                   const Bitstring& x);

} // namespace qcomp
