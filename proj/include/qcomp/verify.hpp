#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcomp/eval.hpp"
#include "qcomp/transform.hpp"

namespace qcomp {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string witness; // empty when passing
    std::optional<NodeId> vertex;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool pass() const;
    void add(std::string name, bool pass, std::string witness = {}, std::optional<NodeId> vertex = std::nullopt);
    void append(const VerificationReport& other);
};

using NamedDistribution = std::pair<std::string, Distribution>;

/// Structure-preserving bijection: parent/child relation, "0" edge of M(v)
/// to M(a₀ child), leaf labels. a0[v] is the a₀ of each X-query vertex
/// (0 means child0 maps to the "0" edge).
CheckResult check_isomorphism(const XTree& p, const PolarisedTree& tp, const IsomorphismMap& iso,
                              const std::vector<int>& a0);

/// The four items relating P under ν∘μ_g to P′ under ν: error, per-z leaf
/// law, vertex reach, conditional law of Z at each vertex.
VerificationReport verify_simulation(const XTree& p, const Relation& f, const PromiseFunction& g, const Distribution& mu_g,
                                    const PolarisedTree& tp, const IsomorphismMap& iso, const NamedDistribution& nu);

/// Every computational path queries each Z_i at most once, only when w_i = *,
/// and path weights sum to 1 for every z.
CheckResult check_at_most_once(const PolarisedTree& tp);

/// Polarity, at-most-once queries, query locality at every leaf of P′, and
/// block independence at every vertex of P under μ_f∘μ_g.
VerificationReport verify_structure(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                    const PolarisedTree& tp, const NamedDistribution& mu_f);

/// δ_i(T) = δ_i(T′), δ_i(T′) = E[q_i(L′)]/2 and P[Z_i queried] ≤ 4δ_i(T′).
VerificationReport verify_predictors(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                     const PolarisedTree& tp, const NamedDistribution& mu_f);

/// Recomputes, under uniform Z, what each X-query vertex requires of its
/// image: the law of Z_{i₀} after each answer edge and the probability of the
/// "0" edge. Detects P′ whose parameters were altered after translation.
VerificationReport verify_translation(const XTree& p, const PromiseFunction& g, const Distribution& mu_g,
                                      const PolarisedTree& tp, const IsomorphismMap& iso);

/// Edge orientation a₀ of every X-query vertex, derived from P alone (ties
/// and unreachable vertices give 0).
std::vector<int> answer_orientation(const XTree& p, const PromiseFunction& g, const Distribution& mu_g);

} // namespace qcomp
