#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qcomp/problems.hpp"
#include "qcomp/trees.hpp"

namespace qcomp {

// ---------------------------------------------------------------------------
// Translation of a deterministic protocol P for f∘gⁿ into a polarised
// protocol P′ for f. Every quantity is computed with Z uniform over {0,1}^n
// and X ~ Z∘μ_g, which makes the output independent of any μ_f.

/// Raw masses gathered for one X-query vertex v₀ reading block i₀, all
/// under the internal distribution.
struct NodeEvidence {
    NodeId vertex = 0;
    std::size_t block = 0;
    // P side.
    Rational reach;                 // P[v₀]
    Rational reach_z1;              // P[v₀, Z_{i₀} = 1]
    std::array<Rational, 2> edge;   // P[v₀, X_{i₀,j} = b]
    std::array<Rational, 2> edge_z1;
    // P′ side, at M(v₀) before its own action.
    Rational image_reach;
    Rational known0;                // P[M(v₀), w_{i₀} = 0]
    Rational known1;                // P[M(v₀), w_{i₀} = 1]
    Rational unknown_z1;            // P[M(v₀), w_{i₀} = *, Z_{i₀} = 1]
};

enum class TranslationCase { unreachable, degenerate, mixer, znode };

const char* to_string(TranslationCase c);

/// Per-vertex ledger of the construction. When flip is set the case analysis
/// ran on the problem with Z_{i₀} complemented; the quantities stored here
/// are always in the original orientation while gamma*, alpha_prime and the
/// pre-mirror parameters refer to the flipped one.
struct NodeTranslation {
    NodeId vertex = 0;
    std::size_t block = 0;
    TranslationCase kind = TranslationCase::unreachable;
    bool flip = false;
    int a0 = 0;
    Rational p_in, p_lt, p_gt, tau_lt, tau_gt, q_in;
    std::optional<Rational> p_star; // undefined when q_in = 1
    int polarity = -1;              // value held by w_{i₀} when set at M(v₀)
    std::optional<Rational> gamma1;
    std::optional<Rational> alpha_prime, gamma2, gamma3;
    Rational alpha0, beta0;         // emitted node parameters

    friend bool operator==(const NodeTranslation&, const NodeTranslation&) = default;
};

/// Quantities and case selection from the gathered masses; checks the
/// weighting identity p*(1−q) + q·w = p_in. Throws ConsistencyError when the
/// evidence contradicts the construction's invariants.
NodeTranslation analyze_node(const NodeEvidence& e);

/// Emits M(v₀): child0 must be the image of the a₀ child.
PNode translate_node(const NodeTranslation& t, NodeId child0, NodeId child1);

struct TransformResult {
    PolarisedTree tree;
    IsomorphismMap isomorphism;
    std::vector<NodeTranslation> ledger; // one per X-query vertex, top-down
};

TransformResult transform_protocol(const XTree& p, const PromiseFunction& g, const Distribution& mu_g);

} // namespace qcomp
