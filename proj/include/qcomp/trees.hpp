#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcomp/bitstring.hpp"
#include "qcomp/rational.hpp"

namespace qcomp {

using NodeId = std::size_t;

// ---------------------------------------------------------------------------
// Deterministic protocols for f∘gⁿ.

struct XLeaf {
    std::string answer;
    friend bool operator==(const XLeaf&, const XLeaf&) = default;
};

/// Reads X_{block,bit}; both indices are 1-based.
struct XQuery {
    std::size_t block;
    std::size_t bit;
    NodeId child0;
    NodeId child1;
    friend bool operator==(const XQuery&, const XQuery&) = default;
};

using XNode = std::variant<XLeaf, XQuery>;

class XTree {
public:
    /// Validates: indices in range, every node except the root has exactly
    /// one parent, the root has none, every node reachable.
    XTree(std::size_t n, std::size_t m, std::vector<XNode> nodes, NodeId root);

    /// Single-leaf protocol.
    static XTree leaf(std::size_t n, std::size_t m, std::string answer);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    NodeId root() const { return root_; }
    std::size_t size() const { return nodes_.size(); }
    const XNode& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<XNode>& nodes() const { return nodes_; }
    bool is_leaf(NodeId id) const { return std::holds_alternative<XLeaf>(nodes_.at(id)); }

    /// Parent of each node (root maps to itself).
    const std::vector<NodeId>& parents() const { return parent_; }
    /// Root first; every node after its parent.
    const std::vector<NodeId>& top_down() const { return order_; }

    /// Leaf reached on input x together with the visited vertices.
    NodeId walk(const Bitstring& x, std::vector<NodeId>* visited = nullptr) const;

    friend bool operator==(const XTree& a, const XTree& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.root_ == b.root_ && a.nodes_ == b.nodes_;
    }

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<XNode> nodes_;
    NodeId root_;
    std::vector<NodeId> parent_;
    std::vector<NodeId> order_;
};

// ---------------------------------------------------------------------------
// Polarised randomised protocols for f.

struct ZLeaf {
    std::optional<std::string> answer;
    friend bool operator==(const ZLeaf&, const ZLeaf&) = default;
};

/// Left child with probability alpha.
struct RandFork {
    Rational alpha;
    NodeId left;
    NodeId right;
    friend bool operator==(const RandFork&, const RandFork&) = default;
};

/// If w_i = *: query Z_i with probability alpha (follow edge Z_i and record
/// it), otherwise edge "1" with probability beta. If w_i is set: follow w_i.
struct ZNode {
    std::size_t index;
    Rational alpha;
    Rational beta;
    NodeId child0;
    NodeId child1;
    friend bool operator==(const ZNode&, const ZNode&) = default;
};

/// Never queries. Edge "1" with probability beta if w_i = *, alpha otherwise.
struct ZMixer {
    std::size_t index;
    Rational alpha;
    Rational beta;
    NodeId child0;
    NodeId child1;
    friend bool operator==(const ZMixer&, const ZMixer&) = default;
};

using PNode = std::variant<ZLeaf, RandFork, ZNode, ZMixer>;

/// Rooted DAG. Shared children are allowed so that non-polarised negative
/// controls can be expressed; the transformer only emits strict trees.
class PolarisedTree {
public:
    static constexpr std::size_t kMaxIndices = 16;

    /// Validates: children in range, acyclic, every node reachable from the
    /// root, parameters in [0,1], indices in [1, n].
    PolarisedTree(std::size_t n, std::vector<PNode> nodes, NodeId root);

    static PolarisedTree leaf(std::size_t n, std::optional<std::string> answer);

    std::size_t n() const { return n_; }
    NodeId root() const { return root_; }
    std::size_t size() const { return nodes_.size(); }
    const PNode& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<PNode>& nodes() const { return nodes_; }
    bool is_leaf(NodeId id) const { return std::holds_alternative<ZLeaf>(nodes_.at(id)); }
    std::vector<NodeId> leaves() const;
    /// Topological order, root first.
    const std::vector<NodeId>& top_down() const { return order_; }
    bool is_strict_tree() const { return strict_; }

    friend bool operator==(const PolarisedTree& a, const PolarisedTree& b) {
        return a.n_ == b.n_ && a.root_ == b.root_ && a.nodes_ == b.nodes_;
    }

private:
    std::size_t n_;
    std::vector<PNode> nodes_;
    NodeId root_;
    std::vector<NodeId> order_;
    bool strict_ = true;
};

/// Children of a polarised node in edge order ("0" then "1"; left then right).
std::vector<NodeId> children_of(const PNode& node);

/// Memory w ∈ {0,1,*}^n. Bit i-1 of known() says whether w_i is set.
class WState {
public:
    WState() = default;
    WState(std::uint32_t known, std::uint32_t values) : known_(known), values_(values & known) {}

    bool is_known(std::size_t i) const { return (known_ >> (i - 1)) & 1u; }
    bool value(std::size_t i) const { return (values_ >> (i - 1)) & 1u; }
    /// Sets w_i once; a second write with a different value is a bug.
    void record(std::size_t i, bool v);
    std::uint32_t known() const { return known_; }
    std::uint32_t values() const { return values_; }
    std::string str(std::size_t n) const;

    friend bool operator==(const WState&, const WState&) = default;
    friend auto operator<=>(const WState&, const WState&) = default;

private:
    std::uint32_t known_ = 0;
    std::uint32_t values_ = 0;
};

struct PathStep {
    NodeId node;
    int branch;   // edge taken: 0/1 ("0"/"1", or left/right at a fork)
    bool queried; // a Z-query happened here
    friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct ComputationalPath {
    std::vector<PathStep> steps;
    NodeId leaf;
    WState memory; // at the leaf
    Rational weight;
};

/// Every positive-probability computational path of the tree on input z, by
/// explicit depth-first expansion. Intended for small trees.
std::vector<ComputationalPath> enumerate_paths(const PolarisedTree& tree, const Bitstring& z);

} // namespace qcomp

namespace qcomp {

/// Node correspondence between a protocol for f∘gⁿ and its polarised image.
/// The "0" edge of M(v) corresponds to the a₀ edge of v.
struct IsomorphismMap {
    std::vector<NodeId> x_to_z;

    NodeId operator()(NodeId x) const { return x_to_z.at(x); }
    std::vector<NodeId> z_to_x() const;
    friend bool operator==(const IsomorphismMap&, const IsomorphismMap&) = default;
};

} // namespace qcomp
