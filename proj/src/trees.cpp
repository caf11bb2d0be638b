#include "qcomp/trees.hpp"

#include <algorithm>
#include <functional>

#include "qcomp/error.hpp"

namespace qcomp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

// ---------------------------------------------------------------------------

XTree::XTree(std::size_t n, std::size_t m, std::vector<XNode> nodes, NodeId root)
    : n_(n), m_(m), nodes_(std::move(nodes)), root_(root) {
    if (n == 0 || m == 0)
        throw InvalidInput("protocol tree needs n >= 1 and m >= 1");
    if (nodes_.empty() || root_ >= nodes_.size())
        throw InvalidInput("protocol tree root " + std::to_string(root_) + " does not exist");
    constexpr NodeId none = static_cast<NodeId>(-1);
    parent_.assign(nodes_.size(), none);
    parent_[root_] = root_;
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        const auto* q = std::get_if<XQuery>(&nodes_[id]);
        if (!q)
            continue;
        if (q->block == 0 || q->block > n_ || q->bit == 0 || q->bit > m_)
            throw InvalidInput("node " + std::to_string(id) + " queries X_{" + std::to_string(q->block) + "," +
                               std::to_string(q->bit) + "} outside [1," + std::to_string(n_) + "]x[1," +
                               std::to_string(m_) + "]");
        for (NodeId c : {q->child0, q->child1}) {
            if (c >= nodes_.size())
                throw InvalidInput("node " + std::to_string(id) + " has missing child " + std::to_string(c));
            if (c == root_ || parent_[c] != none)
                throw InvalidInput("node " + std::to_string(c) + " has more than one parent");
            parent_[c] = id;
        }
    }
    // Top-down order; also detects unreachable nodes (which would include
    // any cycle detached from the root).
    order_.reserve(nodes_.size());
    order_.push_back(root_);
    for (std::size_t k = 0; k < order_.size(); ++k)
        if (const auto* q = std::get_if<XQuery>(&nodes_[order_[k]])) {
            order_.push_back(q->child0);
            order_.push_back(q->child1);
        }
    if (order_.size() != nodes_.size())
        throw InvalidInput("protocol tree has nodes unreachable from the root");
}

XTree XTree::leaf(std::size_t n, std::size_t m, std::string answer) {
    return XTree(n, m, {XLeaf{std::move(answer)}}, 0);
}

NodeId XTree::walk(const Bitstring& x, std::vector<NodeId>* visited) const {
    if (x.size() != n_ * m_)
        throw InvalidInput("protocol expects " + std::to_string(n_ * m_) + " input bits, got " + std::to_string(x.size()));
    NodeId v = root_;
    const auto bits = x.bits();
    for (;;) {
        if (visited)
            visited->push_back(v);
        const auto* q = std::get_if<XQuery>(&nodes_[v]);
        if (!q)
            return v;
        v = bits[(q->block - 1) * m_ + (q->bit - 1)] ? q->child1 : q->child0;
    }
}

// ---------------------------------------------------------------------------

std::vector<NodeId> children_of(const PNode& node) {
    return std::visit(overloaded{
                          [](const ZLeaf&) { return std::vector<NodeId>{}; },
                          [](const RandFork& f) { return std::vector<NodeId>{f.left, f.right}; },
                          [](const ZNode& z) { return std::vector<NodeId>{z.child0, z.child1}; },
                          [](const ZMixer& z) { return std::vector<NodeId>{z.child0, z.child1}; },
                      },
                      node);
}

PolarisedTree::PolarisedTree(std::size_t n, std::vector<PNode> nodes, NodeId root)
    : n_(n), nodes_(std::move(nodes)), root_(root) {
    if (n == 0 || n > kMaxIndices)
        throw InvalidInput("polarised tree supports 1 <= n <= " + std::to_string(kMaxIndices));
    if (nodes_.empty() || root_ >= nodes_.size())
        throw InvalidInput("polarised tree root " + std::to_string(root_) + " does not exist");

    auto check_param = [](const Rational& r, NodeId id, const char* name) {
        if (!r.in_unit_interval())
            throw InvalidInput("node " + std::to_string(id) + " has " + name + " = " + r.str() + " outside [0,1]");
    };
    auto check_index = [this](std::size_t i, NodeId id) {
        if (i == 0 || i > n_)
            throw InvalidInput("node " + std::to_string(id) + " uses index " + std::to_string(i) + " outside [1," +
                               std::to_string(n_) + "]");
    };

    std::vector<std::size_t> indegree(nodes_.size(), 0);
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        std::visit(overloaded{
                       [](const ZLeaf&) {},
                       [&](const RandFork& f) { check_param(f.alpha, id, "alpha"); },
                       [&](const ZNode& z) {
                           check_index(z.index, id);
                           check_param(z.alpha, id, "alpha");
                           check_param(z.beta, id, "beta");
                       },
                       [&](const ZMixer& z) {
                           check_index(z.index, id);
                           check_param(z.alpha, id, "alpha");
                           check_param(z.beta, id, "beta");
                       },
                   },
                   nodes_[id]);
        for (NodeId c : children_of(nodes_[id])) {
            if (c >= nodes_.size())
                throw InvalidInput("node " + std::to_string(id) + " has missing child " + std::to_string(c));
            ++indegree[c];
        }
    }

    // Reachability from the root, then Kahn's algorithm on the reachable part.
    std::vector<bool> reachable(nodes_.size(), false);
    std::vector<NodeId> stack{root_};
    reachable[root_] = true;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId c : children_of(nodes_[v]))
            if (!reachable[c]) {
                reachable[c] = true;
                stack.push_back(c);
            }
    }
    if (std::find(reachable.begin(), reachable.end(), false) != reachable.end())
        throw InvalidInput("polarised tree has nodes unreachable from the root");

    if (indegree[root_] != 0)
        throw InvalidInput("polarised tree is cyclic through its root");
    std::vector<std::size_t> remaining = indegree;
    order_.reserve(nodes_.size());
    order_.push_back(root_);
    for (std::size_t k = 0; k < order_.size(); ++k) {
        const auto kids = children_of(nodes_[order_[k]]);
        for (NodeId c : kids)
            if (--remaining[c] == 0)
                order_.push_back(c);
    }
    if (order_.size() != nodes_.size())
        throw InvalidInput("polarised tree contains a cycle");
    for (NodeId id = 0; id < nodes_.size(); ++id)
        if (id != root_ && indegree[id] != 1)
            strict_ = false;
    // A node listing the same child twice also breaks strictness.
    for (const auto& node : nodes_) {
        const auto kids = children_of(node);
        if (kids.size() == 2 && kids[0] == kids[1])
            strict_ = false;
    }
}

PolarisedTree PolarisedTree::leaf(std::size_t n, std::optional<std::string> answer) {
    return PolarisedTree(n, {ZLeaf{std::move(answer)}}, 0);
}

std::vector<NodeId> PolarisedTree::leaves() const {
    std::vector<NodeId> out;
    for (NodeId id = 0; id < nodes_.size(); ++id)
        if (is_leaf(id))
            out.push_back(id);
    return out;
}

// ---------------------------------------------------------------------------

void WState::record(std::size_t i, bool v) {
    const std::uint32_t bit = 1u << (i - 1);
    if ((known_ & bit) && (((values_ & bit) != 0) != v))
        throw ConsistencyError("memory register w_" + std::to_string(i) + " overwritten with a different value");
    known_ |= bit;
    if (v)
        values_ |= bit;
}

std::string WState::str(std::size_t n) const {
    std::string s(n, '*');
    for (std::size_t i = 1; i <= n; ++i)
        if (is_known(i))
            s[i - 1] = value(i) ? '1' : '0';
    return s;
}

// ---------------------------------------------------------------------------

std::vector<ComputationalPath> enumerate_paths(const PolarisedTree& tree, const Bitstring& z) {
    if (z.size() != tree.n())
        throw InvalidInput("input z has " + std::to_string(z.size()) + " bits, tree expects " + std::to_string(tree.n()));
    std::vector<ComputationalPath> out;
    ComputationalPath current{{}, 0, WState{}, Rational(1)};

    const Rational one(1);
    std::function<void(NodeId)> expand = [&](NodeId v) {
        auto follow = [&](int branch, bool queried, const Rational& p, NodeId child, std::size_t record_index) {
            if (p.is_zero())
                return;
            const WState saved_memory = current.memory;
            const Rational saved_weight = current.weight;
            current.steps.push_back({v, branch, queried});
            current.weight = current.weight * p;
            if (record_index != 0)
                current.memory.record(record_index, branch == 1);
            expand(child);
            current.steps.pop_back();
            current.weight = saved_weight;
            current.memory = saved_memory;
        };

        const PNode& node = tree.node(v);
        if (std::holds_alternative<ZLeaf>(node)) {
            current.leaf = v;
            out.push_back(current);
            return;
        }
        if (const auto* f = std::get_if<RandFork>(&node)) {
            follow(0, false, f->alpha, f->left, 0);
            follow(1, false, one - f->alpha, f->right, 0);
            return;
        }
        if (const auto* q = std::get_if<ZNode>(&node)) {
            const std::size_t i = q->index;
            if (current.memory.is_known(i)) {
                const bool b = current.memory.value(i);
                follow(b ? 1 : 0, false, one, b ? q->child1 : q->child0, 0);
                return;
            }
            const bool zi = z.at(i);
            follow(zi ? 1 : 0, true, q->alpha, zi ? q->child1 : q->child0, i);
            follow(1, false, (one - q->alpha) * q->beta, q->child1, 0);
            follow(0, false, (one - q->alpha) * (one - q->beta), q->child0, 0);
            return;
        }
        const auto& mx = std::get<ZMixer>(node);
        const Rational& p1 = current.memory.is_known(mx.index) ? mx.alpha : mx.beta;
        follow(1, false, p1, mx.child1, 0);
        follow(0, false, one - p1, mx.child0, 0);
    };
    expand(tree.root());
    return out;
}

} // namespace qcomp

namespace qcomp {

std::vector<NodeId> IsomorphismMap::z_to_x() const {
    std::vector<NodeId> out(x_to_z.size());
    for (NodeId x = 0; x < x_to_z.size(); ++x) {
        if (x_to_z[x] >= out.size())
            throw InvalidInput("isomorphism maps outside the node range");
        out[x_to_z[x]] = x;
    }
    return out;
}

} // namespace qcomp
