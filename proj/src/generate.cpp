#include "qcomp/generate.hpp"

#include <functional>

namespace qcomp {

namespace {

std::size_t pick(Rng& rng, std::size_t k) { return static_cast<std::size_t>(rng() % k); }

Rational weight(Rng& rng, unsigned max_weight) { return Rational(static_cast<std::int64_t>(1 + pick(rng, max_weight))); }

} // namespace

PromiseFunction random_promise_function(Rng& rng, std::size_t m) {
    const std::size_t size = std::size_t{1} << m;
    std::vector<GValue> table(size);
    for (auto& v : table) {
        const std::size_t r = pick(rng, 5);
        v = r < 2 ? GValue::zero : (r < 4 ? GValue::one : GValue::star);
    }
    const std::size_t a = pick(rng, size);
    std::size_t b = pick(rng, size - 1);
    if (b >= a)
        ++b;
    table[a] = GValue::zero;
    table[b] = GValue::one;
    return PromiseFunction(m, std::move(table));
}

Distribution random_block_distribution(Rng& rng, const PromiseFunction& g, unsigned max_weight) {
    std::vector<Distribution::Entry> entries;
    for (bool value : {false, true}) {
        const auto pre = g.preimage(value);
        const std::size_t forced = pick(rng, pre.size());
        for (std::size_t k = 0; k < pre.size(); ++k)
            if (k == forced || pick(rng, 4) != 0)
                entries.push_back({pre[k], weight(rng, max_weight)});
    }
    return Distribution::normalized(std::move(entries));
}

Distribution random_full_support(Rng& rng, std::size_t len, unsigned max_weight) {
    std::vector<Distribution::Entry> entries;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << len); ++k)
        entries.push_back({Bitstring::from_index(k, len), weight(rng, max_weight)});
    return Distribution::normalized(std::move(entries));
}

Distribution random_distribution(Rng& rng, std::size_t len, unsigned max_weight) {
    const std::uint64_t size = std::uint64_t{1} << len;
    const std::uint64_t forced = rng() % size;
    std::vector<Distribution::Entry> entries;
    for (std::uint64_t k = 0; k < size; ++k)
        if (k == forced || pick(rng, 2) == 0)
            entries.push_back({Bitstring::from_index(k, len), weight(rng, max_weight)});
    return Distribution::normalized(std::move(entries));
}

Relation random_relation(Rng& rng, std::size_t n, const std::vector<std::string>& answers) {
    std::vector<std::set<std::string>> accepted(std::size_t{1} << n);
    for (auto& set : accepted) {
        for (const auto& a : answers)
            if (pick(rng, 2) == 0)
                set.insert(a);
        if (set.empty())
            set.insert(answers[pick(rng, answers.size())]);
    }
    return Relation(n, answers, std::move(accepted));
}

XTree random_xtree(Rng& rng, std::size_t n, std::size_t m, std::size_t max_depth,
                   const std::vector<std::string>& answers) {
    std::vector<XNode> nodes;
    std::function<NodeId(std::size_t)> build = [&](std::size_t depth) -> NodeId {
        const NodeId id = nodes.size();
        if (depth == max_depth || (depth > 0 && pick(rng, 4) == 0)) {
            nodes.push_back(XLeaf{answers[pick(rng, answers.size())]});
            return id;
        }
        nodes.push_back(XLeaf{});
        const std::size_t block = 1 + pick(rng, n);
        const std::size_t bit = 1 + pick(rng, m);
        const NodeId c0 = build(depth + 1);
        const NodeId c1 = build(depth + 1);
        nodes[id] = XQuery{block, bit, c0, c1};
        return id;
    };
    const NodeId root = build(0);
    return XTree(n, m, std::move(nodes), root);
}

Instance random_instance(Rng& rng, std::size_t n, std::size_t m, std::size_t max_depth) {
    const std::vector<std::string> answers{"0", "1", "2"};
    PromiseFunction g = random_promise_function(rng, m);
    Distribution mu_g = random_block_distribution(rng, g);
    Relation f = random_relation(rng, n, answers);
    XTree p = random_xtree(rng, n, m, max_depth, answers);
    return Instance{std::move(g), std::move(mu_g), std::move(f), std::move(p), std::nullopt, std::nullopt};
}

} // namespace qcomp
