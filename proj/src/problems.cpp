#include "qcomp/problems.hpp"

#include <algorithm>
#include <map>

#include "qcomp/error.hpp"

namespace qcomp {

namespace {

constexpr std::size_t kMaxDenseBits = 20;

void require_dense_size(std::size_t bits, const char* what) {
    if (bits == 0 || bits > kMaxDenseBits)
        throw InvalidInput(std::string(what) + " must have between 1 and " + std::to_string(kMaxDenseBits) +
                           " input bits");
}

} // namespace

char to_char(GValue v) {
    switch (v) {
    case GValue::zero: return '0';
    case GValue::one: return '1';
    case GValue::star: return '*';
    }
    return '?';
}

GValue gvalue_from_bit(bool b) { return b ? GValue::one : GValue::zero; }

// ---------------------------------------------------------------------------

PromiseFunction::PromiseFunction(std::size_t m, std::vector<GValue> table) : m_(m), table_(std::move(table)) {
    require_dense_size(m, "promise function");
    if (table_.size() != (std::size_t{1} << m))
        throw InvalidInput("promise function table must have 2^m = " + std::to_string(std::size_t{1} << m) +
                           " entries, got " + std::to_string(table_.size()));
    if (std::all_of(table_.begin(), table_.end(), [](GValue v) { return v == GValue::star; }))
        throw InvalidInput("promise function has no legal input");
}

PromiseFunction PromiseFunction::from_callable(std::size_t m, const std::function<GValue(const Bitstring&)>& fn) {
    require_dense_size(m, "promise function");
    std::vector<GValue> table(std::size_t{1} << m);
    for (std::uint64_t k = 0; k < table.size(); ++k)
        table[k] = fn(Bitstring::from_index(k, m));
    return PromiseFunction(m, std::move(table));
}

GValue PromiseFunction::operator()(const Bitstring& x) const {
    if (x.size() != m_)
        throw InvalidInput("promise function expects " + std::to_string(m_) + " bits, got " + std::to_string(x.size()));
    return table_[x.index()];
}

std::vector<Bitstring> PromiseFunction::preimage(bool value) const {
    std::vector<Bitstring> out;
    const GValue want = gvalue_from_bit(value);
    for (std::uint64_t k = 0; k < table_.size(); ++k)
        if (table_[k] == want)
            out.push_back(Bitstring::from_index(k, m_));
    return out;
}

// ---------------------------------------------------------------------------

Relation::Relation(std::size_t n, std::vector<std::string> answers, std::vector<std::set<std::string>> accepted)
    : n_(n), answers_(std::move(answers)), accepted_(std::move(accepted)) {
    require_dense_size(n, "relation");
    if (answers_.empty())
        throw InvalidInput("relation needs a non-empty answer alphabet");
    std::set<std::string> alphabet(answers_.begin(), answers_.end());
    if (alphabet.size() != answers_.size())
        throw InvalidInput("relation answer alphabet contains duplicates");
    if (accepted_.size() != (std::size_t{1} << n))
        throw InvalidInput("relation must list an answer set for each of the 2^n inputs");
    for (const auto& s : accepted_)
        for (const auto& xi : s)
            if (!alphabet.contains(xi))
                throw InvalidInput("relation accepts answer '" + xi + "' outside its alphabet");
}

Relation Relation::from_callable(std::size_t n, std::vector<std::string> answers,
                                 const std::function<std::set<std::string>(const Bitstring&)>& fn) {
    require_dense_size(n, "relation");
    std::vector<std::set<std::string>> accepted(std::size_t{1} << n);
    for (std::uint64_t k = 0; k < accepted.size(); ++k)
        accepted[k] = fn(Bitstring::from_index(k, n));
    return Relation(n, std::move(answers), std::move(accepted));
}

Relation Relation::identity_bit() {
    return from_callable(1, {"0", "1"}, [](const Bitstring& z) { return std::set<std::string>{z.str()}; });
}

bool Relation::in_alphabet(const std::string& xi) const {
    return std::find(answers_.begin(), answers_.end(), xi) != answers_.end();
}

const std::set<std::string>& Relation::accepted(const Bitstring& z) const {
    if (z.size() != n_)
        throw InvalidInput("relation expects " + std::to_string(n_) + " bits, got " + std::to_string(z.size()));
    return accepted_[z.index()];
}

bool Relation::accepts(const Bitstring& z, const std::string& xi) const {
    if (!in_alphabet(xi))
        throw InvalidInput("answer '" + xi + "' is outside the relation's alphabet");
    return accepted(z).contains(xi);
}

std::vector<std::string> Relation::warnings() const {
    std::vector<std::string> out;
    for (std::uint64_t k = 0; k < accepted_.size(); ++k)
        if (accepted_[k].empty())
            out.push_back("f(" + Bitstring::from_index(k, n_).str() + ") is empty; every answer there is wrong");
    return out;
}

// ---------------------------------------------------------------------------

Distribution::Distribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty())
        throw InvalidInput("distribution must have non-empty support");
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.bits < b.bits; });
    const std::size_t len = entries_.front().bits.size();
    Rational total(0);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const auto& e = entries_[k];
        if (e.bits.size() != len)
            throw InvalidInput("distribution support entries have different lengths");
        if (e.weight.sign() <= 0)
            throw InvalidInput("distribution weight for " + e.bits.str() + " is not positive");
        if (k > 0 && entries_[k - 1].bits == e.bits)
            throw InvalidInput("distribution lists " + e.bits.str() + " twice");
        total += e.weight;
    }
    if (total != Rational(1))
        throw InvalidInput("distribution weights sum to " + total.str() + ", not 1");
}

Distribution Distribution::normalized(std::vector<Entry> entries) {
    std::map<Bitstring, Rational> merged;
    for (auto& e : entries) {
        if (e.weight.sign() < 0)
            throw InvalidInput("negative weight for " + e.bits.str());
        merged[e.bits] += e.weight;
    }
    Rational total(0);
    for (const auto& [bits, w] : merged)
        total += w;
    if (total.is_zero())
        throw ZeroProbabilityEvent("cannot normalise a distribution of total weight zero");
    std::vector<Entry> out;
    for (auto& [bits, w] : merged)
        if (!w.is_zero())
            out.push_back({bits, w / total});
    return Distribution(std::move(out));
}

Distribution Distribution::uniform(std::size_t len) {
    require_dense_size(len, "uniform distribution");
    const std::uint64_t count = std::uint64_t{1} << len;
    std::vector<Entry> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k)
        out.push_back({Bitstring::from_index(k, len), Rational(1, static_cast<std::int64_t>(count))});
    return Distribution(std::move(out));
}

Distribution Distribution::point(const Bitstring& bits) { return Distribution({{bits, Rational(1)}}); }

Rational Distribution::probability(const Bitstring& bits) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), bits,
                               [](const Entry& e, const Bitstring& b) { return e.bits < b; });
    if (it != entries_.end() && it->bits == bits)
        return it->weight;
    return Rational(0);
}

// ---------------------------------------------------------------------------

std::optional<Bitstring> apply_blocks(const PromiseFunction& g, const Bitstring& x) {
    const std::size_t m = g.m();
    if (x.size() % m != 0)
        throw InvalidInput("input length " + std::to_string(x.size()) + " is not a multiple of m = " + std::to_string(m));
    const std::size_t n = x.size() / m;
    std::vector<std::uint8_t> z(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const GValue v = g(x.block(i, m));
        if (v == GValue::star)
            return std::nullopt;
        z[i - 1] = v == GValue::one ? 1 : 0;
    }
    return Bitstring(std::move(z));
}

bool compose_membership(const Relation& f, const PromiseFunction& g, const Bitstring& x, const std::string& xi) {
    if (x.size() != f.n() * g.m())
        throw InvalidInput("composed input must have n*m = " + std::to_string(f.n() * g.m()) + " bits, got " +
                           std::to_string(x.size()));
    if (!f.in_alphabet(xi))
        throw InvalidInput("answer '" + xi + "' is outside the relation's alphabet");
    const auto z = apply_blocks(g, x);
    if (!z)
        return true;
    return f.accepts(*z, xi);
}

Rational probability_of_value(const Distribution& mu_g, const PromiseFunction& g, bool value) {
    Rational p(0);
    const GValue want = gvalue_from_bit(value);
    for (const auto& e : mu_g.entries())
        if (g(e.bits) == want)
            p += e.weight;
    return p;
}

Distribution conditional_on_value(const Distribution& mu_g, const PromiseFunction& g, bool value) {
    const GValue want = gvalue_from_bit(value);
    std::vector<Distribution::Entry> kept;
    for (const auto& e : mu_g.entries())
        if (g(e.bits) == want)
            kept.push_back(e);
    if (kept.empty())
        throw ZeroProbabilityEvent(std::string("P[g(Y) = ") + (value ? "1" : "0") + "] is zero under mu_g");
    return Distribution::normalized(std::move(kept));
}

void require_nontrivial(const Distribution& mu_g, const PromiseFunction& g) {
    if (mu_g.length() != g.m())
        throw InvalidInput("mu_g is over " + std::to_string(mu_g.length()) + " bits but g takes " +
                           std::to_string(g.m()));
    bool seen[2] = {false, false};
    for (const auto& e : mu_g.entries()) {
        const GValue v = g(e.bits);
        if (v == GValue::star)
            throw InvalidInput("mu_g puts weight on the illegal input " + e.bits.str());
        seen[v == GValue::one ? 1 : 0] = true;
    }
    if (!seen[0] || !seen[1])
        throw InvalidInput("g is constant on the support of mu_g");
}

Distribution lift_distribution(const Bitstring& z, const Distribution& mu_g, const PromiseFunction& g) {
    require_nontrivial(mu_g, g);
    const Distribution cond[2] = {conditional_on_value(mu_g, g, false), conditional_on_value(mu_g, g, true)};
    std::vector<Distribution::Entry> acc{{Bitstring(), Rational(1)}};
    for (std::size_t i = 1; i <= z.size(); ++i) {
        const auto& block = cond[z.at(i) ? 1 : 0];
        std::vector<Distribution::Entry> next;
        next.reserve(acc.size() * block.support_size());
        for (const auto& prefix : acc)
            for (const auto& e : block.entries())
                next.push_back({prefix.bits.size() == 0 ? e.bits : concat(prefix.bits, e.bits), prefix.weight * e.weight});
        acc = std::move(next);
    }
    return Distribution(std::move(acc));
}

Distribution lift_distribution(const Distribution& nu, const Distribution& mu_g, const PromiseFunction& g) {
    require_nontrivial(mu_g, g);
    std::vector<Distribution::Entry> all;
    for (const auto& zn : nu.entries()) {
        const Distribution part = lift_distribution(zn.bits, mu_g, g);
        for (const auto& e : part.entries())
            all.push_back({e.bits, zn.weight * e.weight});
    }
    // Blocks determine z, so parts for distinct z are disjoint.
    return Distribution(std::move(all));
}

Distribution balanced_mixture(const Distribution& mu_g, const PromiseFunction& g) {
    require_nontrivial(mu_g, g);
    std::vector<Distribution::Entry> all;
    for (bool a : {false, true}) {
        const Distribution c = conditional_on_value(mu_g, g, a);
        for (const auto& e : c.entries())
            all.push_back({e.bits, e.weight * Rational(1, 2)});
    }
    return Distribution(std::move(all));
}

bool is_balanced(const Distribution& mu_g, const PromiseFunction& g) {
    return probability_of_value(mu_g, g, false) == Rational(1, 2) &&
           probability_of_value(mu_g, g, true) == Rational(1, 2);
}

} // namespace qcomp
