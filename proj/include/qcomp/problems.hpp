#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qcomp/bitstring.hpp"
#include "qcomp/rational.hpp"

namespace qcomp {

enum class GValue : std::uint8_t { zero, one, star };

char to_char(GValue v);
GValue gvalue_from_bit(bool b);

/// Partial Boolean function g: {0,1}^m -> {0,1,*}, stored as a dense table
/// in lexicographic input order.
class PromiseFunction {
public:
    PromiseFunction(std::size_t m, std::vector<GValue> table);

    static PromiseFunction from_callable(std::size_t m, const std::function<GValue(const Bitstring&)>& fn);

    std::size_t m() const { return m_; }
    GValue operator()(const Bitstring& x) const;
    GValue at_index(std::uint64_t k) const { return table_[k]; }
    const std::vector<GValue>& table() const { return table_; }
    bool is_legal(const Bitstring& x) const { return (*this)(x) != GValue::star; }

    /// All legal inputs with g(x) = value, in lexicographic order.
    std::vector<Bitstring> preimage(bool value) const;

    friend bool operator==(const PromiseFunction&, const PromiseFunction&) = default;

private:
    std::size_t m_;
    std::vector<GValue> table_;
};

/// Relation f ⊆ {0,1}^n × Ξ. An input may accept no answer at all; any answer
/// there counts as wrong.
class Relation {
public:
    Relation(std::size_t n, std::vector<std::string> answers,
             std::vector<std::set<std::string>> accepted);

    static Relation from_callable(std::size_t n, std::vector<std::string> answers,
                                  const std::function<std::set<std::string>(const Bitstring&)>& fn);
    /// f(z) = {z} over answer labels "0"/"1"; defined for n = 1.
    static Relation identity_bit();

    std::size_t n() const { return n_; }
    const std::vector<std::string>& answers() const { return answers_; }
    bool in_alphabet(const std::string& xi) const;
    const std::set<std::string>& accepted(const Bitstring& z) const;
    bool accepts(const Bitstring& z, const std::string& xi) const;

    /// Inputs whose answer set is empty.
    std::vector<std::string> warnings() const;

    friend bool operator==(const Relation&, const Relation&) = default;

private:
    std::size_t n_;
    std::vector<std::string> answers_;
    std::vector<std::set<std::string>> accepted_; // indexed by Bitstring::index()
};

/// Finite-support distribution with exact weights.
class Distribution {
public:
    struct Entry {
        Bitstring bits;
        Rational weight;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    /// Entries must be distinct, of equal length, with positive weights
    /// summing to exactly one. Stored sorted by bitstring.
    explicit Distribution(std::vector<Entry> entries);

    /// Merges duplicates, drops zero weights and rescales to total one.
    static Distribution normalized(std::vector<Entry> entries);
    static Distribution uniform(std::size_t len);
    static Distribution point(const Bitstring& bits);

    std::size_t length() const { return entries_.front().bits.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    Rational probability(const Bitstring& bits) const;

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    std::vector<Entry> entries_;
};

/// ξ is a correct answer for f∘gⁿ on x: some block violates the promise, or
/// ξ ∈ f(g(x_1)…g(x_n)).
bool compose_membership(const Relation& f, const PromiseFunction& g, const Bitstring& x,
                        const std::string& xi);

/// (g(x_1), …, g(x_n)); nullopt if some block is illegal.
std::optional<Bitstring> apply_blocks(const PromiseFunction& g, const Bitstring& x);

Rational probability_of_value(const Distribution& mu_g, const PromiseFunction& g, bool value);
Distribution conditional_on_value(const Distribution& mu_g, const PromiseFunction& g, bool value);

/// z∘μ_g: block i drawn independently from μ_g conditioned on g = z_i.
Distribution lift_distribution(const Bitstring& z, const Distribution& mu_g, const PromiseFunction& g);
/// ν∘μ_g: Z ~ ν, then X ~ Z∘μ_g.
Distribution lift_distribution(const Distribution& nu, const Distribution& mu_g, const PromiseFunction& g);

/// (μ_g⁰ + μ_g¹)/2.
Distribution balanced_mixture(const Distribution& mu_g, const PromiseFunction& g);
bool is_balanced(const Distribution& mu_g, const PromiseFunction& g);

/// Throws InvalidInput unless μ_g is supported on legal inputs and g takes
/// both values on its support.
void require_nontrivial(const Distribution& mu_g, const PromiseFunction& g);

} // namespace qcomp
