#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcomp {

/// Fixed-length 0/1 string. Positions are 1-based through at(); bits()
/// exposes the raw 0-based storage.
class Bitstring {
public:
    Bitstring() = default;
    explicit Bitstring(std::string_view text);
    explicit Bitstring(std::vector<std::uint8_t> bits);

    /// Lexicographic rank k of a length-len string (first position is the
    /// most significant bit).
    static Bitstring from_index(std::uint64_t k, std::size_t len);
    static Bitstring zeros(std::size_t len);

    std::uint64_t index() const;
    std::size_t size() const { return bits_.size(); }
    bool at(std::size_t pos) const;
    void set(std::size_t pos, bool value);
    std::size_t weight() const;

    /// Block i (1-based) of width m.
    Bitstring block(std::size_t i, std::size_t m) const;
    Bitstring flipped(std::size_t pos) const;

    std::span<const std::uint8_t> bits() const { return bits_; }
    std::string str() const;

    friend Bitstring concat(const Bitstring& a, const Bitstring& b);
    friend Bitstring operator^(const Bitstring& a, const Bitstring& b);

    friend bool operator==(const Bitstring&, const Bitstring&) = default;
    friend auto operator<=>(const Bitstring& a, const Bitstring& b) {
        if (a.size() != b.size())
            return a.size() <=> b.size();
        return a.bits_ <=> b.bits_;
    }

private:
    std::vector<std::uint8_t> bits_;
};

Bitstring concat(const std::vector<Bitstring>& parts);

} // namespace qcomp
