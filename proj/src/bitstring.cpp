#include "qcomp/bitstring.hpp"

#include <algorithm>
#include <numeric>

#include "qcomp/error.hpp"

namespace qcomp {

Bitstring::Bitstring(std::string_view text) {
    if (text.empty())
        throw InvalidInput("bitstring must have positive length");
    bits_.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw InvalidInput("bitstring may only contain '0' and '1': '" + std::string(text) + "'");
        bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
}

Bitstring::Bitstring(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty())
        throw InvalidInput("bitstring must have positive length");
    for (auto b : bits_)
        if (b > 1)
            throw InvalidInput("bitstring entries must be 0 or 1");
}

Bitstring Bitstring::from_index(std::uint64_t k, std::size_t len) {
    if (len == 0 || (len < 64 && (k >> len) != 0))
        throw InvalidInput("index does not fit the requested bitstring length");
    std::vector<std::uint8_t> bits(len);
    for (std::size_t p = 0; p < len; ++p)
        bits[len - 1 - p] = (p < 64) ? static_cast<std::uint8_t>((k >> p) & 1u) : 0;
    return Bitstring(std::move(bits));
}

Bitstring Bitstring::zeros(std::size_t len) { return Bitstring(std::vector<std::uint8_t>(len, 0)); }

std::uint64_t Bitstring::index() const {
    if (bits_.size() > 64)
        throw InvalidInput("bitstring too long for an integer index");
    std::uint64_t k = 0;
    for (auto b : bits_)
        k = (k << 1) | b;
    return k;
}

bool Bitstring::at(std::size_t pos) const {
    if (pos == 0 || pos > bits_.size())
        throw InvalidInput("bit position " + std::to_string(pos) + " out of range [1, " +
                           std::to_string(bits_.size()) + "]");
    return bits_[pos - 1] != 0;
}

void Bitstring::set(std::size_t pos, bool value) {
    if (pos == 0 || pos > bits_.size())
        throw InvalidInput("bit position out of range");
    bits_[pos - 1] = value ? 1 : 0;
}

std::size_t Bitstring::weight() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Bitstring Bitstring::block(std::size_t i, std::size_t m) const {
    if (i == 0 || m == 0 || i * m > bits_.size())
        throw InvalidInput("block " + std::to_string(i) + " of width " + std::to_string(m) +
                           " out of range for length " + std::to_string(bits_.size()));
    const auto first = bits_.begin() + static_cast<std::ptrdiff_t>((i - 1) * m);
    return Bitstring(std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(m)));
}

Bitstring Bitstring::flipped(std::size_t pos) const {
    Bitstring out = *this;
    out.set(pos, !at(pos));
    return out;
}

std::string Bitstring::str() const {
    std::string s(bits_.size(), '0');
    for (std::size_t p = 0; p < bits_.size(); ++p)
        s[p] = static_cast<char>('0' + bits_[p]);
    return s;
}

Bitstring concat(const Bitstring& a, const Bitstring& b) {
    std::vector<std::uint8_t> bits(a.bits_);
    bits.insert(bits.end(), b.bits_.begin(), b.bits_.end());
    return Bitstring(std::move(bits));
}

Bitstring concat(const std::vector<Bitstring>& parts) {
    std::vector<std::uint8_t> bits;
    for (const auto& p : parts)
        bits.insert(bits.end(), p.bits().begin(), p.bits().end());
    return Bitstring(std::move(bits));
}

Bitstring operator^(const Bitstring& a, const Bitstring& b) {
    if (a.size() != b.size())
        throw InvalidInput("xor of bitstrings with different lengths");
    std::vector<std::uint8_t> bits(a.size());
    for (std::size_t p = 0; p < a.size(); ++p)
        bits[p] = a.bits_[p] ^ b.bits_[p];
    return Bitstring(std::move(bits));
}

} // namespace qcomp
