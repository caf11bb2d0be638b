#include "qcomp/rational.hpp"

#include <cctype>
#include <ostream>

#include "qcomp/error.hpp"

namespace qcomp {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
        s.remove_prefix(1);
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (!is_integer_literal(s))
        throw ParseError("not a decimal integer: '" + std::string(s) + "'");
    if (s.front() == '+')
        s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

} // namespace

Rational::Rational(std::int64_t value) {
    // mpq_class has no int64 constructor on every platform; go through mpz.
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), static_cast<long>(value));
    value_ = mpq_class(z);
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0)
        throw InvalidInput("rational with zero denominator");
    mpz_class n, d;
    mpz_set_si(n.get_mpz_t(), static_cast<long>(num));
    mpz_set_si(d.get_mpz_t(), static_cast<long>(den));
    value_ = mpq_class(n, d);
    value_.canonicalize();
}

Rational::Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(mpq_class(parse_integer(text)));
    return from_parts(text.substr(0, slash), text.substr(slash + 1));
}

Rational Rational::from_parts(std::string_view num, std::string_view den) {
    mpz_class n = parse_integer(num);
    mpz_class d = parse_integer(den);
    if (d == 0)
        throw ParseError("rational with zero denominator");
    return Rational(mpq_class(n, d));
}

std::string Rational::str() const {
    if (value_.get_den() == 1)
        return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::num_str() const { return value_.get_num().get_str(); }
std::string Rational::den_str() const { return value_.get_den().get_str(); }
double Rational::to_double() const { return value_.get_d(); }

bool Rational::in_unit_interval() const { return sign() >= 0 && cmp(value_, 1) <= 0; }

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero())
        throw ZeroProbabilityEvent("division by zero rational");
    value_ /= o.value_;
    return *this;
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& base, unsigned exponent) {
    Rational out(1);
    for (unsigned k = 0; k < exponent; ++k)
        out *= base;
    return out;
}

Rational binomial(unsigned n, unsigned k) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), n, k);
    return Rational(mpq_class(c));
}

} // namespace qcomp
