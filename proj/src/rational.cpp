#include "taublab/rational.hpp"

#include "taublab/errors.hpp"

#include <cctype>
#include <limits>

namespace taublab {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

BigInt parse_integer(std::string_view s) {
    if (s[0] == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    value_ = d < 0 ? boost::multiprecision::cpp_rational(-BigInt(n), -BigInt(d))
                   : boost::multiprecision::cpp_rational(BigInt(n), BigInt(d));
}

Rational::Rational(const BigInt& n, const BigInt& d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    value_ = d < 0 ? boost::multiprecision::cpp_rational(-n, -d) : boost::multiprecision::cpp_rational(n, d);
}

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.find('.') != std::string_view::npos || text.find('e') != std::string_view::npos ||
        text.find('E') != std::string_view::npos) {
        throw ParseError("'" + std::string(text) +
                         "' is not an exact rational; write it as p/q (for example 0.5 -> 1/2)");
    }
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-') {
        throw ParseError("malformed rational '" + std::string(text) + "'; expected p/q");
    }
    BigInt d = parse_integer(den);
    if (d == 0) throw ParseError("rational '" + std::string(text) + "' has zero denominator");
    return Rational(boost::multiprecision::cpp_rational(parse_integer(num), d));
}

std::optional<std::pair<std::int64_t, std::int64_t>> Rational::small_parts() const {
    const BigInt n = numerator();
    const BigInt d = denominator();
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) return std::nullopt;
    return std::make_pair(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

double Rational::to_double() const { return value_.convert_to<double>(); }

std::string Rational::str() const {
    const BigInt d = denominator();
    if (d == 1) return numerator().str();
    return numerator().str() + "/" + d.str();
}

Rational Rational::operator-() const { return Rational(boost::multiprecision::cpp_rational(-value_)); }
Rational& Rational::operator+=(const Rational& o) { value_ += o.value_; return *this; }
Rational& Rational::operator-=(const Rational& o) { value_ -= o.value_; return *this; }
Rational& Rational::operator*=(const Rational& o) { value_ *= o.value_; return *this; }
Rational& Rational::operator/=(const Rational& o) {
    if (o.value_ == 0) throw DomainError("division by zero");
    value_ /= o.value_;
    return *this;
}

void require_unit_open(const Rational& alpha, std::string_view what) {
    if (alpha <= Rational(0) || alpha >= Rational(1)) {
        throw DomainError(std::string(what) + " must lie strictly between 0 and 1, got " + alpha.str());
    }
}

Threshold::Threshold(const Rational& alpha) : alpha_(alpha) {
    if (auto parts = alpha.small_parts(); parts && parts->first >= 0) {
        small_ = true;
        p_ = parts->first;
        q_ = parts->second;
    }
}

bool Threshold::exceeded_by(std::int64_t count, std::int64_t volume) const {
    if (small_) {
        return static_cast<__int128>(count) * q_ > static_cast<__int128>(volume) * p_;
    }
    return BigInt(count) * alpha_.denominator() > BigInt(volume) * alpha_.numerator();
}

std::int64_t Threshold::max_volume(std::int64_t count) const {
    constexpr auto cap = std::numeric_limits<std::int64_t>::max();
    if (small_) {
        if (p_ == 0) return cap;
        const __int128 v = (static_cast<__int128>(count) * q_ - 1) / p_;
        return v > cap ? cap : static_cast<std::int64_t>(v);
    }
    const BigInt p = alpha_.numerator();
    if (p <= 0) return cap;
    const BigInt v = (BigInt(count) * alpha_.denominator() - 1) / p;
    return v > cap ? cap : static_cast<std::int64_t>(v);
}

std::strong_ordering compare_fractions(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    const __int128 lhs = static_cast<__int128>(a) * d;
    const __int128 rhs = static_cast<__int128>(c) * b;
    return lhs <=> rhs;
}

}  // namespace taublab
