#pragma once

/**
 * @file rational.hpp
 * @brief Exact rationals over arbitrary-precision integers.
 *
 * Values are always in lowest terms with a positive denominator, so equality
 * of values is equality of representations. Text form is "p/q", or just "p"
 * when the denominator is 1.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace taublab {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d);
    Rational(const BigInt& n, const BigInt& d);

    /// Parses "p/q" or "p". Decimal or otherwise malformed input throws
    /// ParseError; a zero denominator throws ParseError.
    static Rational parse(std::string_view text);

    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }

    /// Numerator/denominator as int64 when both fit.
    std::optional<std::pair<std::int64_t, std::int64_t>> small_parts() const;

    bool is_integer() const { return denominator() == 1; }
    double to_double() const;
    std::string str() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    explicit Rational(boost::multiprecision::cpp_rational v) : value_(std::move(v)) {}
    boost::multiprecision::cpp_rational value_{0};
};

/// Throws DomainError unless 0 < alpha < 1.
void require_unit_open(const Rational& alpha, std::string_view what = "alpha");

/// A threshold alpha = p/q prepared for repeated strict comparisons of
/// integer ratios count/volume against it.
class Threshold {
public:
    explicit Threshold(const Rational& alpha);

    const Rational& alpha() const { return alpha_; }

    /// count/volume > alpha, exactly. volume must be positive.
    bool exceeded_by(std::int64_t count, std::int64_t volume) const;

    /// Largest volume V with count/V > alpha (count >= 1), i.e. the largest
    /// V with V * p < count * q. Saturates at INT64_MAX.
    std::int64_t max_volume(std::int64_t count) const;

private:
    Rational alpha_;
    bool small_ = false;
    std::int64_t p_ = 0;
    std::int64_t q_ = 1;
};

/// Exact comparison of a/b against c/d for positive b, d.
std::strong_ordering compare_fractions(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

}  // namespace taublab
