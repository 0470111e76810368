// Exact fraction arithmetic. Policy fractions and voting weights are kept as
// rationals so that floor-based budget arithmetic and weight conservation are
// exact rather than subject to floating-point rounding.
//
// Self-contained: always normalized (positive denominator, reduced by gcd),
// intermediates widened to 128 bits, overflow of the stored 64-bit terms
// reported via std::overflow_error.
#pragma once

#include <string>
#include <string_view>

namespace pcs {

class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(long long value) : num_(value), den_(1) {}  // implicit by design
    Rational(long long numerator, long long denominator);

    long long numerator() const { return num_; }
    long long denominator() const { return den_; }

    Rational& operator+=(const Rational& other);
    Rational& operator-=(const Rational& other);
    Rational& operator*=(const Rational& other);
    Rational& operator/=(const Rational& other);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <
               static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    static Rational from_wide(__int128 numerator, __int128 denominator);

    long long num_ = 0;
    long long den_ = 1;
};

// Largest integer <= r.
long long floor_rational(const Rational& r);

double to_double(const Rational& r);

// "n/d", or just "n" when the denominator is 1.
std::string to_string(const Rational& r);

// Parses "a/b", a plain integer, or a decimal such as "0.375" (optionally
// with an exponent, e.g. "2.5e-2"). Decimals convert exactly: "0.2" -> 1/5.
// Throws InvalidInputError on malformed or overflowing input.
Rational parse_fraction(std::string_view text);

}  // namespace pcs
