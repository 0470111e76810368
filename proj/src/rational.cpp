#include "pcs/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

using Wide = __int128;
using UnsignedWide = unsigned __int128;

UnsignedWide wide_abs(Wide value) {
    return value < 0 ? static_cast<UnsignedWide>(-(value + 1)) + 1
                     : static_cast<UnsignedWide>(value);
}

UnsignedWide wide_gcd(UnsignedWide a, UnsignedWide b) {
    while (b != 0) {
        const UnsignedWide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long long narrow(Wide value) {
    if (value > std::numeric_limits<long long>::max() ||
        value < std::numeric_limits<long long>::min()) {
        throw std::overflow_error("rational arithmetic overflowed 64 bits");
    }
    return static_cast<long long>(value);
}

}  // namespace

Rational Rational::from_wide(Wide numerator, Wide denominator) {
    if (denominator == 0) throw InvalidInputError("rational with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    if (numerator == 0) return Rational(0);
    const UnsignedWide divisor = wide_gcd(wide_abs(numerator), wide_abs(denominator));
    numerator /= static_cast<Wide>(divisor);
    denominator /= static_cast<Wide>(divisor);
    Rational out;
    out.num_ = narrow(numerator);
    out.den_ = narrow(denominator);
    return out;
}

Rational::Rational(long long numerator, long long denominator)
    : Rational(from_wide(numerator, denominator)) {}

Rational& Rational::operator+=(const Rational& other) {
    *this = from_wide(static_cast<Wide>(num_) * other.den_ +
                          static_cast<Wide>(other.num_) * den_,
                      static_cast<Wide>(den_) * other.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& other) {
    *this = from_wide(static_cast<Wide>(num_) * other.den_ -
                          static_cast<Wide>(other.num_) * den_,
                      static_cast<Wide>(den_) * other.den_);
    return *this;
}

Rational& Rational::operator*=(const Rational& other) {
    *this = from_wide(static_cast<Wide>(num_) * other.num_,
                      static_cast<Wide>(den_) * other.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& other) {
    if (other.num_ == 0) throw InvalidInputError("division of rational by zero");
    *this = from_wide(static_cast<Wide>(num_) * other.den_,
                      static_cast<Wide>(den_) * other.num_);
    return *this;
}

Rational Rational::operator-() const {
    Rational out;
    out.num_ = -num_;
    out.den_ = den_;
    return out;
}

long long floor_rational(const Rational& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) {
        --q;  // integer division truncates toward zero
    }
    return q;
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

[[noreturn]] void bad_fraction(std::string_view text) {
    throw InvalidInputError("cannot parse fraction: '" + std::string(text) + "'");
}

long long checked_mul(long long a, long long b, std::string_view text) {
    long long out = 0;
    if (__builtin_mul_overflow(a, b, &out)) bad_fraction(text);
    return out;
}

long long checked_add(long long a, long long b, std::string_view text) {
    long long out = 0;
    if (__builtin_add_overflow(a, b, &out)) bad_fraction(text);
    return out;
}

long long parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) bad_fraction(whole);
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    if (i == s.size()) bad_fraction(whole);
    long long value = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) bad_fraction(whole);
        value = checked_mul(value, 10, whole);
        value = checked_add(value, s[i] - '0', whole);
    }
    return negative ? -value : value;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    long long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        exponent = parse_integer(s.substr(e + 1), whole);
        s = s.substr(0, e);
    }
    std::string digits;
    long long scale = 0;  // digits after the decimal point
    std::size_t i = 0;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        i = 1;
    }
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (seen_dot) bad_fraction(whole);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits.push_back(s[i]);
            seen_digit = true;
            if (seen_dot) ++scale;
        } else {
            bad_fraction(whole);
        }
    }
    if (!seen_digit) bad_fraction(whole);

    long long numerator = 0;
    for (char c : digits) {
        numerator = checked_mul(numerator, 10, whole);
        numerator = checked_add(numerator, c - '0', whole);
    }
    if (negative) numerator = -numerator;

    long long net = exponent - scale;  // value = digits * 10^net
    long long denominator = 1;
    while (net > 0) {
        numerator = checked_mul(numerator, 10, whole);
        --net;
    }
    while (net < 0) {
        denominator = checked_mul(denominator, 10, whole);
        ++net;
    }
    return Rational(numerator, denominator);
}

}  // namespace

Rational parse_fraction(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) bad_fraction(text);

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const long long num = parse_integer(s.substr(0, slash), text);
        const long long den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) bad_fraction(text);
        return Rational(num, den);
    }
    return parse_decimal(s, text);
}

}  // namespace pcs
