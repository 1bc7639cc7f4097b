#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gappred {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. All arithmetic in the library goes through this
/// type; there is no floating-point fast path anywhere in the core, so value
/// comparisons and tie detection are always decided exactly.
///
/// Backed by boost::multiprecision::cpp_rational, which keeps the canonical
/// form (gcd(|num|, den) = 1, den > 0) after every operation.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(std::int64_t n) : q_(n) {}  // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d) : Rational(BigInt(n), BigInt(d)) {}
    Rational(BigInt n, BigInt d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        q_ = boost::multiprecision::cpp_rational(n, d);
    }
    explicit Rational(boost::multiprecision::cpp_rational q) : q_(std::move(q)) {}

    BigInt num() const { return boost::multiprecision::numerator(q_); }
    BigInt den() const { return boost::multiprecision::denominator(q_); }

    bool is_zero() const { return q_.is_zero(); }
    bool is_integer() const { return den() == 1; }
    int sign() const { return q_.sign(); }

    Rational operator-() const { return Rational(boost::multiprecision::cpp_rational(-q_)); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    /// Parses "p/q", "p", or a decimal like "1.9" / "-0.25", all exactly.
    static Rational parse(std::string_view s);

    /// Canonical text form: "p/q", or just "p" when the denominator is 1.
    /// parse(to_string(q)) == q for every Rational.
    std::string to_string() const;

    enum class DecimalRounding { Truncate, Down, Up };

    /// Decimal rendering with the given number of fraction digits. Down/Up
    /// round toward -inf/+inf, so a printed [lo, hi] pair still encloses
    /// the exact value. Display only; never used in computations.
    std::string to_decimal_string(int digits = 6, DecimalRounding mode = DecimalRounding::Truncate) const;

    double to_double_approx() const { return q_.convert_to<double>(); }

private:
    boost::multiprecision::cpp_rational q_;
};

inline Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

/// Largest integer <= n/d, correct for negative values too.
inline BigInt floor_div(const BigInt& n, const BigInt& d) {
    BigInt q = n / d, r = n % d;
    if (r != 0 && ((r < 0) != (d < 0))) --q;
    return q;
}

inline BigInt floor(const Rational& q) { return floor_div(q.num(), q.den()); }

inline Rational Rational_from_bigint(const BigInt& n) { return Rational(n, BigInt(1)); }

namespace detail {

// Decimal digit run -> BigInt. Avoids cpp_int's string constructor, which
// treats a leading zero as an octal prefix.
inline bool parse_digits(std::string_view s, BigInt& out) {
    if (s.empty()) return false;
    out = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    return true;
}

inline bool parse_signed_digits(std::string_view s, BigInt& out) {
    bool neg = !s.empty() && s[0] == '-';
    if (neg || (!s.empty() && s[0] == '+')) s = s.substr(1);
    if (!parse_digits(s, out)) return false;
    if (neg) out = -out;
    return true;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view s) {
    auto fail = [&] { throw std::invalid_argument("Rational::parse: bad input '" + std::string(s) + "'"); };
    if (s.empty()) fail();

    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        BigInt n, d;
        if (!detail::parse_signed_digits(s.substr(0, slash), n) ||
            !detail::parse_signed_digits(s.substr(slash + 1), d) || d == 0)
            fail();
        return Rational(n, d);
    }

    auto dot = s.find('.');
    if (dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        std::string_view mag = (neg || (!ip.empty() && ip[0] == '+')) ? ip.substr(1) : ip;
        BigInt whole = 0, frac = 0;
        if (!mag.empty() && !detail::parse_digits(mag, whole)) fail();
        if (!detail::parse_digits(fp, frac)) fail();
        BigInt scale = 1;
        for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
        BigInt n = whole * scale + frac;
        if (neg) n = -n;
        return Rational(n, scale);
    }

    BigInt n;
    if (!detail::parse_signed_digits(s, n)) fail();
    return Rational(n, BigInt(1));
}

inline std::string Rational::to_string() const {
    std::string out = num().str();
    if (den() != 1) {
        out += '/';
        out += den().str();
    }
    return out;
}

inline std::string Rational::to_decimal_string(int digits, DecimalRounding mode) const {
    BigInt scale = 1;
    for (int k = 0; k < digits; ++k) scale *= 10;
    BigInt scaled_num = num() * scale;
    BigInt q;
    switch (mode) {
        case DecimalRounding::Truncate: q = scaled_num / den(); break;
        case DecimalRounding::Down: q = floor_div(scaled_num, den()); break;
        case DecimalRounding::Up: q = -floor_div(-scaled_num, den()); break;
    }
    bool neg = q < 0;
    if (neg) q = -q;
    BigInt ip = q / scale, fp = q % scale;
    std::string out = neg ? "-" : "";
    out += ip.str();
    if (digits > 0) {
        std::string frac = fp.str();
        out += '.';
        out += std::string(static_cast<std::size_t>(digits) - frac.size(), '0');
        out += frac;
    }
    return out;
}

}  // namespace gappred
