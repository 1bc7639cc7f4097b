#pragma once

#include <gappred/rational.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace gappred {

/// Exact quadratic irrational `a + b*sqrt(r)` with rational a, b and a
/// nonnegative integer radicand r. This is what the randomized mechanisms
/// use for their mixing probabilities (sqrt(2(gamma+1)), sqrt(12*gamma+13))
/// so that every guarantee inequality can be decided by an exact sign test
/// instead of floating point.
///
/// Canonical form: square factors of r are extracted into b; if r becomes a
/// perfect square the whole value collapses to a rational (b = 0, r = 0).
/// Numbers over a common radicand form a field, so +, -, *, / are closed;
/// combining two genuinely different radicands is a logic error and throws.
class Surd {
public:
    Surd() : a_(0), b_(0), r_(0) {}
    Surd(Rational rational) : a_(std::move(rational)), b_(0), r_(0) {}  // NOLINT: implicit by design
    Surd(std::int64_t n) : a_(n), b_(0), r_(0) {}                       // NOLINT: implicit by design

    Surd(Rational a, Rational b, BigInt r) : a_(std::move(a)), b_(std::move(b)), r_(std::move(r)) {
        if (r_ < 0) throw std::domain_error("Surd: negative radicand");
        normalize();
    }

    /// Exact square root of a nonnegative rational: sqrt(n/d) = sqrt(n*d)/d.
    static Surd sqrt_of(const Rational& q) {
        if (q.sign() < 0) throw std::domain_error("Surd: sqrt of negative rational");
        if (q.is_zero()) return Surd();
        return Surd(Rational(0), Rational(1, q.den()), q.num() * q.den());
    }

    const Rational& rational_part() const { return a_; }
    const Rational& surd_coeff() const { return b_; }
    const BigInt& radicand() const { return r_; }

    bool is_rational() const { return b_.is_zero(); }

    /// The exact rational value; throws when the number is irrational.
    const Rational& as_rational() const {
        if (!is_rational()) throw std::logic_error("Surd: irrational value where rational expected");
        return a_;
    }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

    /// Exact sign in {-1, 0, +1}, decided algebraically: for mixed signs of
    /// a and b, compare a^2 against b^2 * r.
    int sign() const {
        if (b_.is_zero()) return a_.sign();
        if (a_.is_zero()) return b_.sign();
        int sa = a_.sign(), sb = b_.sign();
        if (sa == sb) return sa;
        Rational lhs = a_ * a_, rhs = b_ * b_ * Rational_from_bigint(r_);
        if (lhs == rhs) return 0;
        // |a| vs |b|*sqrt(r): the larger magnitude decides.
        return (lhs > rhs) ? sa : sb;
    }

    Surd operator-() const { return Surd(-a_, -b_, r_); }

    friend Surd operator+(const Surd& x, const Surd& y) {
        BigInt r = common_radicand(x, y);
        return Surd(x.a_ + y.a_, x.b_ + y.b_, r);
    }
    friend Surd operator-(const Surd& x, const Surd& y) { return x + (-y); }

    friend Surd operator*(const Surd& x, const Surd& y) {
        BigInt r = common_radicand(x, y);
        Rational a = x.a_ * y.a_ + x.b_ * y.b_ * Rational_from_bigint(r);
        Rational b = x.a_ * y.b_ + x.b_ * y.a_;
        return Surd(a, b, r);
    }

    friend Surd operator/(const Surd& x, const Surd& y) {
        if (y.is_zero()) throw std::domain_error("Surd: division by zero");
        BigInt r = common_radicand(x, y);
        // Multiply by the conjugate; a^2 - b^2 r is nonzero for y != 0.
        Rational denom = y.a_ * y.a_ - y.b_ * y.b_ * Rational_from_bigint(r);
        Surd num = x * Surd(y.a_, -y.b_, r);
        return Surd(num.a_ / denom, num.b_ / denom, r);
    }

    friend bool operator==(const Surd& x, const Surd& y) { return (x - y).is_zero(); }
    friend bool operator!=(const Surd& x, const Surd& y) { return !(x == y); }
    friend bool operator<(const Surd& x, const Surd& y) { return (x - y).sign() < 0; }
    friend bool operator<=(const Surd& x, const Surd& y) { return (x - y).sign() <= 0; }
    friend bool operator>(const Surd& x, const Surd& y) { return (x - y).sign() > 0; }
    friend bool operator>=(const Surd& x, const Surd& y) { return (x - y).sign() >= 0; }

    /// Certified rational enclosure [lo, hi] with hi - lo <= width.
    std::pair<Rational, Rational> enclosure(const Rational& width) const {
        if (width.sign() <= 0) throw std::domain_error("Surd: enclosure width must be positive");
        if (is_rational()) return {a_, a_};
        // Refine sqrt(r) via integer square roots of r * 4^k until the
        // scaled uncertainty |b| / 2^k drops below the requested width.
        BigInt two_k = 1;
        Rational absb = abs(b_);
        while (absb > width * Rational_from_bigint(two_k)) two_k <<= 1;
        BigInt scaled = r_ * two_k * two_k;
        BigInt s = boost::multiprecision::sqrt(scaled);
        Rational lo_root(s, two_k), hi_root(s + 1, two_k);
        Rational lo = a_ + b_ * (b_.sign() > 0 ? lo_root : hi_root);
        Rational hi = a_ + b_ * (b_.sign() > 0 ? hi_root : lo_root);
        return {lo, hi};
    }

    std::string to_string() const {
        if (is_rational()) return a_.to_string();
        std::string out;
        if (!a_.is_zero()) out = a_.to_string() + (b_.sign() > 0 ? " + " : " - ");
        else if (b_.sign() < 0) out = "-";
        Rational ab = abs(b_);
        if (ab != Rational(1)) out += ab.to_string() + "*";
        out += "sqrt(" + r_.str() + ")";
        return out;
    }

    double to_double_approx() const {
        auto [lo, hi] = enclosure(Rational(1, 1000000000));
        return ((lo + hi) / Rational(2)).to_double_approx();
    }

private:
    void normalize() {
        if (b_.is_zero()) { r_ = 0; return; }
        if (r_ == 0) { b_ = Rational(0); return; }
        // Pull out small square factors, then fold if a perfect square remains.
        for (BigInt p = 2; p <= 1000 && p * p <= r_; ++p) {
            BigInt p2 = p * p;
            while (r_ % p2 == 0) {
                r_ /= p2;
                b_ *= Rational_from_bigint(p);
            }
        }
        BigInt s = boost::multiprecision::sqrt(r_);
        if (s * s == r_) {
            a_ += b_ * Rational_from_bigint(s);
            b_ = Rational(0);
            r_ = 0;
        }
    }

    static BigInt common_radicand(const Surd& x, const Surd& y) {
        if (x.b_.is_zero()) return y.r_;
        if (y.b_.is_zero()) return x.r_;
        if (x.r_ != y.r_)
            throw std::logic_error("Surd: mixing radicands " + x.r_.str() + " and " + y.r_.str());
        return x.r_;
    }

    Rational a_, b_;
    BigInt r_;
};

}  // namespace gappred
