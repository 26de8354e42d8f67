#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bmolab {

/// Exact rational on int64 with overflow-checked arithmetic.
///
/// Every measure in this project is a dyadic rational and every function
/// value is a decimal-string rational, so int64 numerators/denominators are
/// ample at desk scale. All intermediate products go through __int128 and
/// throw std::overflow_error instead of silently wrapping.
class Rational {
  public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(long long n) : num_(n), den_(1) {}
    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    static Rational pow2(int e);  // 2^e for e in [-62, 62]

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    Rational operator-() const { return Rational(unchecked{}, -num_, den_); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 l = i128(a.num_) * b.den_;
        __int128 r = i128(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less
                     : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// floor(x) as an integer.
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    long long ceil() const { return -((-*this).floor()); }

    /// "p/q", or plain "p" for integers; parseable by parse_rational.
    std::string to_fraction_string() const;

    /// Finite decimal string when den = 2^a*5^b, otherwise falls back to "p/q".
    std::string to_decimal_string() const;

  private:
    struct unchecked {};
    constexpr Rational(unchecked, long long n, long long d) : num_(n), den_(d) {}

    static __int128 i128(long long v) { return static_cast<__int128>(v); }

    static long long narrow(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rational: 64-bit overflow");
        return static_cast<long long>(v);
    }

    static Rational from_i128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        return Rational(unchecked{}, narrow(n), narrow(d));
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_;
    long long den_;
};

inline Rational Rational::pow2(int e) {
    if (e < -62 || e > 62) throw std::overflow_error("Rational::pow2 exponent out of range");
    if (e >= 0) return Rational(1LL << e);
    return Rational(1, 1LL << (-e));
}

/// Accepts "p", "p/q", and finite decimals like "-3.25".
Rational parse_rational(const std::string& text);

/// Element of the quadratic field Q(sqrt 2), kept exact so comparisons
/// against constants like sqrt(2)-1 and 2^-d(3-2 sqrt 2) never round.
class QuadReal {
  public:
    QuadReal() = default;
    QuadReal(Rational a) : a_(a) {}
    QuadReal(long long a) : a_(Rational(a)) {}
    QuadReal(Rational a, Rational b) : a_(a), b_(b) {}

    static QuadReal sqrt2() { return QuadReal(Rational(0), Rational(1)); }

    const Rational& rational_part() const { return a_; }
    const Rational& sqrt2_part() const { return b_; }
    bool is_rational() const { return b_.is_zero(); }

    QuadReal operator-() const { return QuadReal(-a_, -b_); }

    friend QuadReal operator+(const QuadReal& x, const QuadReal& y) {
        return QuadReal(x.a_ + y.a_, x.b_ + y.b_);
    }
    friend QuadReal operator-(const QuadReal& x, const QuadReal& y) { return x + (-y); }
    friend QuadReal operator*(const QuadReal& x, const QuadReal& y) {
        return QuadReal(x.a_ * y.a_ + Rational(2) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend QuadReal operator/(const QuadReal& x, const QuadReal& y) {
        // 1/(a+b*sqrt2) = (a-b*sqrt2)/(a^2-2b^2); the norm vanishes only at 0.
        Rational norm = y.a_ * y.a_ - Rational(2) * y.b_ * y.b_;
        if (norm.is_zero()) throw std::domain_error("QuadReal: division by zero");
        QuadReal conj(y.a_, -y.b_);
        QuadReal prod = x * conj;
        return QuadReal(prod.a_ / norm, prod.b_ / norm);
    }

    int sign() const {
        int sa = a_.sign(), sb = b_.sign();
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Opposite signs: compare a^2 with 2 b^2 (equality impossible, sqrt2 irrational).
        Rational a2 = a_ * a_, b22 = Rational(2) * b_ * b_;
        if (a2 == b22) throw std::logic_error("QuadReal: impossible norm tie");
        return a2 > b22 ? sa : sb;
    }

    friend bool operator==(const QuadReal& x, const QuadReal& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator<(const QuadReal& x, const QuadReal& y) { return (x - y).sign() < 0; }
    friend bool operator>(const QuadReal& x, const QuadReal& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const QuadReal& x, const QuadReal& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const QuadReal& x, const QuadReal& y) { return (x - y).sign() >= 0; }

    double to_double() const { return a_.to_double() + b_.to_double() * 1.41421356237309504880; }

    std::string to_string() const;

  private:
    Rational a_;
    Rational b_;
};

/// tau = sqrt(2) - 1, the pivot of the certified John-Stromberg pairs.
inline QuadReal tau_sqrt2_minus_1() { return QuadReal(Rational(-1), Rational(1)); }

/// 3 - 2*sqrt(2) = tau^2 at tau = sqrt(2)-1.
inline QuadReal three_minus_2sqrt2() { return QuadReal(Rational(3), Rational(-2)); }

/// Accepts "sqrt2-1" and "a+b*sqrt2" style forms plus anything parse_rational takes.
QuadReal parse_quadreal(const std::string& text);

}  // namespace bmolab
