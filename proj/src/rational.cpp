#include "bmolab/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "bmolab/errors.hpp"

namespace bmolab {

std::string Rational::to_fraction_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_decimal_string() const {
    long long d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return to_fraction_string();

    // Scale to denominator 10^k with k = max(twos, fives).
    int k = twos > fives ? twos : fives;
    __int128 scaled = static_cast<__int128>(num_ < 0 ? -num_ : num_);
    for (int i = 0; i < twos - fives; ++i) scaled *= 5;
    for (int i = 0; i < fives - twos; ++i) scaled *= 2;

    std::string digits;
    if (scaled == 0) digits = "0";
    while (scaled > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
        scaled /= 10;
    }
    while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');

    std::string out;
    if (num_ < 0) out += '-';
    out += digits.substr(0, digits.size() - k);
    if (k > 0) {
        out += '.';
        out += digits.substr(digits.size() - k);
    }
    return out;
}

namespace {

long long parse_ll(const std::string& s, size_t begin, size_t end) {
    if (begin >= end) throw ParseError("empty integer in rational literal");
    errno = 0;
    char* stop = nullptr;
    std::string part = s.substr(begin, end - begin);
    long long v = std::strtoll(part.c_str(), &stop, 10);
    if (errno != 0 || stop == part.c_str() || *stop != '\0')
        throw ParseError("bad integer '" + part + "'");
    return v;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational literal");

    size_t slash = s.find('/');
    if (slash != std::string::npos) {
        long long n = parse_ll(s, 0, slash);
        long long d = parse_ll(s, slash + 1, s.size());
        if (d == 0) throw ParseError("zero denominator in '" + raw + "'");
        return Rational(n, d);
    }

    size_t dot = s.find('.');
    if (dot == std::string::npos) return Rational(parse_ll(s, 0, s.size()));

    bool neg = false;
    size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') { neg = s[0] == '-'; pos = 1; }
    std::string whole = s.substr(pos, dot - pos);
    std::string frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ParseError("bad decimal '" + raw + "'");
    for (char c : whole + frac)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad decimal '" + raw + "'");
    if (frac.size() > 18) throw ParseError("decimal '" + raw + "' has too many digits");

    __int128 num = 0;
    for (char c : whole) num = num * 10 + (c - '0');
    long long den = 1;
    for (char c : frac) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    if (num > INT64_MAX) throw ParseError("decimal '" + raw + "' out of range");
    long long n = static_cast<long long>(num);
    return Rational(neg ? -n : n, den);
}

std::string QuadReal::to_string() const {
    if (is_rational()) return a_.to_fraction_string();
    std::string out = a_.is_zero() ? "" : a_.to_fraction_string();
    if (!out.empty() && b_.sign() > 0) out += "+";
    if (b_ == Rational(1)) out += "sqrt2";
    else if (b_ == Rational(-1)) out += "-sqrt2";
    else out += b_.to_fraction_string() + "*sqrt2";
    return out;
}

QuadReal parse_quadreal(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s == "sqrt2-1" || s == "-1+sqrt2") return tau_sqrt2_minus_1();
    if (s == "sqrt2") return QuadReal::sqrt2();
    if (s == "3-2sqrt2" || s == "3-2*sqrt2") return three_minus_2sqrt2();
    return QuadReal(parse_rational(s));
}

}  // namespace bmolab
