#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace uedalab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact complex number with rational real and imaginary parts.
/// Division is exact (multiply by the conjugate, divide by the norm).
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long long r) : re(r), im(0) {}
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    Rational norm() const { return re * re + im * im; }
    GaussianRational conj() const { return {re, -im}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    GaussianRational operator-() const { return {-re, -im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n = b.norm();
        if (n == 0) throw std::domain_error("GaussianRational: division by zero");
        GaussianRational p = a * b.conj();
        return {p.re / n, p.im / n};
    }
    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
    GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

template <class C>
struct scalar_traits;

template <>
struct scalar_traits<std::complex<double>> {
    static constexpr bool exact = false;
    using value_type = std::complex<double>;
    static value_type zero() { return {0.0, 0.0}; }
    static value_type one() { return {1.0, 0.0}; }
    static value_type from_int(long long n) { return {static_cast<double>(n), 0.0}; }
    static double abs(const value_type& c) { return std::abs(c); }
    static bool is_zero(const value_type& c) { return c.real() == 0.0 && c.imag() == 0.0; }
    static value_type inverse(const value_type& c) {
        if (is_zero(c)) throw std::domain_error("inverse of zero");
        return 1.0 / c;
    }
    static std::complex<double> to_complex(const value_type& c) { return c; }
};

template <>
struct scalar_traits<GaussianRational> {
    static constexpr bool exact = true;
    using value_type = GaussianRational;
    static value_type zero() { return {}; }
    static value_type one() { return {1}; }
    static value_type from_int(long long n) { return {n}; }
    static double abs(const value_type& c) { return std::sqrt(static_cast<double>(c.norm())); }
    static bool is_zero(const value_type& c) { return c.re == 0 && c.im == 0; }
    static value_type inverse(const value_type& c) { return value_type{1} / c; }
    static std::complex<double> to_complex(const value_type& c) { return c.to_complex(); }
};

/// Integer power by repeated squaring; n may be negative.
template <class C>
C scalar_pow(C base, long long n) {
    using T = scalar_traits<C>;
    if (n < 0) {
        base = T::inverse(base);
        n = -n;
    }
    C acc = T::one();
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

/// Parses "p/q", integer, or plain decimal strings into an exact rational.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        neg = digits[0] == '-';
        digits = digits.substr(1);
    }
    if (digits.empty()) throw std::invalid_argument("bad decimal: " + s);
    // Accumulate digit by digit; a leading zero must not trigger octal parsing.
    BigInt num = 0;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw std::invalid_argument("bad decimal: " + s);
        num = num * 10 + (ch - '0');
    }
    BigInt den = 1;
    for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    Rational r(num, den);
    return neg ? -r : r;
}

}  // namespace uedalab
