#ifndef FLPAA_RATIONAL_HPP
#define FLPAA_RATIONAL_HPP

#include <cstdint>
#include <numeric>

#include "flpaa/errors.hpp"

namespace flpaa {

// Exact rational arithmetic for the closed-form bound formulas.
// Magnitudes stay tiny (numerators bounded by a few times n <= 201), so
// int64 never overflows here.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (d == 0) fail(errc::domain, "rational with zero denominator");
        normalize();
    }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend Rational operator/(Rational a, Rational b) {
        if (b.num == 0) fail(errc::domain, "rational division by zero");
        return {a.num * b.den, a.den * b.num};
    }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.num * b.den <= b.num * a.den; }
};

}  // namespace flpaa

#endif
