#include "bispec/rational.hpp"

#include "bispec/error.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bispec {

namespace {

__int128 wide_abs(__int128 v) { return v < 0 ? -v : v; }

__int128 wide_gcd(__int128 a, __int128 b)
{
    a = wide_abs(a);
    b = wide_abs(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v)
{
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den)
{
    if (den == 0) throw std::domain_error("rational division by zero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
    if (!fits64(num) || !fits64(den)) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational operator+(const Rational& a, const Rational& b)
{
    return Rational::from_wide(
        static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b)
{
    // cross-reduce first so products of large reduced operands stay in range
    __int128 g1 = wide_gcd(a.num_, b.den_);
    __int128 g2 = wide_gcd(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational::from_wide(
        (a.num_ / g1) * (b.num_ / g2),
        (a.den_ / g2) * (b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b)
{
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * Rational::from_wide(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept
{
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
}

std::string Rational::to_string() const
{
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::approximate(double x, std::int64_t max_den)
{
    if (!std::isfinite(x)) throw InvalidArgument("cannot approximate a non-finite value");
    if (max_den < 1) throw InvalidArgument("max_den must be positive");
    const bool negative = x < 0;
    long double v = std::fabs(static_cast<long double>(x));

    // convergents h/k of the continued fraction of v
    __int128 h_prev = 1, h = static_cast<__int128>(std::floor(v));
    __int128 k_prev = 0, k = 1;
    long double frac = v - std::floor(v);
    Rational best = from_wide(h, k);
    while (frac > 1e-30L) {
        long double inv = 1.0L / frac;
        auto a = static_cast<__int128>(std::floor(inv));
        frac = inv - std::floor(inv);
        __int128 h_next = a * h + h_prev;
        __int128 k_next = a * k + k_prev;
        if (k_next > max_den) {
            // best semiconvergent that still respects the bound
            __int128 t = (max_den - k_prev) / k;
            if (t > 0) {
                Rational semi = from_wide(t * h + h_prev, t * k + k_prev);
                if (std::fabs(semi.to_long_double() - v) < std::fabs(best.to_long_double() - v)) best = semi;
            }
            break;
        }
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        best = from_wide(h, k);
        if (std::fabs(best.to_long_double() - v) == 0.0L) break;
    }
    return negative ? -best : best;
}

bool at_most(const Rational& r, double bound) noexcept
{
    return static_cast<long double>(r.num()) <= static_cast<long double>(bound) * static_cast<long double>(r.den());
}

} // namespace bispec
