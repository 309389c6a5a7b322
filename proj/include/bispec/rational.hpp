#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace bispec {

/// Exact rational number over 64-bit integers.
///
/// Always normalized: gcd(num, den) = 1 and den > 0. Arithmetic runs through
/// 128-bit intermediates and throws std::overflow_error if a reduced result
/// does not fit back into 64 bits.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value), den_(1) {} // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const noexcept
    {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }
    std::string to_string() const;

    bool is_zero() const noexcept { return num_ == 0; }

    /// Closest fraction to `x` with denominator at most `max_den`
    /// (continued-fraction convergents and semiconvergents).
    static Rational approximate(double x, std::int64_t max_den);

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// True iff `r <= bound` with the comparison done in extended precision.
bool at_most(const Rational& r, double bound) noexcept;

} // namespace bispec
