#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace urysohn {

/// Exact rational number in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long num) : value_(num) {}
    Rational(long num, long den);
    explicit Rational(mpq_class value);

    /// Parses "p", "p/q", "-p/q" or a finite decimal such as "1.25".
    static std::optional<Rational> parse(std::string_view text);
    /// Like parse() but throws std::invalid_argument on malformed input.
    static Rational from_string(std::string_view text);

    std::string str() const;
    const mpq_class& raw() const { return value_; }

    bool is_integer() const;
    bool is_zero() const { return sgn(value_) == 0; }
    bool is_negative() const { return sgn(value_) < 0; }
    /// Largest integer n with n <= *this.
    Rational floor() const;
    Rational ceil() const;
    /// floor() as a machine integer.
    long to_long() const;

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    std::size_t hash() const;

private:
    mpq_class value_;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace urysohn

template <>
struct std::hash<urysohn::Rational> {
    std::size_t operator()(const urysohn::Rational& r) const noexcept { return r.hash(); }
};
