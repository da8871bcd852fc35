#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace cde {

/// Exact fraction kept in lowest terms with a positive denominator.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);

    [[nodiscard]] std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] std::int64_t den() const noexcept { return den_; }
    [[nodiscard]] bool is_integer() const noexcept { return den_ == 1; }

    /// Smallest integer >= *this.
    [[nodiscard]] std::int64_t ceil() const noexcept;
    /// Largest integer <= *this.
    [[nodiscard]] std::int64_t floor() const noexcept;

    /// "7/3", or "2" for integers.
    [[nodiscard]] std::string str() const;

    /// Parses "a" or "a/b".
    static Rational parse(const std::string& text);

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace cde
