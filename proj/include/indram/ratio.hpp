#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace indram
{
    using BigInt = boost::multiprecision::cpp_int;
    using BigRational = boost::multiprecision::cpp_rational;

    /// Exact non-big rational used for densities and thresholds. Always normalized, den > 0.
    class Ratio
    {
    public:
        constexpr Ratio() = default;
        Ratio(std::int64_t num, std::int64_t den = 1);

        [[nodiscard]] auto num() const -> std::int64_t { return _num; }
        [[nodiscard]] auto den() const -> std::int64_t { return _den; }

        [[nodiscard]] auto to_double() const -> double { return static_cast<double>(_num) / static_cast<double>(_den); }
        [[nodiscard]] auto to_big() const -> BigRational { return BigRational(BigInt(_num), BigInt(_den)); }
        [[nodiscard]] auto to_string() const -> std::string;

        /// Smallest integer >= value.
        [[nodiscard]] auto ceil() const -> std::int64_t;
        /// Largest integer <= value.
        [[nodiscard]] auto floor() const -> std::int64_t;

        /// Accepts "3", "-2", "4/5", "0.8", "1e-2", "2.5e1".
        static auto parse(std::string_view text) -> Ratio;
        /// Shortest decimal rendering of d, then parsed exactly (0.8 -> 4/5).
        static auto from_double(double d) -> Ratio;
        /// Exact conversion; throws if numerator or denominator exceeds 64 bits.
        static auto from_big(const BigRational & r) -> Ratio;

        friend auto operator+(const Ratio & a, const Ratio & b) -> Ratio;
        friend auto operator-(const Ratio & a, const Ratio & b) -> Ratio;
        friend auto operator*(const Ratio & a, const Ratio & b) -> Ratio;
        friend auto operator/(const Ratio & a, const Ratio & b) -> Ratio;
        friend auto operator<=>(const Ratio & a, const Ratio & b) -> std::strong_ordering;
        friend auto operator==(const Ratio & a, const Ratio & b) -> bool { return a._num == b._num && a._den == b._den; }

    private:
        std::int64_t _num = 0;
        std::int64_t _den = 1;
    };

    /// n * r compared against an integer: is (value * r) < k, etc. Done with 128-bit products.
    [[nodiscard]] auto times_lt(std::int64_t value, const Ratio & r, std::int64_t k) -> bool;

    [[nodiscard]] auto pow(const BigRational & base, int exponent) -> BigRational;
    [[nodiscard]] auto to_double(const BigRational & r) -> double;
    [[nodiscard]] auto big_to_string(const BigRational & r) -> std::string;
}
