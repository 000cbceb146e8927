#pragma once

#include <string>

namespace indram
{
    /// Positive magnitude M stored as `level` applications of exp2 to `value`:
    /// level 0 is M = value, level 1 is M = 2^value, level 2 is M = 2^(2^value).
    /// Normalized to the lowest level whose value fits a double comfortably.
    class TowerNumber
    {
    public:
        TowerNumber() = default;
        explicit TowerNumber(double m);
        TowerNumber(int level, double value);

        [[nodiscard]] auto level() const -> int { return _level; }
        [[nodiscard]] auto value() const -> double { return _value; }

        /// The magnitude itself when it fits a double, else +inf.
        [[nodiscard]] auto to_double() const -> double;
        /// log2 M as a tower one level lower.
        [[nodiscard]] auto log2() const -> TowerNumber;
        [[nodiscard]] auto exp2() const -> TowerNumber;
        [[nodiscard]] auto times(double k) const -> TowerNumber;
        [[nodiscard]] auto plus(const TowerNumber & o) const -> TowerNumber;

        [[nodiscard]] auto less_than(const TowerNumber & o) const -> bool;

        /// "2^2^v"-style rendering.
        [[nodiscard]] auto to_string() const -> std::string;

    private:
        auto normalize() -> void;

        int _level = 0;
        double _value = 0;
    };
}
