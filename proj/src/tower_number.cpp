#include <indram/tower_number.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

namespace indram
{
    namespace
    {
        constexpr double promote_above = 0x1p1010;
        constexpr double demote_below = 1000.0;
    }

    TowerNumber::TowerNumber(double m) :
        _value(m)
    {
        normalize();
    }

    TowerNumber::TowerNumber(int level, double value) :
        _level(level),
        _value(value)
    {
        normalize();
    }

    auto TowerNumber::normalize() -> void
    {
        while (_level > 0 && _value < demote_below) {
            _value = std::exp2(_value);
            --_level;
        }
        while (_value > promote_above && std::isfinite(_value)) {
            _value = std::log2(_value);
            ++_level;
        }
    }

    auto TowerNumber::to_double() const -> double
    {
        return _level == 0 ? _value : std::numeric_limits<double>::infinity();
    }

    auto TowerNumber::log2() const -> TowerNumber
    {
        if (_level == 0)
            return TowerNumber(_value > 0 ? std::log2(_value) : -std::numeric_limits<double>::infinity());
        return TowerNumber(_level - 1, _value);
    }

    auto TowerNumber::exp2() const -> TowerNumber
    {
        return TowerNumber(_level + 1, _value);
    }

    auto TowerNumber::plus(const TowerNumber & o) const -> TowerNumber
    {
        if (_level == 0 && o._level == 0)
            return TowerNumber(_value + o._value);
        auto a = *this, b = o;
        if (a.less_than(b))
            std::swap(a, b);
        auto x = a.log2(), y = b.log2();
        if (x.level() > 0)
            return a; // b / a underflows
        double diff = y.to_double() - x.to_double();
        return TowerNumber(x.to_double() + std::log1p(std::exp2(diff)) / std::numbers::ln2).exp2();
    }

    auto TowerNumber::times(double k) const -> TowerNumber
    {
        if (_level == 0)
            return TowerNumber(_value * k);
        return log2().plus(TowerNumber(std::log2(k))).exp2();
    }

    auto TowerNumber::less_than(const TowerNumber & o) const -> bool
    {
        if (_level == 0 && o._level == 0)
            return _value < o._value;
        return log2().less_than(o.log2());
    }

    auto TowerNumber::to_string() const -> std::string
    {
        std::ostringstream out;
        out.precision(17);
        for (int i = 0; i < _level; ++i)
            out << "2^";
        out << _value;
        return out.str();
    }
}
