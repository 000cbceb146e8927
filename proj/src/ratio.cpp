#include <indram/errors.hpp>
#include <indram/ratio.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <charconv>
#include <limits>
#include <numeric>
#include <system_error>

namespace indram
{
    namespace
    {
        using Wide = __int128;

        auto checked_narrow(Wide v) -> std::int64_t
        {
            if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
                throw InvalidInput("rational overflow");
            return static_cast<std::int64_t>(v);
        }

        auto make(Wide num, Wide den) -> Ratio
        {
            if (den == 0)
                throw InvalidInput("rational with zero denominator");
            if (den < 0) {
                num = -num;
                den = -den;
            }
            Wide a = num < 0 ? -num : num, b = den;
            while (b != 0) {
                Wide t = a % b;
                a = b;
                b = t;
            }
            if (a > 1) {
                num /= a;
                den /= a;
            }
            return Ratio(checked_narrow(num), checked_narrow(den));
        }
    }

    Ratio::Ratio(std::int64_t num, std::int64_t den)
    {
        if (den == 0)
            throw InvalidInput("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        auto g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        _num = num;
        _den = den;
    }

    auto Ratio::to_string() const -> std::string
    {
        if (_den == 1)
            return std::to_string(_num);
        return std::to_string(_num) + "/" + std::to_string(_den);
    }

    auto Ratio::floor() const -> std::int64_t
    {
        auto q = _num / _den;
        if (_num % _den != 0 && _num < 0)
            --q;
        return q;
    }

    auto Ratio::ceil() const -> std::int64_t
    {
        auto q = _num / _den;
        if (_num % _den != 0 && _num > 0)
            ++q;
        return q;
    }

    auto Ratio::parse(std::string_view text) -> Ratio
    {
        if (text.empty())
            throw InvalidInput("empty rational");

        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            std::int64_t n = 0, d = 0;
            auto a = text.substr(0, slash), b = text.substr(slash + 1);
            auto r1 = std::from_chars(a.data(), a.data() + a.size(), n);
            auto r2 = std::from_chars(b.data(), b.data() + b.size(), d);
            if (r1.ec != std::errc{} || r1.ptr != a.data() + a.size() || r2.ec != std::errc{} || r2.ptr != b.data() + b.size())
                throw InvalidInput("malformed rational '" + std::string(text) + "'");
            return Ratio(n, d);
        }

        // decimal with optional exponent
        std::size_t i = 0;
        bool negative = false;
        if (text[i] == '+' || text[i] == '-') {
            negative = text[i] == '-';
            ++i;
        }
        Wide mantissa = 0;
        int scale = 0;
        bool any_digit = false, seen_point = false;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c >= '0' && c <= '9') {
                any_digit = true;
                mantissa = mantissa * 10 + (c - '0');
                if (seen_point)
                    ++scale;
                if (mantissa > Wide{std::numeric_limits<std::int64_t>::max()})
                    throw InvalidInput("rational '" + std::string(text) + "' has too many digits");
            }
            else if (c == '.' && ! seen_point)
                seen_point = true;
            else
                break;
        }
        if (! any_digit)
            throw InvalidInput("malformed rational '" + std::string(text) + "'");
        int exponent = 0;
        if (i < text.size()) {
            if (text[i] != 'e' && text[i] != 'E')
                throw InvalidInput("malformed rational '" + std::string(text) + "'");
            auto rest = text.substr(i + 1);
            if (! rest.empty() && rest[0] == '+')
                rest.remove_prefix(1);
            auto r = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
            if (r.ec != std::errc{} || r.ptr != rest.data() + rest.size())
                throw InvalidInput("malformed rational '" + std::string(text) + "'");
        }
        exponent -= scale;
        Wide num = negative ? -mantissa : mantissa, den = 1;
        for (; exponent > 0; --exponent) {
            num *= 10;
            checked_narrow(num);
        }
        for (; exponent < 0; ++exponent) {
            den *= 10;
            checked_narrow(den);
        }
        return make(num, den);
    }

    auto Ratio::from_double(double d) -> Ratio
    {
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof(buf), d);
        if (r.ec != std::errc{})
            throw InvalidInput("cannot render double");
        return parse(std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)));
    }

    auto Ratio::from_big(const BigRational & r) -> Ratio
    {
        BigInt n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
        if (boost::multiprecision::abs(n) > BigInt(std::numeric_limits<std::int64_t>::max())
            || d > BigInt(std::numeric_limits<std::int64_t>::max()))
            throw InvalidInput("rational does not fit 64 bits");
        return Ratio(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }

    auto operator+(const Ratio & a, const Ratio & b) -> Ratio
    {
        return make(Wide{a.num()} * b.den() + Wide{b.num()} * a.den(), Wide{a.den()} * b.den());
    }

    auto operator-(const Ratio & a, const Ratio & b) -> Ratio
    {
        return make(Wide{a.num()} * b.den() - Wide{b.num()} * a.den(), Wide{a.den()} * b.den());
    }

    auto operator*(const Ratio & a, const Ratio & b) -> Ratio
    {
        return make(Wide{a.num()} * b.num(), Wide{a.den()} * b.den());
    }

    auto operator/(const Ratio & a, const Ratio & b) -> Ratio
    {
        return make(Wide{a.num()} * b.den(), Wide{a.den()} * b.num());
    }

    auto operator<=>(const Ratio & a, const Ratio & b) -> std::strong_ordering
    {
        Wide l = Wide{a.num()} * b.den(), r = Wide{b.num()} * a.den();
        if (l < r)
            return std::strong_ordering::less;
        if (l > r)
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    auto times_lt(std::int64_t value, const Ratio & r, std::int64_t k) -> bool
    {
        return Wide{value} * r.num() < Wide{k} * r.den();
    }

    auto pow(const BigRational & base, int exponent) -> BigRational
    {
        if (exponent < 0)
            return BigRational(1) / pow(base, -exponent);
        BigRational result(1), b = base;
        while (exponent) {
            if (exponent & 1)
                result *= b;
            b *= b;
            exponent >>= 1;
        }
        return result;
    }

    auto to_double(const BigRational & r) -> double
    {
        using Float = boost::multiprecision::cpp_bin_float_50;
        Float n(boost::multiprecision::numerator(r)), d(boost::multiprecision::denominator(r));
        return static_cast<double>(n / d);
    }

    auto big_to_string(const BigRational & r) -> std::string
    {
        auto d = boost::multiprecision::denominator(r);
        if (d == 1)
            return boost::multiprecision::numerator(r).str();
        return boost::multiprecision::numerator(r).str() + "/" + d.str();
    }
}
