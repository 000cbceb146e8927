#pragma once

// Independent oracles shared by the unit tests and the acceptance run.

#include <indram/cleaning.hpp>
#include <indram/tower_number.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <vector>

namespace oracle
{
    using Float = boost::multiprecision::cpp_bin_float_100;

    /// A magnitude M >= 1 held as log2 M in 100-digit floating point.
    struct LogMagnitude
    {
        Float log2m;
    };

    inline auto log2f(const Float & x) -> Float
    {
        return boost::multiprecision::log(x) / boost::multiprecision::log(Float(2));
    }

    inline auto sum(const LogMagnitude & a, const LogMagnitude & b) -> LogMagnitude
    {
        Float hi = std::max(a.log2m, b.log2m), lo = std::min(a.log2m, b.log2m);
        return {hi + log2f(1 + boost::multiprecision::pow(Float(2), lo - hi))};
    }

    /// Magnitude k * 2^m for a magnitude m.
    inline auto times_exp2(const Float & k, const LogMagnitude & m) -> LogMagnitude
    {
        return {log2f(k) + boost::multiprecision::pow(Float(2), m.log2m)};
    }

    inline auto from_value(const Float & v) -> LogMagnitude
    {
        return {log2f(v)};
    }

    struct Constants
    {
        Float c;
        std::vector<LogMagnitude> eps;   // -log2 eps_t (eps_0 is taken as 1 when eta = 1)
        std::vector<LogMagnitude> lambda;
        LogMagnitude product;
        std::vector<LogMagnitude> tower;
    };

    /// Recursion eps_0 = eta, lambda_t = (p/2q)^{13/eps_t}, eps_{t+1} = eps_t lambda_t, evaluated in log domain.
    /// Requires eta <= 1 so that every -log2 eps_t is a magnitude; eta = 1 starts from -log2 eps_0 = 0 (handled directly).
    inline auto constants(int q, int delta, const indram::Ratio & p, const indram::Ratio & eta) -> Constants
    {
        Constants out;
        Float pf = Float(p.num()) / p.den(), etaf = Float(eta.num()) / eta.den();
        out.c = log2f(2 * q / pf);
        Float neg_eps0 = -log2f(etaf);
        // lambda_0 = 13 c / eta, a plain value.
        out.eps.push_back({neg_eps0 > 0 ? log2f(neg_eps0) : Float(-1e9)});
        out.lambda.push_back(from_value(13 * out.c / etaf));
        for (int t = 1; t <= delta; ++t) {
            auto prev = out.eps.back().log2m < -1e8 ? out.lambda.back() : sum(out.eps.back(), out.lambda.back());
            out.eps.push_back(prev);
            out.lambda.push_back(times_exp2(13 * out.c, prev));
        }
        out.product = out.lambda.front();
        for (std::size_t t = 1; t < out.lambda.size(); ++t)
            out.product = sum(out.product, out.lambda[t]);
        out.tower.push_back(from_value(14 * out.c / etaf));
        for (int t = 1; t <= delta; ++t)
            out.tower.push_back(times_exp2(14 * out.c, out.tower.back()));
        return out;
    }

    inline auto representable(const LogMagnitude & m) -> bool
    {
        return boost::multiprecision::isfinite(m.log2m);
    }

    /// Relative error of a tower number against an oracle magnitude, compared at the tower's own level.
    inline auto relative_error(const indram::TowerNumber & t, const LogMagnitude & m) -> double
    {
        Float expect;
        if (t.level() == 0)
            expect = boost::multiprecision::pow(Float(2), m.log2m);
        else if (t.level() == 1)
            expect = m.log2m;
        else if (t.level() == 2)
            expect = log2f(m.log2m);
        else if (t.level() == 3)
            expect = log2f(log2f(m.log2m));
        else
            return 1;
        Float diff = (Float(t.value()) - expect) / expect;
        return static_cast<double>(boost::multiprecision::abs(diff));
    }
}
