#include <indram/drc.hpp>
#include <indram/errors.hpp>
#include <indram/regularity.hpp>
#include <indram/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace indram
{
    auto drc_sample(const Biadjacency & block, int h, std::uint64_t seed) -> DrcSample
    {
        if (block.rows < 1)
            throw InvalidInput("dependent random choice needs |X| >= 1");
        if (h < 1)
            throw InvalidInput("sample size h must be at least 1");
        Rng rng(seed);
        DrcSample s;
        s.common = VertexSet(block.cols, true);
        for (int i = 0; i < h; ++i) {
            int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(block.rows)));
            s.picked.push_back(x);
            s.common &= block.row[x];
        }
        return s;
    }

    namespace
    {
        auto int_pow(std::int64_t base, int e) -> BigInt
        {
            BigInt r = 1;
            for (int i = 0; i < e; ++i)
                r *= base;
            return r;
        }

        /// Prefixes whose intersection is already too small contribute nothing.
        auto count_good(const Biadjacency & block, int depth, const VertexSet & common, std::int64_t need, std::int64_t & good) -> void
        {
            if (common.count() < need)
                return;
            if (depth == 0) {
                ++good;
                return;
            }
            for (int x = 0; x < block.rows; ++x)
                count_good(block, depth - 1, common & block.row[x], need, good);
        }
    }

    auto drc_success_bound_check(const Biadjacency & block, int h) -> DrcBoundCheck
    {
        if (block.rows < 1 || block.cols < 1)
            throw InvalidInput("dependent random choice needs non-empty sides");
        if (h < 1)
            throw InvalidInput("sample size h must be at least 1");
        if (std::pow(static_cast<double>(block.rows), h) > static_cast<double>(drc_tuple_budget))
            throw BudgetExceeded("exhaustive tuple budget: |X|^h = " + std::to_string(std::pow(block.rows, h)) + " exceeds "
                + std::to_string(drc_tuple_budget));

        DrcBoundCheck out;
        out.density = block_density(block);
        BigInt num_h = int_pow(out.density.num(), h);
        BigInt den_h = int_pow(out.density.den(), h);
        // smallest common size with 2 * size * den^h >= num^h * |Y|
        BigInt target = num_h * block.cols;
        BigInt twice_den = 2 * den_h;
        BigInt need_big = (target + twice_den - 1) / twice_den;
        auto need = static_cast<std::int64_t>(need_big);

        out.tuples = 1;
        for (int i = 0; i < h; ++i)
            out.tuples *= block.rows;
        count_good(block, h, VertexSet(block.cols, true), need, out.good_tuples);

        out.fraction = BigRational(BigInt(out.good_tuples), BigInt(out.tuples));
        out.bound = BigRational(num_h, den_h) / 2;
        out.holds = out.fraction >= out.bound;
        return out;
    }

    auto check_min_degree(const Biadjacency & block, const std::vector<std::vector<int>> & subsets, const Ratio & p) -> void
    {
        std::string violations;
        int count = 0;
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            auto yi = VertexSet::from_members(block.cols, subsets[i]);
            auto size = static_cast<std::int64_t>(subsets[i].size());
            for (int x = 0; x < block.rows; ++x) {
                std::int64_t d = block.row[x].intersection_count(yi);
                if (static_cast<__int128>(d) * p.den() < static_cast<__int128>(p.num()) * size) {
                    if (count < 20)
                        violations += " (x=" + std::to_string(x) + ", i=" + std::to_string(i) + ", d=" + std::to_string(d) + "/"
                            + std::to_string(size) + ")";
                    ++count;
                }
            }
        }
        if (count)
            throw PreconditionFailed("min-degree hypothesis |N(x) ∩ Y_i| >= p|Y_i| fails for " + std::to_string(count)
                + " pairs:" + violations);
    }

    auto product_degree_holds(const Biadjacency & block, const std::vector<std::vector<int>> & subsets, const Ratio & p) -> bool
    {
        auto l = static_cast<int>(subsets.size());
        BigInt prod_sizes = 1;
        for (auto & s : subsets)
            prod_sizes *= static_cast<std::int64_t>(s.size());
        BigRational rhs = pow(p.to_big(), l) * BigRational(prod_sizes);
        std::vector<VertexSet> sets;
        for (auto & s : subsets)
            sets.push_back(VertexSet::from_members(block.cols, s));
        for (int x = 0; x < block.rows; ++x) {
            BigInt prod = 1;
            for (auto & s : sets)
                prod *= block.row[x].intersection_count(s);
            if (BigRational(prod) < rhs)
                return false;
        }
        return true;
    }

    namespace
    {
        auto min_over_combos(const std::vector<VertexSet> & column_rows, const std::vector<int> & ys, std::size_t start, int left,
            const VertexSet & common, std::int64_t & best) -> void
        {
            if (left == 0) {
                best = std::min<std::int64_t>(best, common.count());
                return;
            }
            for (std::size_t i = start; i + static_cast<std::size_t>(left) <= ys.size(); ++i)
                min_over_combos(column_rows, ys, i + 1, left - 1, common & column_rows[ys[i]], best);
        }
    }

    auto min_common_neighborhood(const std::vector<VertexSet> & column_rows, const std::vector<int> & ys, int r,
        std::int64_t budget, std::int64_t spot_checks, std::uint64_t seed) -> std::pair<std::int64_t, bool>
    {
        int x_size = column_rows.empty() ? 0 : column_rows.front().universe();
        if (ys.empty() || r < 1)
            return {x_size, true};
        auto m = static_cast<double>(ys.size());
        if (std::pow(m, r) <= static_cast<double>(budget)) {
            // distinct members of a tuple form a set of size <= r; intersections only shrink, so sets of size min(r, m) suffice
            int k = std::min<int>(r, static_cast<int>(ys.size()));
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            min_over_combos(column_rows, ys, 0, k, VertexSet(x_size, true), best);
            return {best, true};
        }
        Rng rng(seed);
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t t = 0; t < spot_checks; ++t) {
            VertexSet common(x_size, true);
            for (int j = 0; j < r; ++j)
                common &= column_rows[ys[rng.below(ys.size())]];
            best = std::min<std::int64_t>(best, common.count());
        }
        return {best, false};
    }

    auto simultaneous_drc(const Biadjacency & block, const std::vector<std::vector<int>> & subsets, int h, int r, const Ratio & p,
        std::uint64_t seed, const SimDrcOptions & options) -> SimDrcOutcome
    {
        if (block.rows < 1)
            throw InvalidInput("simultaneous DRC needs |X| >= 1");
        if (h < 1 || r < 1)
            throw InvalidInput("h and r must be at least 1");
        if (p.num() <= 0 || p > Ratio(1))
            throw InvalidInput("p must lie in (0,1]");
        if (options.max_attempts < 1)
            throw InvalidInput("max_attempts must be at least 1");
        for (auto & s : subsets)
            for (int y : s)
                if (y < 0 || y >= block.cols)
                    throw InvalidInput("subset member " + std::to_string(y) + " outside Y");
        check_min_degree(block, subsets, p);

        auto l = static_cast<int>(subsets.size());
        SimDrcOutcome out;
        {
            BigRational lhs = pow(p.to_big(), 2 * h * l) * BigRational(int_pow(block.rows, h));
            BigRational rhs = BigRational(4 * int_pow(block.cols, 2 * r));
            out.feasible = lhs > rhs;
            out.log2_feasibility_lhs = h * l * std::log2(p.to_double()) - 1;
            out.log2_feasibility_rhs = r * std::log2(static_cast<double>(block.cols)) - 0.5 * h * std::log2(static_cast<double>(block.rows));
        }

        BigInt num_hl = int_pow(p.num(), h * l);
        BigInt den_hl = int_pow(p.den(), h * l);
        auto columns = block.transpose().row;

        for (int k = 0; k < options.max_attempts; ++k) {
            auto s = derive_seed(seed, static_cast<std::uint64_t>(k));
            auto sample = drc_sample(block, h, s);
            std::vector<std::vector<int>> trimmed(subsets.size());
            bool good = true;
            for (std::size_t i = 0; i < subsets.size(); ++i) {
                for (int y : subsets[i])
                    if (sample.common.test(y))
                        trimmed[i].push_back(y);
                auto kept = static_cast<std::int64_t>(trimmed[i].size());
                if (kept < options.min_subset_size || 2 * kept * den_hl < num_hl * static_cast<std::int64_t>(subsets[i].size()))
                    good = false;
            }
            if (! good)
                continue;
            std::vector<int> all;
            for (auto & t : trimmed)
                all.insert(all.end(), t.begin(), t.end());
            std::sort(all.begin(), all.end());
            all.erase(std::unique(all.begin(), all.end()), all.end());
            auto [min_common, exhaustive] = min_common_neighborhood(columns, all, r, drc_bad_budget, options.spot_checks, derive_seed(s, 1));
            if (min_common * min_common < block.rows)
                continue;
            out.subsets = std::move(trimmed);
            out.picked = std::move(sample.picked);
            out.good_certified = true;
            out.bad_refuted = true;
            out.bad_check = exhaustive ? "exhaustive" : "sampled";
            out.attempts_used = k + 1;
            out.min_common = min_common;
            return out;
        }
        throw AttemptsExhausted("attempts exhausted: simultaneous DRC found no good outcome in " + std::to_string(options.max_attempts)
            + " attempts (feasibility " + std::string(out.feasible ? "holds" : "fails") + ")");
    }
}
