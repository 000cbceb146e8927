#include <indram/errors.hpp>
#include <indram/regularity.hpp>
#include <indram/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace indram
{
    auto validate(const RegularityParams & params) -> void
    {
        if (params.L.num() <= 0)
            throw InvalidInput("regularity threshold L must be positive, got " + params.L.to_string());
        if (params.p.num() <= 0 || params.p > Ratio(1))
            throw InvalidInput("density parameter p must lie in (0,1], got " + params.p.to_string());
    }

    auto to_string(VerdictStatus s) -> std::string
    {
        switch (s) {
        case VerdictStatus::certified: return "certified-regular";
        case VerdictStatus::refuted: return "refuted";
        case VerdictStatus::inconclusive: return "inconclusive";
        }
        return "inconclusive";
    }

    auto to_string(RegularityMode m) -> std::string
    {
        return m == RegularityMode::two_sided ? "two-sided" : "lower-only";
    }

    auto block_density(const Biadjacency & block) -> Ratio
    {
        if (block.rows == 0 || block.cols == 0)
            throw InvalidInput("density of a pair with an empty side");
        return Ratio(block.edge_count(), static_cast<std::int64_t>(block.rows) * block.cols);
    }

    auto pair_density(const BipartitePair & pair) -> Ratio
    {
        return block_density(pair.biadjacency());
    }

    auto is_bad_degree(int d, int m, const RegularityParams & params) -> bool
    {
        const auto & p = params.p;
        if (static_cast<__int128>(2) * d * p.den() < static_cast<__int128>(p.num()) * m)
            return true;
        if (params.mode == RegularityMode::two_sided && static_cast<__int128>(d) * p.den() > static_cast<__int128>(2) * p.num() * m)
            return true;
        return false;
    }

    auto qualifies(int m, const Ratio & L) -> bool
    {
        return static_cast<__int128>(m) * L.den() >= L.num();
    }

    auto exceeds(int bad, const Ratio & L) -> bool
    {
        return static_cast<__int128>(bad) * L.den() > L.num();
    }

    namespace
    {
        auto bad_vertices(const std::vector<VertexSet> & opposite, const VertexSet & subset, const RegularityParams & params)
            -> std::vector<int>
        {
            int m = subset.count();
            std::vector<int> out;
            for (std::size_t y = 0; y < opposite.size(); ++y)
                if (is_bad_degree(opposite[y].intersection_count(subset), m, params))
                    out.push_back(static_cast<int>(y));
            return out;
        }

        /// rows of the side being subsetted, expressed as adjacency into the opposite side
        auto side_rows(const Biadjacency & block, int side) -> std::vector<VertexSet>
        {
            return side == 0 ? block.row : block.transpose().row;
        }

        /// Drop elements while the subset still qualifies and still refutes.
        auto shrink_witness(const std::vector<VertexSet> & opposite, int side_size, std::vector<int> subset,
            const RegularityParams & params) -> std::vector<int>
        {
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t i = 0; i < subset.size(); ++i) {
                    if (! qualifies(static_cast<int>(subset.size()) - 1, params.L) || subset.size() == 1)
                        return subset;
                    auto trial = subset;
                    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
                    auto bad = bad_vertices(opposite, VertexSet::from_members(side_size, trial), params);
                    if (exceeds(static_cast<int>(bad.size()), params.L)) {
                        subset = std::move(trial);
                        changed = true;
                        break;
                    }
                }
            }
            return subset;
        }

        auto make_witness(const Biadjacency & block, int side, std::vector<int> subset, const RegularityParams & params)
            -> RegularityWitness
        {
            int side_size = side == 0 ? block.rows : block.cols;
            auto opposite = side_rows(block, 1 - side);
            subset = shrink_witness(opposite, side_size, std::move(subset), params);
            auto bad = bad_vertices(opposite, VertexSet::from_members(side_size, subset), params);
            return {side, std::move(subset), std::move(bad)};
        }

        /// Needs checking at all: some subset qualifies and the other side can hold more than L bad vertices.
        auto side_relevant(int side_size, int other_size, const Ratio & L) -> bool
        {
            return qualifies(side_size, L) && exceeds(other_size, L) && side_size > 0;
        }

        auto smallest_qualifying(const Ratio & L) -> int
        {
            return static_cast<int>(std::max<std::int64_t>(1, L.ceil()));
        }

        enum class Uniform
        {
            none,
            empty,
            full
        };

        auto uniformity(const Biadjacency & block) -> Uniform
        {
            auto e = block.edge_count();
            if (e == 0)
                return Uniform::empty;
            if (e == static_cast<std::int64_t>(block.rows) * block.cols)
                return Uniform::full;
            return Uniform::none;
        }

        auto analytic_verdict(const Biadjacency & block, const RegularityParams & params, Uniform kind) -> RegularityVerdict
        {
            RegularityVerdict v;
            v.method = "analytic";
            v.params = params;
            v.status = VerdictStatus::certified;
            for (int side = 0; side < 2; ++side) {
                int size = side == 0 ? block.rows : block.cols;
                int other = side == 0 ? block.cols : block.rows;
                if (! side_relevant(size, other, params.L))
                    continue;
                for (int m = smallest_qualifying(params.L); m <= size; ++m) {
                    ++v.subsets_examined;
                    int d = kind == Uniform::full ? m : 0;
                    if (is_bad_degree(d, m, params)) {
                        std::vector<int> subset(static_cast<std::size_t>(m)), offending(static_cast<std::size_t>(other));
                        std::iota(subset.begin(), subset.end(), 0);
                        std::iota(offending.begin(), offending.end(), 0);
                        v.status = VerdictStatus::refuted;
                        v.witness = RegularityWitness{side, std::move(subset), std::move(offending)};
                        return v;
                    }
                }
            }
            return v;
        }

        /// Gray-code walk over all subsets of one side with incremental degree counts.
        auto exhaustive_side(const Biadjacency & block, int side, const RegularityParams & params, std::int64_t & examined)
            -> std::optional<std::vector<int>>
        {
            auto rows = side_rows(block, side);
            int n = static_cast<int>(rows.size());
            int other = side == 0 ? block.cols : block.rows;
            std::vector<std::vector<int>> nbrs(rows.size());
            for (int i = 0; i < n; ++i)
                nbrs[i] = rows[i].to_vector();

            std::vector<int> deg(static_cast<std::size_t>(other), 0);
            std::uint32_t subset = 0;
            int m = 0;
            std::uint64_t total = std::uint64_t{1} << n;
            for (std::uint64_t step = 1; step < total; ++step) {
                int bit = std::countr_zero(step);
                std::uint32_t mask = std::uint32_t{1} << bit;
                int delta = (subset & mask) ? -1 : 1;
                subset ^= mask;
                m += delta;
                for (int y : nbrs[bit])
                    deg[y] += delta;
                if (! qualifies(m, params.L))
                    continue;
                ++examined;
                int bad = 0;
                for (int y = 0; y < other; ++y)
                    if (is_bad_degree(deg[y], m, params))
                        ++bad;
                if (exceeds(bad, params.L)) {
                    std::vector<int> members;
                    for (int i = 0; i < n; ++i)
                        if (subset >> i & 1U)
                            members.push_back(i);
                    return members;
                }
            }
            return std::nullopt;
        }

        auto to_host(const BipartitePair & pair, RegularityWitness w) -> RegularityWitness
        {
            auto & a = w.side == 0 ? pair.x() : pair.y();
            auto & b = w.side == 0 ? pair.y() : pair.x();
            for (auto & v : w.subset)
                v = a[v];
            for (auto & v : w.offending)
                v = b[v];
            std::sort(w.subset.begin(), w.subset.end());
            std::sort(w.offending.begin(), w.offending.end());
            return w;
        }
    }

    auto check_regularity_exact(const Biadjacency & block, const RegularityParams & params) -> RegularityVerdict
    {
        validate(params);
        bool relevant0 = side_relevant(block.rows, block.cols, params.L);
        bool relevant1 = side_relevant(block.cols, block.rows, params.L);
        if (! relevant0 && ! relevant1)
            return {VerdictStatus::certified, std::nullopt, "vacuous", params, 0};

        auto kind = uniformity(block);
        if (kind != Uniform::none)
            return analytic_verdict(block, params, kind);

        if ((relevant0 && block.rows > exhaustive_cap) || (relevant1 && block.cols > exhaustive_cap))
            throw BudgetExceeded("exhaustive cap: regularity check enumerates sides of at most " + std::to_string(exhaustive_cap)
                + " vertices (got " + std::to_string(block.rows) + "x" + std::to_string(block.cols)
                + "); use refute_regularity_sampled instead");

        RegularityVerdict v;
        v.method = "exact";
        v.params = params;
        v.status = VerdictStatus::certified;
        for (int side = 0; side < 2; ++side) {
            if (! (side == 0 ? relevant0 : relevant1))
                continue;
            if (auto found = exhaustive_side(block, side, params, v.subsets_examined)) {
                v.status = VerdictStatus::refuted;
                v.witness = make_witness(block, side, std::move(*found), params);
                return v;
            }
        }
        return v;
    }

    auto check_regularity_exact(const BipartitePair & pair, const RegularityParams & params) -> RegularityVerdict
    {
        auto v = check_regularity_exact(pair.biadjacency(), params);
        if (v.witness)
            v.witness = to_host(pair, std::move(*v.witness));
        return v;
    }

    auto witness_is_valid(const Biadjacency & block, const RegularityParams & params, const RegularityWitness & w) -> bool
    {
        if (w.side != 0 && w.side != 1)
            return false;
        int size = w.side == 0 ? block.rows : block.cols;
        VertexSet subset(size);
        for (int v : w.subset) {
            if (v < 0 || v >= size || subset.test(v))
                return false;
            subset.set(v);
        }
        if (! qualifies(subset.count(), params.L) || subset.empty())
            return false;
        auto bad = bad_vertices(side_rows(block, 1 - w.side), subset, params);
        return exceeds(static_cast<int>(bad.size()), params.L) && bad == w.offending;
    }

    auto refute_regularity_sampled(const Biadjacency & block, const RegularityParams & params, std::int64_t trials,
        std::uint64_t seed) -> std::optional<RegularityWitness>
    {
        validate(params);
        std::vector<int> sides;
        if (side_relevant(block.rows, block.cols, params.L))
            sides.push_back(0);
        if (side_relevant(block.cols, block.rows, params.L))
            sides.push_back(1);
        if (sides.empty())
            return std::nullopt;

        std::vector<VertexSet> opposite[2] = {block.transpose().row, block.row};
        int min_m = smallest_qualifying(params.L);
        Rng rng(seed);
        std::vector<int> pool;
        for (std::int64_t trial = 0; trial < trials; ++trial) {
            int side = sides[rng.below(sides.size())];
            int size = side == 0 ? block.rows : block.cols;
            int m = min_m + static_cast<int>(rng.below(static_cast<std::uint64_t>(size - min_m + 1)));
            pool.resize(static_cast<std::size_t>(size));
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < m; ++i)
                std::swap(pool[i], pool[i + static_cast<int>(rng.below(static_cast<std::uint64_t>(size - i)))]);
            std::vector<int> subset(pool.begin(), pool.begin() + m);
            std::sort(subset.begin(), subset.end());
            auto bad = bad_vertices(opposite[side], VertexSet::from_members(size, subset), params);
            if (exceeds(static_cast<int>(bad.size()), params.L)) {
                RegularityWitness w{side, std::move(subset), std::move(bad)};
                if (! witness_is_valid(block, params, w))
                    throw InvariantViolation("sampled refuter produced a witness that fails the definition re-check");
                return w;
            }
        }
        return std::nullopt;
    }

    auto refute_regularity_sampled(const BipartitePair & pair, const RegularityParams & params, std::int64_t trials,
        std::uint64_t seed) -> std::optional<RegularityWitness>
    {
        auto w = refute_regularity_sampled(pair.biadjacency(), params, trials, seed);
        if (w)
            w = to_host(pair, std::move(*w));
        return w;
    }

    auto certify_block(const Biadjacency & block, const RegularityParams & params, std::int64_t sampled_trials,
        std::uint64_t seed) -> RegularityVerdict
    {
        try {
            return check_regularity_exact(block, params);
        }
        catch (const BudgetExceeded &) {
        }
        RegularityVerdict v;
        v.method = "sampled";
        v.params = params;
        v.subsets_examined = sampled_trials;
        if (auto w = refute_regularity_sampled(block, params, sampled_trials, seed)) {
            v.status = VerdictStatus::refuted;
            v.witness = std::move(w);
        }
        return v;
    }

    namespace
    {
        auto next_combination(std::vector<int> & c, int n) -> bool
        {
            int k = static_cast<int>(c.size());
            for (int i = k - 1; i >= 0; --i)
                if (c[i] < n - k + i) {
                    ++c[i];
                    for (int j = i + 1; j < k; ++j)
                        c[j] = c[j - 1] + 1;
                    return true;
                }
            return false;
        }

        auto binomial(int n, int k) -> double
        {
            if (k < 0 || k > n)
                return 0;
            double r = 1;
            for (int i = 1; i <= k; ++i)
                r = r * (n - k + i) / i;
            return r;
        }
    }

    auto density_condition_pairs(int n, int t) -> double
    {
        return binomial(n, t) * binomial(n - t, t);
    }

    auto check_density_condition(const Graph & g, int t, const Ratio & p, const Ratio & eps) -> DensityVerdict
    {
        int n = g.size();
        if (t < 1)
            throw InvalidInput("set size t must be at least 1");
        if (p.num() < 0 || p > Ratio(1) || eps.num() < 0)
            throw InvalidInput("need 0 <= p <= 1 and eps >= 0");
        if (density_condition_pairs(n, t) > static_cast<double>(density_condition_budget))
            throw BudgetExceeded("enumeration budget: C(n,t)C(n-t,t) = " + std::to_string(density_condition_pairs(n, t))
                + " exceeds " + std::to_string(density_condition_budget));

        DensityVerdict verdict;
        verdict.status = VerdictStatus::certified;
        if (2 * t > n)
            return verdict;

        const __int128 t2 = static_cast<__int128>(t) * t;
        const __int128 target = static_cast<__int128>(p.num()) * t2;
        const double expected = p.to_double() * static_cast<double>(t2);

        std::vector<int> xs(static_cast<std::size_t>(t));
        std::iota(xs.begin(), xs.end(), 0);
        do {
            VertexSet in_x = VertexSet::from_members(n, xs);
            std::vector<int> rest;
            for (int v = xs[0] + 1; v < n; ++v)
                if (! in_x.test(v))
                    rest.push_back(v);
            if (static_cast<int>(rest.size()) < t)
                continue;
            std::vector<int> pick(static_cast<std::size_t>(t));
            std::iota(pick.begin(), pick.end(), 0);
            do {
                std::vector<int> ys;
                ys.reserve(pick.size());
                for (int i : pick)
                    ys.push_back(rest[i]);
                auto in_y = VertexSet::from_members(n, ys);
                std::int64_t e = 0;
                for (int x : xs)
                    e += g.neighbors(x).intersection_count(in_y);
                ++verdict.pairs_checked;
                __int128 diff = static_cast<__int128>(e) * p.den() - target;
                if (diff < 0)
                    diff = -diff;
                if (expected > 0)
                    verdict.worst_deviation = std::max(verdict.worst_deviation, std::abs(static_cast<double>(e) - expected) / expected);
                if (diff * eps.den() > static_cast<__int128>(eps.num()) * target) {
                    verdict.status = VerdictStatus::refuted;
                    verdict.violating_pair = std::make_pair(xs, ys);
                    verdict.violating_edges = e;
                    return verdict;
                }
            } while (next_combination(pick, static_cast<int>(rest.size())));
        } while (next_combination(xs, n));
        return verdict;
    }
}
