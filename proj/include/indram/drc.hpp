#pragma once

#include <indram/graph.hpp>
#include <indram/ratio.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace indram
{
    /// Rows of the block are X, columns are Y.
    struct DrcSample
    {
        std::vector<int> picked; ///< h row indices, with repetition
        VertexSet common;        ///< columns adjacent to every picked row
    };

    [[nodiscard]] auto drc_sample(const Biadjacency & block, int h, std::uint64_t seed) -> DrcSample;

    /// Cap on |X|^h for the exhaustive tuple count.
    inline constexpr std::int64_t drc_tuple_budget = 10'000'000;

    struct DrcBoundCheck
    {
        Ratio density;
        std::int64_t tuples = 0;
        std::int64_t good_tuples = 0;
        /// good_tuples / tuples.
        BigRational fraction;
        /// density^h / 2.
        BigRational bound;
        bool holds = false;
    };

    /// Exact fraction of h-tuples whose common neighborhood reaches (p^h/2)|Y| with p the block density.
    [[nodiscard]] auto drc_success_bound_check(const Biadjacency & block, int h) -> DrcBoundCheck;

    /// Cap on |union Y_i'|^r for the exhaustive bad-event check.
    inline constexpr std::int64_t drc_bad_budget = 1'000'000;

    struct SimDrcOptions
    {
        int max_attempts = 1000;
        /// Engineering floor: an attempt is good only if each Y_i' also has at least this many vertices.
        int min_subset_size = 1;
        /// Random r-tuples checked when the exhaustive bad-event check is over budget.
        std::int64_t spot_checks = 10'000;
    };

    struct SimDrcOutcome
    {
        std::vector<std::vector<int>> subsets; ///< Y_i' as column indices in Y_i order
        std::vector<int> picked;
        bool good_certified = false;
        bool bad_refuted = false;
        /// "exhaustive" or "sampled".
        std::string bad_check;
        int attempts_used = 0;
        /// p^{h l}/2 > |Y|^r |X|^{-h/2}; when false the outcome is outside the guaranteed regime.
        bool feasible = false;
        double log2_feasibility_lhs = 0;
        double log2_feasibility_rhs = 0;
        /// Smallest |N(y_1) ∩ ... ∩ N(y_r)| seen over the checked tuples.
        std::int64_t min_common = 0;
    };

    /// Checks |N(x) ∩ Y_i| >= p|Y_i| for all x, i; throws PreconditionFailed listing the violations.
    auto check_min_degree(const Biadjacency & block, const std::vector<std::vector<int>> & subsets, const Ratio & p) -> void;

    /// prod_i |N(x) ∩ Y_i| >= p^l prod_i |Y_i| for every row x, evaluated factored.
    [[nodiscard]] auto product_degree_holds(const Biadjacency & block, const std::vector<std::vector<int>> & subsets, const Ratio & p)
        -> bool;

    /// Minimum over r-tuples (with repetition) from `ys` of the common row neighborhood size;
    /// exhaustive when |ys|^r fits the budget, else spot-checked. Returns {min, exhaustive?}.
    [[nodiscard]] auto min_common_neighborhood(const std::vector<VertexSet> & column_rows, const std::vector<int> & ys, int r,
        std::int64_t budget, std::int64_t spot_checks, std::uint64_t seed) -> std::pair<std::int64_t, bool>;

    /// Attempt k samples with derive_seed(seed, k); returns the first attempt that is good and refutes the bad event.
    /// Throws AttemptsExhausted otherwise.
    [[nodiscard]] auto simultaneous_drc(const Biadjacency & block, const std::vector<std::vector<int>> & subsets, int h, int r,
        const Ratio & p, std::uint64_t seed, const SimDrcOptions & options = {}) -> SimDrcOutcome;
}
