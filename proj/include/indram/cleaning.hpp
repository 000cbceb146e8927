#pragma once

#include <indram/coloring.hpp>
#include <indram/drc.hpp>
#include <indram/graph.hpp>
#include <indram/ratio.hpp>
#include <indram/regularity.hpp>
#include <indram/tower_number.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indram
{
    /// Magnitudes are stored as M = -log2(value), so tiny constants stay representable.
    struct CleaningConstants
    {
        int q = 0;
        int delta = 0;
        Ratio p;
        Ratio eta;
        /// log2(2q/p).
        double c = 0;
        /// log2 of (p/2q)^{13/eta}.
        double log2_lambda_matching = 0;
        /// log2 of (1/2)(p/2q)^{12/eta}; never below log2_lambda_matching.
        double log2_lambda_matching_half = 0;
        /// -log2 eps_t and -log2 lambda_t for t = 0..delta.
        std::vector<TowerNumber> neg_log2_eps;
        std::vector<TowerNumber> neg_log2_lambda;
        /// -log2 of prod_{t <= delta} lambda_t.
        TowerNumber neg_log2_lambda_product;
        /// -log2 of the tower (p/2q)^{14/(p/2q)^{14/...^{14/eta}}} with delta+1 occurrences; level t is tower_levels[t].
        std::vector<TowerNumber> tower_levels;
        TowerNumber neg_log2_lambda_tower;
    };

    [[nodiscard]] auto cleaning_constants(int q, int delta, const Ratio & p, const Ratio & eta) -> CleaningConstants;

    /// Rows are `rows`, columns `cols` (host vertices); entry set iff the host edge exists (and has color c when c >= 0).
    [[nodiscard]] auto host_block(const Graph & host, const std::vector<int> & rows, const std::vector<int> & cols,
        const EdgeColoring * coloring = nullptr, int c = -1) -> Biadjacency;

    struct PairSearchOptions
    {
        /// Degree parameter of the certificate; defaults to half the block density.
        std::optional<Ratio> p;
        /// Absolute threshold; defaults to eps * min(target sizes).
        std::optional<Ratio> L;
        int random_attempts = 200;
        /// Exhaustive fallback when both sides are at most this large.
        int exhaustive_parts = 12;
        std::int64_t exhaustive_budget = 2'000'000;
        /// Accept a sampled non-refutation (inconclusive) when the sub-block exceeds the exact cap.
        bool accept_inconclusive = false;
        std::int64_t sampled_trials = 20'000;
    };

    struct PairSearchResult
    {
        std::vector<int> rows; ///< block row indices, sorted
        std::vector<int> cols; ///< block column indices, sorted
        RegularityVerdict verdict;
        /// "whole", "greedy", "random" or "exhaustive".
        std::string method;
        std::int64_t candidates_tried = 0;
        /// n' = (1/2) n p^{12/eps} with n the smaller side and p the block density.
        double paper_size = 0;
    };

    /// Sub-block of the requested size certified lower-regular. Throws AttemptsExhausted when the search fails.
    [[nodiscard]] auto find_lower_regular_pair(const Biadjacency & block, const Ratio & eps, int target_rows, int target_cols,
        std::uint64_t seed, const PairSearchOptions & options = {}) -> PairSearchResult;

    struct CommonNeighborhoodRecord
    {
        int a = 0;
        std::int64_t min_count = 0;
        /// Guaranteed lower bound, stored squared: min_count^2 * denominator >= numerator.
        std::int64_t bound_numerator = 0;
        std::int64_t bound_denominator = 1;
        bool exhaustive = false;
        bool holds = false;
    };

    struct EdgeCertificate
    {
        Edge edge;
        int color = 0;
        std::optional<RegularityVerdict> regularity;
        std::optional<CommonNeighborhoodRecord> common;

        [[nodiscard]] auto certified() const -> bool;
    };

    struct StageLog
    {
        std::string stage;
        int size = 0;
        std::vector<Edge> edges;
        /// -log2 of the stage's paper shrink factor (lambda_t, or delta for DRC stages), rendered as a tower.
        std::string neg_log2_paper_factor;
        std::vector<int> part_sizes;
    };

    struct CleaningOutcome
    {
        EdgeColoring aux_coloring;
        std::vector<std::vector<int>> trimmed_parts;
        std::vector<EdgeCertificate> certificates;
        std::vector<StageLog> shrink_log;
        /// Hypotheses of the statement that fail at this scale.
        std::vector<std::string> regime_flags;

        [[nodiscard]] auto in_regime() const -> bool { return regime_flags.empty(); }
        [[nodiscard]] auto certified() const -> bool;
    };

    struct MatchingCleanOptions
    {
        /// Size of every trimmed part after the stage.
        int target_size = 0;
        /// Lower-regularity threshold of the stage certificates.
        Ratio L{1};
        PairSearchOptions search;
    };

    /// Current parts are `parts` (host vertices). Selects the densest color per edge (ties to the lower index) and trims both ends.
    /// Throws PreconditionFailed when no color reaches density p/2q.
    [[nodiscard]] auto matching_clean(const std::vector<Edge> & matching, const Blowup & blowup,
        const std::vector<std::vector<int>> & parts, const EdgeColoring & coloring, const Ratio & p, int q, const Ratio & eta,
        std::uint64_t seed, const MatchingCleanOptions & options) -> CleaningOutcome;

    struct RegularityCleanOptions
    {
        /// Final part size; defaults to half the smallest part (rounded up).
        std::optional<int> s0;
        /// Explicit per-stage sizes, consumed in stage order; overrides the geometric schedule.
        std::vector<int> stage_sizes;
        bool accept_inconclusive_stages = true;
        /// Halve a stage's size when its search is exhausted (down to the floor) instead of failing.
        /// Final certificates then use eta times the final size.
        bool adaptive = true;
        int adaptive_floor = 2;
        PairSearchOptions search;
    };

    /// Stage order follows vizing_matchings from the back. Every final edge is certified (eta s0, p/4q)-lower-regular directly.
    [[nodiscard]] auto regularity_clean(const Blowup & blowup, const EdgeColoring & coloring, const Ratio & p, int q,
        const Ratio & eta, std::uint64_t seed, const RegularityCleanOptions & options = {}) -> CleaningOutcome;

    struct ColorSelection
    {
        std::vector<int> x_star; ///< sorted host vertices
        std::vector<int> colors;
        std::vector<int> low_degree_counts; ///< |X~_i|
        /// Some |X~_i| exceeds L, so the regularity hypothesis is refuted on this input.
        bool hypothesis_refuted = false;
    };

    /// Drops low-degree vertices, takes per-vertex majority colors and keeps the most common color tuple.
    [[nodiscard]] auto min_degree_color_select(const Graph & host, const EdgeColoring & coloring, const std::vector<int> & x,
        const std::vector<std::vector<int>> & ys, const Ratio & L, const Ratio & p, int q) -> ColorSelection;

    struct StarCleanOptions
    {
        /// Defaults to 4r.
        std::optional<int> h;
        SimDrcOptions drc;
        std::int64_t check_budget = drc_bad_budget;
        std::int64_t spot_checks = 10'000;
    };

    struct StarCleanResult
    {
        std::vector<int> colors;
        std::vector<std::vector<int>> subsets; ///< Y_i'' as host vertices
        ColorSelection selection;
        SimDrcOutcome drc;
        CommonNeighborhoodRecord guarantee;
        std::vector<std::string> regime_flags;
    };

    [[nodiscard]] auto star_clean(const Graph & host, const EdgeColoring & coloring, const std::vector<int> & x,
        const std::vector<std::vector<int>> & ys, const Ratio & L, const Ratio & p, int q, int r, std::uint64_t seed,
        const StarCleanOptions & options = {}) -> StarCleanResult;

    /// Minimum over r-tuples (with repetition) of |{x in X : color(x y_j) = c_j for all j}|, where each y carries the color of its set.
    [[nodiscard]] auto min_colored_common(const Graph & host, const EdgeColoring & coloring, const std::vector<int> & x,
        const std::vector<std::vector<int>> & ys, const std::vector<int> & colors, int r, std::int64_t budget, std::int64_t spot_checks,
        std::uint64_t seed) -> std::pair<std::int64_t, bool>;

    struct DrcCleanOptions
    {
        StarCleanOptions star;
    };

    /// The base must be bipartite; `a_side` lists A (defaults to side 0 of bipartition()). Processes A in ascending order.
    [[nodiscard]] auto drc_clean(const Blowup & blowup, const EdgeColoring & coloring, int r, int q, const Ratio & L, const Ratio & p,
        std::uint64_t seed, const std::optional<std::vector<int>> & a_side = std::nullopt, const DrcCleanOptions & options = {})
        -> CleaningOutcome;
}
