#pragma once

#include <indram/graph.hpp>
#include <indram/ratio.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indram
{
    enum class RegularityMode
    {
        two_sided,
        lower_only
    };

    /// L may be fractional (thresholds such as eta * s are used directly); a subset qualifies when |X'| >= L
    /// and the pair is refuted when more than L vertices are bad.
    struct RegularityParams
    {
        Ratio L{1};
        Ratio p{1, 2};
        RegularityMode mode = RegularityMode::two_sided;
    };

    auto validate(const RegularityParams & params) -> void;

    enum class VerdictStatus
    {
        certified,
        refuted,
        inconclusive
    };

    [[nodiscard]] auto to_string(VerdictStatus s) -> std::string;
    [[nodiscard]] auto to_string(RegularityMode m) -> std::string;

    /// side 0: subset of the row side (X), offending vertices are columns (Y). side 1: the reverse.
    struct RegularityWitness
    {
        int side = 0;
        std::vector<int> subset;
        std::vector<int> offending;
    };

    struct RegularityVerdict
    {
        VerdictStatus status = VerdictStatus::inconclusive;
        std::optional<RegularityWitness> witness;
        /// "exact", "analytic", "vacuous" or "sampled".
        std::string method;
        RegularityParams params;
        std::int64_t subsets_examined = 0;
    };

    [[nodiscard]] auto block_density(const Biadjacency & block) -> Ratio;
    [[nodiscard]] auto pair_density(const BipartitePair & pair) -> Ratio;

    /// Largest side accepted by the exhaustive checker.
    inline constexpr int exhaustive_cap = 20;

    /// Is d outside the degree window for a subset of size m?
    [[nodiscard]] auto is_bad_degree(int d, int m, const RegularityParams & params) -> bool;
    [[nodiscard]] auto qualifies(int m, const Ratio & L) -> bool;
    [[nodiscard]] auto exceeds(int bad, const Ratio & L) -> bool;

    /// Indices in a witness refer to block rows and columns.
    [[nodiscard]] auto check_regularity_exact(const Biadjacency & block, const RegularityParams & params) -> RegularityVerdict;
    /// Witness indices are host vertices.
    [[nodiscard]] auto check_regularity_exact(const BipartitePair & pair, const RegularityParams & params) -> RegularityVerdict;

    /// Re-checks a witness against the definition; offending must be exactly the bad vertices for the subset.
    [[nodiscard]] auto witness_is_valid(const Biadjacency & block, const RegularityParams & params, const RegularityWitness & w) -> bool;

    [[nodiscard]] auto refute_regularity_sampled(const Biadjacency & block, const RegularityParams & params, std::int64_t trials,
        std::uint64_t seed) -> std::optional<RegularityWitness>;
    [[nodiscard]] auto refute_regularity_sampled(const BipartitePair & pair, const RegularityParams & params, std::int64_t trials,
        std::uint64_t seed) -> std::optional<RegularityWitness>;

    /// Exact when within the cap or when the block is complete or empty; otherwise sampled and at best inconclusive.
    [[nodiscard]] auto certify_block(const Biadjacency & block, const RegularityParams & params, std::int64_t sampled_trials,
        std::uint64_t seed) -> RegularityVerdict;

    /// Enumeration budget of check_density_condition.
    inline constexpr std::int64_t density_condition_budget = 10'000'000;

    struct DensityVerdict
    {
        VerdictStatus status = VerdictStatus::inconclusive;
        std::optional<std::pair<std::vector<int>, std::vector<int>>> violating_pair;
        std::int64_t violating_edges = 0;
        std::int64_t pairs_checked = 0;
        /// Largest |e(X',Y') - p t^2| / (p t^2) seen, for reporting.
        double worst_deviation = 0;
    };

    /// Every unordered pair of disjoint t-sets must satisfy |e(X',Y') - p t^2| <= eps p t^2.
    [[nodiscard]] auto check_density_condition(const Graph & g, int t, const Ratio & p, const Ratio & eps) -> DensityVerdict;
    [[nodiscard]] auto density_condition_pairs(int n, int t) -> double;
}
