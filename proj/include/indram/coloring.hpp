#pragma once

#include <indram/graph.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indram
{
    /// matchings[t] is M_t; a cleaning pass consumes them from the back (t = size-1 down to 0).
    struct MatchingDecomposition
    {
        std::vector<std::vector<Edge>> matchings;
    };

    /// Misra–Gries fan recoloring: a proper edge coloring with at most max_degree+1 colors. Empty classes are dropped.
    [[nodiscard]] auto vizing_matchings(const Graph & g) -> MatchingDecomposition;

    /// Every edge exactly once, every class a matching, at most delta+1 classes.
    [[nodiscard]] auto is_proper_decomposition(const Graph & g, const MatchingDecomposition & d) -> bool;

    struct Biclique
    {
        std::vector<int> left;  ///< sorted, left[0] < right[0]
        std::vector<int> right; ///< sorted
    };

    /// Default cap on enumerated K_{w,w} copies.
    inline constexpr std::int64_t biclique_budget = 1'000'000;

    /// All (not necessarily induced) K_{w,w} subgraphs, each unordered copy once. Throws BudgetExceeded past the cap.
    [[nodiscard]] auto enumerate_bicliques(const Graph & g, int w, std::int64_t budget = biclique_budget) -> std::vector<Biclique>;

    /// Number of monochromatic K_{w,w} copies, counted independently per color class.
    [[nodiscard]] auto count_monochromatic_bicliques(const Graph & g, const EdgeColoring & c, int w,
        std::int64_t budget = biclique_budget) -> std::int64_t;

    struct LllReport
    {
        EdgeColoring coloring;
        std::int64_t resamples = 0;
        std::int64_t events = 0;
        std::int64_t dependency_degree = 0;
        /// log2 of 2^{1-w^2}.
        double log2_event_probability = 0;
        /// e (D+1) p < 1.
        bool lll_condition = false;
        /// Monochromatic copies found by the independent recount; zero on every returned report.
        std::int64_t monochromatic_copies = 0;
        bool verified = false;
        std::uint64_t seed = 0;
    };

    /// Moser–Tardos over the events "copy H of K_{w,w} is monochromatic", lowest violated event first.
    /// Throws AttemptsExhausted when more than max_resample resamplings are needed.
    [[nodiscard]] auto lll_avoid_mono_biclique(const Graph & g, int w, std::int64_t max_resample, std::uint64_t seed,
        std::int64_t budget = biclique_budget) -> LllReport;

    enum class Adversary
    {
        uniform_random,
        per_base_edge_majority,
        part_index_parity,
        half_split_within_block
    };

    [[nodiscard]] auto to_string(Adversary a) -> std::string;
    [[nodiscard]] auto parse_adversary(const std::string & s) -> Adversary;

    /// uniform-random: seeded uniform color per host edge (edges in sorted order).
    /// per-base-edge-majority: the whole block of the i-th base edge gets color i mod q.
    /// part-index-parity: edge between the i-th and j-th vertices of their parts gets (i + j) mod q.
    /// half-split-within-block: block row i of r rows gets floor(i q / r), so for q = 2 the rows split in halves.
    [[nodiscard]] auto adversary_color(const Blowup & b, Adversary strategy, int q, std::uint64_t seed) -> EdgeColoring;

    /// Uniformly random regular graph by the pairing model with rejection.
    [[nodiscard]] auto random_regular_graph(int n, int d, std::uint64_t seed) -> Graph;
}
