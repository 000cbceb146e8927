#pragma once

#include <indram/graph.hpp>
#include <indram/ratio.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indram
{
    enum class CopyMode
    {
        subgraph,
        induced
    };

    [[nodiscard]] auto to_string(CopyMode m) -> std::string;
    [[nodiscard]] auto parse_copy_mode(const std::string & s) -> CopyMode;

    /// Largest coloring or subset enumeration the arrow oracles accept.
    inline constexpr std::int64_t arrows_budget = 100'000'000;

    /// Pattern vertex -> host vertex. With a coloring and no color, any single color is accepted (tried in order 0..q-1).
    /// In induced mode pattern non-edges must be host non-edges regardless of color.
    [[nodiscard]] auto find_copy(const Graph & host, const Graph & pattern, CopyMode mode, const EdgeColoring * coloring = nullptr,
        std::optional<int> color = std::nullopt) -> std::optional<std::vector<int>>;

    /// Same search with pattern edges restricted to `allowed` (a subgraph of host); non-edges are checked against host.
    [[nodiscard]] auto find_copy_in(const Graph & host, const Graph & allowed, const Graph & pattern, CopyMode mode)
        -> std::optional<std::vector<int>>;

    struct ArrowQuery
    {
        Graph host;
        Graph pattern;
        int q = 2;
        CopyMode mode = CopyMode::subgraph;
    };

    struct ArrowResult
    {
        bool arrows = false;
        /// Lexicographically least coloring (host edges in sorted order) without a monochromatic copy.
        std::optional<EdgeColoring> counterexample;
        std::int64_t colorings_checked = 0;
    };

    /// The first host edge is fixed to color 0. Throws BudgetExceeded when q^{e-1} exceeds the budget.
    [[nodiscard]] auto arrows(const ArrowQuery & query, std::int64_t budget = arrows_budget) -> ArrowResult;

    struct DensityArrowResult
    {
        bool arrows = false;
        /// Edge count every checked subgraph has, ceil(gamma e(G)).
        std::int64_t edges_required = 0;
        std::optional<Graph> counterexample;
        std::int64_t subsets_checked = 0;
    };

    /// Containment is monotone in the subgraph, so only subgraphs with exactly ceil(gamma e) edges are enumerated.
    /// Throws BudgetExceeded when 2^e exceeds the budget.
    [[nodiscard]] auto arrows_density(const Graph & host, const Graph & pattern, const Ratio & gamma, CopyMode mode,
        std::int64_t budget = arrows_budget) -> DensityArrowResult;

    struct HostSearchEntry
    {
        std::string candidate;
        int vertices = 0;
        std::int64_t edges = 0;
        /// "arrows", "fails", "over-budget" or "over-degree-cap".
        std::string verdict;
    };

    struct HostSearchOptions
    {
        std::optional<int> degree_cap;
        int random_candidates = 20;
        std::uint64_t seed = 0;
        std::int64_t budget = arrows_budget;
    };

    struct HostSearchResult
    {
        std::optional<Graph> host;
        std::vector<HostSearchEntry> log;
    };

    /// K_2..K_max first, then G(max, 1/2) samples thinned to the degree cap.
    [[nodiscard]] auto search_host(const Graph & pattern, int q, CopyMode mode, int max_vertices, const HostSearchOptions & options = {})
        -> HostSearchResult;

    struct PruneReport
    {
        InducedSubgraph pruned;
        int degree_limit = 0;
        /// 2Dn when n was supplied.
        std::optional<std::int64_t> vertex_bound;
        bool within_bound = true;
    };

    /// Keeps non-isolated vertices of degree <= 4kD, then drops vertices left isolated.
    [[nodiscard]] auto degree_prune_host(const Graph & g0, int k, int D, std::optional<int> n = std::nullopt) -> PruneReport;
}
