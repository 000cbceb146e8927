#pragma once

#include <indram/graph.hpp>
#include <indram/ratio.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indram
{
    struct EmbedParams
    {
        int s_star = 1;
        Ratio L{0};
        Ratio L_prime{0};
        Ratio p{1, 100};
        Ratio rho{1, 2};
        int k = 1;
        int delta = 1;
        int w = 1;
    };

    struct FeasibilityReport
    {
        /// s*(rho/2)^k (1-2p)^delta > delta L + k L'.
        bool greedy_holds = false;
        BigRational greedy_lhs;
        BigRational greedy_rhs;
        /// w delta L / s* <= 1/(e(w delta^2 + 1)).
        bool lll_holds = false;
        double lll_lhs = 0;
        double lll_rhs = 0;
    };

    /// 1 - 2p is taken as 0 when p > 1/2. The constant e is bracketed by rational series bounds.
    [[nodiscard]] auto feasibility_check(const EmbedParams & params) -> FeasibilityReport;

    /// (rho/2)^k (1-2p)^delta / (delta + k).
    [[nodiscard]] auto paper_eta(const Ratio & rho, int k, const Ratio & p, int delta) -> BigRational;

    /// Edges of the color-c subgraph between parts[u] and parts[v] for every pattern edge uv.
    [[nodiscard]] auto build_hstar(const Graph & host, const EdgeColoring & coloring, int c, const Graph & pattern,
        const std::vector<std::vector<int>> & parts) -> Graph;

    struct EmbedTrace
    {
        std::vector<int> order;
        /// candidate_sizes[t][i] = |X_i^{(t)}| for the i-th vertex of the order (frozen once i <= t).
        std::vector<std::vector<int>> candidate_sizes;
        /// Per step, sizes of the bad sets B_i, taken over the whole part of the vertex being placed.
        std::vector<std::vector<int>> bad_set_sizes;
        std::vector<int> chosen;
        std::optional<int> failure_step;
        /// Steps at which every candidate was in some bad set, so the lowest candidate was taken anyway.
        std::vector<int> fallback_steps;
        std::vector<std::string> law_violations;
        std::int64_t law_checks = 0;
    };

    struct GreedyOptions
    {
        /// Set when Properties 1-3 were certified exactly; a law violation then becomes an InvariantViolation.
        bool hypotheses_certified = false;
    };

    struct EmbedResult
    {
        bool success = false;
        std::optional<Embedding> embedding;
        EmbedTrace trace;
        FeasibilityReport feasibility;
    };

    /// H and G share labels; parts[v] is X_v in the host. hstar and gstar are graphs on the host vertex set.
    /// The order defaults to breadth-first from vertex 0 (then the lowest unvisited vertex).
    [[nodiscard]] auto greedy_induced_embed(const Graph & h, const Graph & g, const Graph & hstar, const Graph & gstar,
        const std::vector<std::vector<int>> & parts, const EmbedParams & params,
        const std::optional<std::vector<int>> & order = std::nullopt, const GreedyOptions & options = {}) -> EmbedResult;

    [[nodiscard]] auto bfs_order(const Graph & h) -> std::vector<int>;

    /// Vertex (v, i) of the w-blowup is labeled v * w + i.
    [[nodiscard]] auto complete_w_blowup(const Graph & h, int w) -> Graph;

    struct LllEmbedTrace
    {
        std::int64_t resamples = 0;
        std::int64_t rounds = 0;
        /// Bad events still holding when the loop stopped.
        std::int64_t surviving_bad_events = 0;
        /// Final |T_{a,j}|, indexed a * w + j over A-side vertices (other entries -1).
        std::vector<int> t_sizes;
        std::vector<int> y_choice; ///< indexed b * w + i (-1 for A-side vertices)
        bool stalled = false;
        bool blowup_verified = false;
    };

    struct LllEmbedResult
    {
        bool success = false;
        std::optional<Embedding> embedding;
        LllEmbedTrace trace;
        FeasibilityReport feasibility;
    };

    /// a_side marks A (defaults to bipartition()). hprime defaults to the complete w-blowup; Y_{b,i} are consecutive chunks
    /// of s* vertices of parts[b]. Throws AttemptsExhausted after max_resample resamplings.
    [[nodiscard]] auto lll_blowup_embed(const Graph & h, const Graph & g, const std::optional<Graph> & hprime, const Graph & hstar,
        const Graph & gstar, const std::vector<std::vector<int>> & parts, const EmbedParams & params, std::uint64_t seed,
        std::int64_t max_resample, const std::optional<std::vector<int>> & a_side = std::nullopt) -> LllEmbedResult;

    struct BadEventAudit
    {
        std::int64_t samples = 0;
        /// Largest empirical frequency of E_{a,j} over all (a, j).
        double max_frequency = 0;
        /// w delta L / s*.
        double bound = 0;
        double sigma = 0;
        bool within = false;
    };

    /// Samples all y_{b,i} independently `samples` times and compares the frequency of |T_{a,j}| < w with the bound.
    [[nodiscard]] auto audit_bad_events(const Graph & h, const Graph & g, const std::optional<Graph> & hprime, const Graph & hstar,
        const Graph & gstar, const std::vector<std::vector<int>> & parts, const EmbedParams & params, std::int64_t samples,
        std::uint64_t seed, const std::optional<std::vector<int>> & a_side = std::nullopt) -> BadEventAudit;

    struct Property3Check
    {
        std::int64_t min_common = 0;
        bool exhaustive = false;
        bool holds = false;
    };

    /// (1-2p)^{delta w} |X_a ∩ N_{H*}(y_1) ∩ ... ∩ N_{H*}(y_{wk})| >= wL over every choice, minimized per a.
    [[nodiscard]] auto check_property3(const Graph & h, const Graph & hstar, const std::vector<std::vector<int>> & parts,
        const std::vector<int> & a_vertices, const EmbedParams & params, std::int64_t budget, std::int64_t spot_checks,
        std::uint64_t seed) -> Property3Check;
}
