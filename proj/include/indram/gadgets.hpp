#pragma once

#include <indram/graph.hpp>
#include <indram/ratio.hpp>
#include <indram/regularity.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace indram
{
    /// Each pair independently with probability p, pairs visited in lexicographic order.
    [[nodiscard]] auto sample_gnp(int n, const Ratio & p, std::uint64_t seed) -> Graph;
    /// rows x cols block, each entry independently with probability p, row-major order.
    [[nodiscard]] auto sample_bipartite_block(int rows, int cols, const Ratio & p, std::uint64_t seed) -> Biadjacency;

    struct DenseGraphResult
    {
        Graph graph;
        DensityVerdict verification;
        int attempts_used = 0;
        std::uint64_t seed = 0;
        std::uint64_t accepted_seed = 0;
        /// exp(t eps^2 p / 6), the largest n the existence argument covers.
        double regime_bound = 0;
        bool in_guaranteed_regime = false;
    };

    [[nodiscard]] auto dense_graph_regime_bound(int t, const Ratio & p, const Ratio & eps) -> double;

    /// Resamples G(n,p) with attempt seeds derive_seed(seed, k) until the density condition certifies.
    /// Throws AttemptsExhausted with the best attempt's statistics.
    [[nodiscard]] auto generate_dense_pseudorandom_graph(int n, const Ratio & p, int t, const Ratio & eps, int max_attempts,
        std::uint64_t seed) -> DenseGraphResult;

    enum class GadgetSource
    {
        direct,  ///< sample the a x b block itself
        ambient, ///< sample G(a+b, p) and keep the block between the first a and the last b vertices
        external ///< supplied by the caller
    };

    [[nodiscard]] auto to_string(GadgetSource s) -> std::string;
    [[nodiscard]] auto parse_gadget_source(const std::string & s) -> GadgetSource;

    struct GadgetCertificate
    {
        RegularityParams params_claimed;
        RegularityVerdict verification;
        int attempts_used = 0;
        std::uint64_t seed = 0;
        std::uint64_t accepted_seed = 0;
        GadgetSource source = GadgetSource::direct;
        /// (48/p) ln(a+b).
        double paper_threshold = 0;
        /// The paper threshold exceeds both part sizes, so regularity at it holds vacuously.
        bool paper_threshold_vacuous = false;

        [[nodiscard]] auto valid() const -> bool { return verification.status == VerdictStatus::certified; }
    };

    struct Gadget
    {
        Biadjacency block;
        GadgetCertificate certificate;
    };

    [[nodiscard]] auto paper_gadget_threshold(int a, int b, const Ratio & p) -> double;

    struct GadgetOptions
    {
        /// Defaults to ceil of the paper threshold.
        std::optional<Ratio> target_L;
        RegularityMode mode = RegularityMode::two_sided;
        int max_attempts = 50;
        GadgetSource source = GadgetSource::direct;
        /// Used by the sampled refuter when the block exceeds the exhaustive cap.
        std::int64_t sampled_trials = 20'000;
    };

    /// Accepts the lowest-index attempt whose verdict is certified (exact) or not refuted (sampled, reported inconclusive).
    [[nodiscard]] auto generate_regular_gadget(int a, int b, const Ratio & p, std::uint64_t seed, const GadgetOptions & options = {})
        -> Gadget;

    /// Runs certification on a caller-supplied block.
    [[nodiscard]] auto certify_external_gadget(const Biadjacency & block, const Ratio & p, std::uint64_t seed,
        const GadgetOptions & options = {}) -> Gadget;
}
