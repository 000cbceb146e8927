#pragma once

#include <indram/cleaning.hpp>
#include <indram/coloring.hpp>
#include <indram/embedding.hpp>
#include <indram/gadgets.hpp>
#include <indram/graph.hpp>
#include <indram/oracles.hpp>
#include <indram/serialization.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indram
{
    struct GadgetSpec
    {
        /// "random" (certified pseudorandom block) or "complete".
        std::string kind = "random";
        Ratio p{4, 5};
        /// Regularity threshold the gadget is certified at; defaults to the generator's choice.
        std::optional<Ratio> L;
        RegularityMode mode = RegularityMode::two_sided;
        int max_attempts = 50;
        GadgetSource source = GadgetSource::direct;
        std::int64_t sampled_trials = 20'000;
    };

    struct HostSpec
    {
        std::optional<Graph> graph;
        /// Skip the arrow check of an explicit host; reported as a regime flag.
        bool trusted = false;
        int max_vertices = 6;
        std::optional<int> degree_cap;
        int random_candidates = 20;
    };

    struct PipelineConfig
    {
        Graph pattern;
        /// Set for the bipartite reduction.
        std::optional<int> w;
        /// Declared w-blowup of the pattern, labeled v * w + i; defaults to the complete w-blowup.
        std::optional<Graph> hprime;
        HostSpec host;
        int q = 2;
        GadgetSpec gadget;
        /// Part size (A-side parts in the bipartite reduction).
        int s = 16;
        /// B-side part size of the bipartite reduction; defaults to s.
        std::optional<int> s0;
        /// Final part size of regularity cleaning; defaults to ceil(s/2).
        std::optional<int> clean_size;
        std::vector<int> stage_sizes;
        /// Lower-regularity margin of cleaning: certificates use eta * clean_size.
        Ratio eta{1, 2};
        /// Star-cleaning sample size; defaults to 4r.
        std::optional<int> drc_h;
        int drc_min_subset = 1;
        /// Lower-regularity density of H*; defaults to p/4q.
        std::optional<Ratio> rho;
        std::int64_t max_resample = 1000;
        std::vector<Adversary> adversaries{Adversary::uniform_random};
        int trials = 10;
        std::uint64_t seed = 0;
        /// Exhaustive check of G' ->ind (H)_q after the trials when affordable.
        bool finale = false;
        std::int64_t finale_budget = arrows_budget;
        /// Absolute constant of the paper size formulas (existential there).
        double C = 1;
        int jobs = 1;
        bool timings = false;
    };

    /// Throws InvalidInput with JSON-pointer paths.
    [[nodiscard]] auto pipeline_config_from_json(const Json & j) -> PipelineConfig;

    enum class CleanKind
    {
        regularity,
        drc
    };

    enum class EmbedKind
    {
        greedy,
        lll
    };

    /// Everything a trial needs besides the blowup and the adversary.
    struct TrialContext
    {
        Graph pattern;
        std::optional<Graph> hprime;
        int w = 1;
        int q = 2;
        Ratio p{4, 5};
        /// Threshold at which the gadget (hence G*) is regular.
        Ratio gadget_L{1};
        bool gadget_certified = false;
        /// The base host arrows the pattern (verified, not trusted).
        bool base_arrows = false;
        Ratio eta{1, 2};
        std::optional<int> clean_size;
        std::vector<int> stage_sizes;
        std::optional<int> drc_h;
        int drc_min_subset = 1;
        std::optional<Ratio> rho;
        std::int64_t max_resample = 1000;
        std::vector<int> a_side;
        bool timings = false;
    };

    struct TrialReport
    {
        int trial = 0;
        std::uint64_t seed = 0;
        Adversary adversary = Adversary::uniform_random;
        bool success = false;
        /// Final induced-copy (and blowup) verification passed; false whenever success is false.
        bool verified = false;
        std::optional<int> color;
        /// Hypotheses of the embedding statement certified exactly for this trial.
        bool hypotheses_certified = false;
        bool feasible = false;
        std::int64_t law_violations = 0;
        std::int64_t certificate_failures = 0;
        /// Empirical stage failures (budget, attempts, unmet preconditions).
        std::vector<std::string> failures;
        /// Bug guards that fired; any entry makes the run exit with code 1.
        std::vector<std::string> violations;
        std::vector<std::string> regime_flags;
        Json stages;
        double seconds = 0;
    };

    [[nodiscard]] auto to_json(const TrialReport & r, bool timings) -> Json;

    /// Steps three and four on an already cleaned blowup: monochromatic base copy, embedding and verification.
    [[nodiscard]] auto embed_after_cleaning(const Blowup & blowup, const TrialContext & context, const EdgeColoring & coloring,
        const EdgeColoring & aux, const std::vector<std::vector<int>> & parts, bool cleaning_certified, EmbedKind embed,
        std::uint64_t seed) -> TrialReport;

    [[nodiscard]] auto run_trial(const Blowup & blowup, const TrialContext & context, CleanKind clean, EmbedKind embed,
        Adversary adversary, std::uint64_t seed) -> TrialReport;

    struct PipelineResult
    {
        Blowup blowup;
        Gadget gadget;
        Graph base;
        std::vector<TrialReport> trials;
        /// Paper constants, engineering values, accounting and the optional finale.
        Json summary;
        std::int64_t violations = 0;
    };

    /// Regularity cleaning with greedy embedding on an s-blowup with one gadget per base edge.
    [[nodiscard]] auto reduction_general(const PipelineConfig & config) -> PipelineResult;
    /// DRC cleaning with blowup embedding; A-side parts have size s, B-side parts size s0.
    [[nodiscard]] auto reduction_bipartite(const PipelineConfig & config) -> PipelineResult;

    /// Dispatches on config.w.
    [[nodiscard]] auto run_pipeline(const PipelineConfig & config) -> PipelineResult;
}
