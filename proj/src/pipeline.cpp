#include <indram/errors.hpp>
#include <indram/pipeline.hpp>
#include <indram/rng.hpp>
#include <indram/tower_number.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

namespace indram
{
    namespace
    {
        auto check_keys(const Json & j, const std::string & path, const std::set<std::string> & known) -> void
        {
            if (! j.is_object())
                throw InvalidInput((path.empty() ? "/" : path) + ": expected an object");
            for (auto it = j.begin(); it != j.end(); ++it)
                if (! known.contains(it.key()))
                    throw InvalidInput(path + "/" + it.key() + ": unknown field");
        }

        auto get_bool(const Json & j, const std::string & path) -> bool
        {
            if (! j.is_boolean())
                throw InvalidInput(path + ": expected a boolean");
            return j.get<bool>();
        }

        auto get_string(const Json & j, const std::string & path) -> std::string
        {
            if (! j.is_string())
                throw InvalidInput(path + ": expected a string");
            return j.get<std::string>();
        }

        auto get_small(const Json & j, const std::string & path, std::int64_t lo, std::int64_t hi) -> int
        {
            auto v = get_int(j, path);
            if (v < lo || v > hi)
                throw InvalidInput(path + ": " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return static_cast<int>(v);
        }

        auto get_seed(const Json & j, const std::string & path) -> std::uint64_t
        {
            if (j.is_number_unsigned())
                return j.get<std::uint64_t>();
            if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
                return static_cast<std::uint64_t>(j.get<std::int64_t>());
            if (j.is_string()) {
                auto s = j.get<std::string>();
                if (! s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) && s.size() <= 20) {
                    try {
                        return std::stoull(s);
                    }
                    catch (const std::exception &) {
                    }
                }
            }
            throw InvalidInput(path + ": expected a non-negative 64-bit seed (integer or decimal string)");
        }

        auto wrap_adversary(const std::string & s, const std::string & path) -> Adversary
        {
            try {
                return parse_adversary(s);
            }
            catch (const InvalidInput & e) {
                throw InvalidInput(path + ": " + e.what());
            }
        }
    }

    auto pipeline_config_from_json(const Json & j) -> PipelineConfig
    {
        check_keys(j, "",
            {"pattern", "w", "hprime", "host", "q", "gadget", "s", "s0", "clean_size", "stage_sizes", "eta", "drc_h", "drc_min_subset",
                "rho", "max_resample", "adversaries", "trials", "seed", "finale", "finale_budget", "C"});
        PipelineConfig c;
        c.pattern = graph_from_json(require(j, "pattern", ""), "/pattern");
        if (j.contains("w"))
            c.w = get_small(j["w"], "/w", 1, 16);
        if (j.contains("hprime")) {
            if (! c.w)
                throw InvalidInput("/hprime: requires w");
            c.hprime = graph_from_json(j["hprime"], "/hprime");
        }
        if (j.contains("host")) {
            auto & h = j["host"];
            check_keys(h, "/host", {"graph", "trusted", "max_vertices", "degree_cap", "random_candidates"});
            if (h.contains("graph"))
                c.host.graph = graph_from_json(h["graph"], "/host/graph");
            if (h.contains("trusted"))
                c.host.trusted = get_bool(h["trusted"], "/host/trusted");
            if (h.contains("max_vertices"))
                c.host.max_vertices = get_small(h["max_vertices"], "/host/max_vertices", 2, 64);
            if (h.contains("degree_cap"))
                c.host.degree_cap = get_small(h["degree_cap"], "/host/degree_cap", 0, 1 << 20);
            if (h.contains("random_candidates"))
                c.host.random_candidates = get_small(h["random_candidates"], "/host/random_candidates", 0, 1'000'000);
        }
        if (j.contains("q"))
            c.q = get_small(j["q"], "/q", 1, EdgeColoring::max_colors);
        if (j.contains("gadget")) {
            auto & g = j["gadget"];
            check_keys(g, "/gadget", {"kind", "p", "L", "mode", "max_attempts", "source", "sampled_trials"});
            if (g.contains("kind")) {
                c.gadget.kind = get_string(g["kind"], "/gadget/kind");
                if (c.gadget.kind != "random" && c.gadget.kind != "complete")
                    throw InvalidInput("/gadget/kind: expected random or complete");
            }
            if (g.contains("p"))
                c.gadget.p = ratio_from_json(g["p"], "/gadget/p");
            if (c.gadget.p <= Ratio(0) || c.gadget.p >= Ratio(1))
                throw InvalidInput("/gadget/p: must lie in (0,1)");
            if (g.contains("L"))
                c.gadget.L = ratio_from_json(g["L"], "/gadget/L");
            if (g.contains("mode")) {
                auto m = get_string(g["mode"], "/gadget/mode");
                if (m == "two-sided")
                    c.gadget.mode = RegularityMode::two_sided;
                else if (m == "lower")
                    c.gadget.mode = RegularityMode::lower_only;
                else
                    throw InvalidInput("/gadget/mode: expected two-sided or lower");
            }
            if (g.contains("max_attempts"))
                c.gadget.max_attempts = get_small(g["max_attempts"], "/gadget/max_attempts", 1, 1'000'000);
            if (g.contains("source")) {
                try {
                    c.gadget.source = parse_gadget_source(get_string(g["source"], "/gadget/source"));
                }
                catch (const InvalidInput & e) {
                    throw InvalidInput(std::string("/gadget/source: ") + e.what());
                }
            }
            if (g.contains("sampled_trials"))
                c.gadget.sampled_trials = get_int(g["sampled_trials"], "/gadget/sampled_trials");
        }
        if (j.contains("s"))
            c.s = get_small(j["s"], "/s", 1, 4096);
        if (j.contains("s0"))
            c.s0 = get_small(j["s0"], "/s0", 1, 4096);
        if (j.contains("clean_size"))
            c.clean_size = get_small(j["clean_size"], "/clean_size", 1, 4096);
        if (j.contains("stage_sizes")) {
            if (! j["stage_sizes"].is_array())
                throw InvalidInput("/stage_sizes: expected an array");
            for (std::size_t i = 0; i < j["stage_sizes"].size(); ++i)
                c.stage_sizes.push_back(get_small(j["stage_sizes"][i], "/stage_sizes/" + std::to_string(i), 1, 4096));
        }
        if (j.contains("eta"))
            c.eta = ratio_from_json(j["eta"], "/eta");
        if (c.eta <= Ratio(0))
            throw InvalidInput("/eta: must be positive");
        if (j.contains("drc_h"))
            c.drc_h = get_small(j["drc_h"], "/drc_h", 1, 64);
        if (j.contains("drc_min_subset"))
            c.drc_min_subset = get_small(j["drc_min_subset"], "/drc_min_subset", 0, 4096);
        if (j.contains("rho"))
            c.rho = ratio_from_json(j["rho"], "/rho");
        if (j.contains("max_resample"))
            c.max_resample = get_int(j["max_resample"], "/max_resample");
        if (j.contains("adversaries")) {
            auto & a = j["adversaries"];
            if (! a.is_array() || a.empty())
                throw InvalidInput("/adversaries: expected a non-empty array");
            c.adversaries.clear();
            for (std::size_t i = 0; i < a.size(); ++i) {
                auto path = "/adversaries/" + std::to_string(i);
                c.adversaries.push_back(wrap_adversary(get_string(a[i], path), path));
            }
        }
        if (j.contains("trials"))
            c.trials = get_small(j["trials"], "/trials", 0, 10'000'000);
        if (j.contains("seed"))
            c.seed = get_seed(j["seed"], "/seed");
        if (j.contains("finale"))
            c.finale = get_bool(j["finale"], "/finale");
        if (j.contains("finale_budget"))
            c.finale_budget = get_int(j["finale_budget"], "/finale_budget");
        if (j.contains("C")) {
            if (! j["C"].is_number())
                throw InvalidInput("/C: expected a number");
            c.C = j["C"].get<double>();
            if (! (c.C >= 1))
                throw InvalidInput("/C: must be at least 1");
        }
        return c;
    }

    auto to_json(const TrialReport & r, bool timings) -> Json
    {
        Json j;
        j["trial"] = r.trial;
        j["seed"] = seed_to_json(r.seed);
        j["adversary"] = to_string(r.adversary);
        j["success"] = r.success;
        j["verified"] = r.verified;
        j["color"] = r.color ? Json(*r.color) : Json(nullptr);
        j["hypotheses_certified"] = r.hypotheses_certified;
        j["feasible"] = r.feasible;
        j["law_violations"] = r.law_violations;
        j["certificate_failures"] = r.certificate_failures;
        j["failures"] = r.failures;
        j["violations"] = r.violations;
        j["regime_flags"] = r.regime_flags;
        j["stages"] = r.stages.is_null() ? Json::object() : r.stages;
        if (timings)
            j["seconds"] = r.seconds;
        return j;
    }

    namespace
    {
        /// Runs a stage, routing empirical failures and bug guards into the report. Returns false when the trial stops.
        template <typename F>
        auto guarded(TrialReport & rep, const std::string & stage, F && f) -> bool
        {
            try {
                f();
                return true;
            }
            catch (const InvariantViolation & e) {
                rep.violations.push_back(stage + ": " + e.what());
            }
            catch (const PreconditionFailed & e) {
                rep.failures.push_back(stage + ": " + e.what());
            }
            catch (const AttemptsExhausted & e) {
                rep.failures.push_back(stage + ": " + e.what());
            }
            catch (const BudgetExceeded & e) {
                rep.failures.push_back(stage + ": " + e.what());
            }
            return false;
        }

        auto class_counts(const Graph & host, const EdgeColoring & c) -> Json
        {
            std::vector<std::int64_t> counts(static_cast<std::size_t>(c.q()), 0);
            for (auto & e : host.edges())
                ++counts[c.color(e.u, e.v)];
            return counts;
        }

        auto stage_log_json(const CleaningOutcome & o) -> Json
        {
            Json log = Json::array();
            for (auto & s : o.shrink_log) {
                Json edges = Json::array();
                for (auto & e : s.edges)
                    edges.push_back(edge_key(e));
                log.push_back({{"stage", s.stage}, {"size", s.size}, {"edges", edges}, {"neg_log2_paper_factor", s.neg_log2_paper_factor},
                    {"part_sizes", s.part_sizes}});
            }
            return log;
        }

        /// Re-runs every certificate against the exact oracles; returns the number of disagreements.
        auto reverify(const Blowup & blowup, const EdgeColoring & coloring, const CleaningOutcome & o, int r, std::uint64_t seed)
            -> std::int64_t
        {
            std::int64_t bad = 0;
            auto & parts = o.trimmed_parts;
            for (auto & cert : o.certificates) {
                if (cert.regularity) {
                    auto block = host_block(blowup.host, parts[cert.edge.u], parts[cert.edge.v], &coloring, cert.color);
                    if (block.rows <= exhaustive_cap || block.cols <= exhaustive_cap) {
                        auto again = check_regularity_exact(block, cert.regularity->params);
                        bool claimed = cert.regularity->status == VerdictStatus::certified;
                        if (claimed != (again.status == VerdictStatus::certified))
                            ++bad;
                    }
                }
                if (cert.common) {
                    auto & rec = *cert.common;
                    std::vector<std::vector<int>> ys;
                    std::vector<int> colors;
                    blowup.base.neighbors(rec.a).for_each([&](int b) {
                        ys.push_back(parts[b]);
                        colors.push_back(o.aux_coloring.color(rec.a, b));
                    });
                    auto [min, exhaustive] =
                        min_colored_common(blowup.host, coloring, parts[rec.a], ys, colors, r, drc_bad_budget, 0, seed);
                    if (exhaustive && rec.exhaustive && min != rec.min_count)
                        ++bad;
                    BigInt lhs = BigInt(rec.min_count) * rec.min_count * rec.bound_denominator;
                    if (rec.holds != (lhs >= BigInt(rec.bound_numerator)))
                        ++bad;
                }
            }
            return bad;
        }

        struct BaseCopy
        {
            std::vector<int> map;
            int color = 0;
        };

        auto base_copy(const Graph & base, const Graph & pattern, const EdgeColoring & aux) -> std::optional<BaseCopy>
        {
            for (int c = 0; c < aux.q(); ++c)
                if (auto m = find_copy(base, pattern, CopyMode::subgraph, &aux, c))
                    return BaseCopy{*m, c};
            return std::nullopt;
        }

        auto relabel(const Graph & base, const std::vector<int> & f) -> Graph
        {
            auto n = static_cast<int>(f.size());
            Graph g(n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (base.adjacent(f[i], f[j]))
                        g.add_edge(i, j);
            return g;
        }

        auto map_json(const std::vector<int> & m) -> Json
        {
            return m;
        }
    }

    namespace
    {
        auto embed_stage(TrialReport & rep, const Blowup & blowup, const TrialContext & ctx, const EdgeColoring & coloring,
            const EdgeColoring & aux, const std::vector<std::vector<int>> & trimmed, bool cleaning_certified, EmbedKind embed,
            std::uint64_t seed) -> void
        {
            auto & base = blowup.base;
            int k = ctx.pattern.max_degree();
            int delta = base.max_degree();
            int clean_final = std::numeric_limits<int>::max();
            for (auto & part : trimmed)
                clean_final = std::min(clean_final, static_cast<int>(part.size()));
            if (trimmed.empty())
                clean_final = 0;
            auto copy = base_copy(base, ctx.pattern, aux);
            if (! copy) {
                rep.stages["base_copy"] = {{"found", false}};
                if (ctx.base_arrows)
                    rep.violations.push_back("base copy: no monochromatic copy although the base host arrows the pattern");
                else
                    rep.failures.push_back("base copy: no monochromatic copy in the auxiliary coloring");
                return;
            }
            rep.color = copy->color;
            rep.stages["base_copy"] = {{"found", true}, {"color", copy->color}, {"map", map_json(copy->map)}};

            auto g_rel = relabel(base, copy->map);
            std::vector<std::vector<int>> parts;
            for (int v : copy->map)
                parts.push_back(trimmed[v]);
            auto hstar = build_hstar(blowup.host, coloring, copy->color, ctx.pattern, parts);

            EmbedParams params;
            params.p = ctx.p;
            params.k = k;
            params.delta = delta;
            params.L = ctx.gadget_L;
            params.w = ctx.w;

            if (embed == EmbedKind::greedy) {
                params.s_star = clean_final;
                params.L_prime = ctx.eta * Ratio(clean_final);
                params.rho = ctx.rho.value_or(ctx.p / Ratio(4 * ctx.q));
                rep.hypotheses_certified = ctx.gadget_certified && cleaning_certified;
                EmbedResult result;
                bool ok = guarded(rep, "embedding", [&]() {
                    result = greedy_induced_embed(ctx.pattern, g_rel, hstar, blowup.host, parts, params, std::nullopt,
                        GreedyOptions{rep.hypotheses_certified});
                });
                if (! ok)
                    return;
                rep.feasible = result.feasibility.greedy_holds;
                rep.law_violations = static_cast<std::int64_t>(result.trace.law_violations.size());
                rep.stages["embedding"] = {{"kind", "greedy"}, {"success", result.success}, {"order", result.trace.order},
                    {"chosen", result.trace.chosen}, {"candidate_sizes", result.trace.candidate_sizes},
                    {"fallback_steps", result.trace.fallback_steps}, {"law_checks", result.trace.law_checks},
                    {"law_violations", result.trace.law_violations},
                    {"failure_step", result.trace.failure_step ? Json(*result.trace.failure_step) : Json(nullptr)},
                    {"feasibility", {{"greedy_holds", result.feasibility.greedy_holds}, {"lhs", big_to_string(result.feasibility.greedy_lhs)},
                                        {"rhs", big_to_string(result.feasibility.greedy_rhs)}}},
                    {"params", {{"s_star", params.s_star}, {"L", params.L.to_string()}, {"L_prime", params.L_prime.to_string()},
                                   {"rho", params.rho.to_string()}, {"p", params.p.to_string()}, {"k", k}, {"delta", delta}}}};
                if (! result.feasibility.greedy_holds)
                    rep.regime_flags.push_back("embedding: candidate-size inequality fails at these parameters");
                if (! result.success) {
                    rep.failures.push_back("embedding: candidates exhausted at step " + std::to_string(result.trace.failure_step.value_or(-1)));
                    return;
                }
                auto & map = result.embedding->map;
                rep.verified = is_induced_copy(blowup.host, ctx.pattern, map, &coloring, copy->color) && is_induced_copy(hstar, ctx.pattern, map);
                rep.stages["embedding"]["map"] = map_json(map);
            }
            else {
                Graph hprime = ctx.hprime.value_or(complete_w_blowup(ctx.pattern, ctx.w));
                std::vector<int> a_rel;
                std::set<int> a_set(ctx.a_side.begin(), ctx.a_side.end());
                int s_star = -1;
                for (std::size_t i = 0; i < copy->map.size(); ++i) {
                    if (a_set.contains(copy->map[i]))
                        a_rel.push_back(static_cast<int>(i));
                    else {
                        int size = static_cast<int>(parts[i].size()) / ctx.w;
                        s_star = s_star < 0 ? size : std::min(s_star, size);
                    }
                }
                if (s_star < 1) {
                    rep.failures.push_back("embedding: some cleaned Y* holds fewer than w vertices");
                    return;
                }
                params.s_star = s_star;
                auto prop3 = check_property3(ctx.pattern, hstar, parts, a_rel, params, drc_bad_budget, 10'000, derive_seed(seed, 4));
                rep.hypotheses_certified =
                    ctx.gadget_certified && cleaning_certified && prop3.exhaustive && prop3.holds;
                LllEmbedResult result;
                bool ok = guarded(rep, "embedding", [&]() {
                    result = lll_blowup_embed(ctx.pattern, g_rel, hprime, hstar, blowup.host, parts, params, derive_seed(seed, 5),
                        ctx.max_resample, a_rel);
                });
                if (! ok)
                    return;
                rep.feasible = result.feasibility.lll_holds;
                if (! result.feasibility.lll_holds)
                    rep.regime_flags.push_back("embedding: local lemma inequality fails at these parameters");
                rep.stages["embedding"] = {{"kind", "lll"}, {"success", result.success}, {"resamples", result.trace.resamples},
                    {"rounds", result.trace.rounds}, {"stalled", result.trace.stalled}, {"t_sizes", result.trace.t_sizes},
                    {"y_choice", result.trace.y_choice}, {"blowup_verified", result.trace.blowup_verified},
                    {"property3", {{"min_common", prop3.min_common}, {"exhaustive", prop3.exhaustive}, {"holds", prop3.holds}}},
                    {"feasibility", {{"lll_holds", result.feasibility.lll_holds}, {"lhs", result.feasibility.lll_lhs},
                                        {"rhs", result.feasibility.lll_rhs}}},
                    {"params", {{"s_star", params.s_star}, {"L", params.L.to_string()}, {"p", params.p.to_string()}, {"w", params.w}, {"k", k},
                                   {"delta", delta}}}};
                if (! result.success) {
                    rep.failures.push_back("embedding: greedy pick stalled");
                    return;
                }
                auto & map = result.embedding->map;
                bool blowup_ok = hprime.size() > blowup_search_cap || is_blowup_of(hprime, ctx.pattern, ctx.w).has_value();
                rep.verified = blowup_ok && is_induced_copy(blowup.host, hprime, map, &coloring, copy->color) && is_induced_copy(hstar, hprime, map);
                rep.stages["embedding"]["map"] = map_json(map);
            }
            if (! rep.verified)
                rep.violations.push_back("verification: the returned embedding is not a monochromatic induced copy");
            rep.success = rep.verified;
        }
    }

    auto embed_after_cleaning(const Blowup & blowup, const TrialContext & context, const EdgeColoring & coloring,
        const EdgeColoring & aux, const std::vector<std::vector<int>> & parts, bool cleaning_certified, EmbedKind embed,
        std::uint64_t seed) -> TrialReport
    {
        TrialReport rep;
        rep.seed = seed;
        rep.stages = Json::object();
        embed_stage(rep, blowup, context, coloring, aux, parts, cleaning_certified, embed, seed);
        return rep;
    }

    auto run_trial(const Blowup & blowup, const TrialContext & ctx, CleanKind clean, EmbedKind embed, Adversary adversary,
        std::uint64_t seed) -> TrialReport
    {
        auto start = std::chrono::steady_clock::now();
        TrialReport rep;
        rep.seed = seed;
        rep.adversary = adversary;
        rep.stages = Json::object();
        auto finish = [&]() -> TrialReport {
            rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return rep;
        };
        auto & base = blowup.base;
        int k = ctx.pattern.max_degree();

        auto coloring = adversary_color(blowup, adversary, ctx.q, derive_seed(seed, 1));
        rep.stages["coloring"] = {{"q", ctx.q}, {"class_sizes", class_counts(blowup.host, coloring)}};

        CleaningOutcome cleaned;
        int r = k * ctx.w;
        bool cleaned_ok = guarded(rep, "cleaning", [&]() {
            if (clean == CleanKind::regularity) {
                RegularityCleanOptions options;
                options.s0 = ctx.clean_size;
                options.stage_sizes = ctx.stage_sizes;
                cleaned = regularity_clean(blowup, coloring, ctx.p, ctx.q, ctx.eta, derive_seed(seed, 2), options);
            }
            else {
                DrcCleanOptions options;
                options.star.h = ctx.drc_h;
                options.star.drc.min_subset_size = ctx.drc_min_subset;
                cleaned = drc_clean(blowup, coloring, r, ctx.q, ctx.gadget_L, ctx.p, derive_seed(seed, 2), ctx.a_side, options);
            }
        });
        if (! cleaned_ok) {
            rep.stages["cleaning"] = {{"completed", false}};
            return finish();
        }
        for (auto & f : cleaned.regime_flags)
            rep.regime_flags.push_back("cleaning: " + f);
        rep.certificate_failures = reverify(blowup, coloring, cleaned, r, derive_seed(seed, 3));
        if (rep.certificate_failures > 0)
            rep.violations.push_back("cleaning: " + std::to_string(rep.certificate_failures) + " certificates failed re-verification");
        {
            std::vector<int> sizes;
            for (auto & part : cleaned.trimmed_parts)
                sizes.push_back(static_cast<int>(part.size()));
            Json aux = Json::object();
            for (auto & e : base.edges())
                aux[edge_key(e)] = cleaned.aux_coloring.color(e.u, e.v);
            rep.stages["cleaning"] = {{"completed", true}, {"kind", clean == CleanKind::regularity ? "regularity" : "drc"},
                {"certified", cleaned.certified()}, {"certificates", cleaned.certificates.size()}, {"aux_coloring", aux},
                {"part_sizes", sizes}, {"shrink_log", stage_log_json(cleaned)}, {"regime_flags", cleaned.regime_flags}};
        }

        embed_stage(rep, blowup, ctx, coloring, cleaned.aux_coloring, cleaned.trimmed_parts,
            cleaned.certified() && rep.certificate_failures == 0, embed, seed);
        return finish();
    }

    namespace
    {
        auto verify_base(const PipelineConfig & config, const Graph & base, std::vector<std::string> & flags) -> bool
        {
            if (config.host.trusted) {
                flags.push_back("base host trusted without an arrow check");
                return false;
            }
            try {
                auto res = arrows({base, config.pattern, config.q, CopyMode::subgraph});
                if (! res.arrows)
                    throw PreconditionFailed("the base host does not arrow the pattern in " + std::to_string(config.q) + " colors");
                return true;
            }
            catch (const BudgetExceeded &) {
                flags.push_back("base arrow check over budget; host used unverified");
                return false;
            }
        }

        auto make_gadget(const PipelineConfig & config, int a, int b, std::uint64_t seed) -> Gadget
        {
            GadgetOptions options;
            options.target_L = config.gadget.L;
            options.mode = config.gadget.mode;
            options.max_attempts = config.gadget.max_attempts;
            options.source = config.gadget.source;
            options.sampled_trials = config.gadget.sampled_trials;
            if (config.gadget.kind == "complete")
                return certify_external_gadget(Biadjacency(a, b, true), config.gadget.p, seed, options);
            return generate_regular_gadget(a, b, config.gadget.p, seed, options);
        }

        auto accounting(const Blowup & b) -> Json
        {
            std::int64_t vertices = 0, edges = 0;
            int s = 0;
            for (auto & part : b.parts) {
                vertices += static_cast<std::int64_t>(part.size());
                s = std::max(s, static_cast<int>(part.size()));
            }
            for (auto & e : b.base.edges())
                edges += b.block(e).edge_count();
            auto vb = static_cast<std::int64_t>(s) * b.base.size();
            auto eb = static_cast<std::int64_t>(s) * s * b.base.edge_count();
            return {{"host_vertices", b.host.size()}, {"sum_part_sizes", vertices}, {"vertices_consistent", vertices == b.host.size()},
                {"host_edges", b.host.edge_count()}, {"sum_block_edges", edges}, {"edges_consistent", edges == b.host.edge_count()},
                {"s", s}, {"vertex_bound", vb}, {"vertex_bound_paper_formula", "s|V(G)|"}, {"within_vertex_bound", vertices <= vb},
                {"edge_bound", eb}, {"edge_bound_paper_formula", "s^2 e(G)"}, {"within_edge_bound", edges <= eb}};
        }

        auto run_trials(const Blowup & blowup, const TrialContext & ctx, const PipelineConfig & config, CleanKind clean, EmbedKind embed)
            -> std::vector<TrialReport>
        {
            std::vector<TrialReport> reports(static_cast<std::size_t>(config.trials));
            std::uint64_t root = derive_seed(config.seed, 0x7d1a15);
            std::atomic<int> next{0};
            auto worker = [&]() {
                while (true) {
                    int t = next.fetch_add(1);
                    if (t >= config.trials)
                        return;
                    auto adversary = config.adversaries[static_cast<std::size_t>(t) % config.adversaries.size()];
                    auto rep = run_trial(blowup, ctx, clean, embed, adversary, derive_seed(root, static_cast<std::uint64_t>(t)));
                    rep.trial = t;
                    reports[t] = std::move(rep);
                }
            };
            int jobs = std::max(1, std::min(config.jobs, std::max(1, config.trials)));
            if (jobs == 1)
                worker();
            else {
                std::vector<std::thread> pool;
                for (int i = 0; i < jobs; ++i)
                    pool.emplace_back(worker);
                for (auto & th : pool)
                    th.join();
            }
            return reports;
        }

        auto finale(const PipelineConfig & config, const Blowup & blowup, const Graph & target) -> Json
        {
            if (! config.finale)
                return nullptr;
            try {
                auto res = arrows({blowup.host, target, config.q, CopyMode::induced}, config.finale_budget);
                Json j = {{"status", "decided"}, {"arrows_induced", res.arrows}, {"colorings_checked", res.colorings_checked}};
                if (res.counterexample)
                    j["counterexample"] = to_json(blowup.host, *res.counterexample);
                return j;
            }
            catch (const BudgetExceeded & e) {
                return {{"status", "over-budget"}, {"detail", e.what()}};
            }
        }

        auto summarize(PipelineResult & out, const Json & paper, const Json & engineering, const Json & fin, std::vector<std::string> flags)
            -> void
        {
            std::int64_t success = 0, violations = 0, law = 0, certified = 0, cert_fail = 0;
            for (auto & t : out.trials) {
                success += t.success;
                violations += static_cast<std::int64_t>(t.violations.size());
                certified += t.hypotheses_certified;
                if (t.hypotheses_certified)
                    law += t.law_violations;
                cert_fail += t.certificate_failures;
            }
            out.violations = violations;
            out.summary = {{"paper", paper}, {"engineering", engineering}, {"accounting", accounting(out.blowup)},
                {"gadget", to_json(out.gadget.certificate)}, {"base", to_json(out.base)}, {"finale", fin}, {"regime_flags", flags},
                {"trials", out.trials.size()}, {"successes", success}, {"violations", violations},
                {"certified_trials", certified}, {"law_violations_certified", law}, {"certificate_failures", cert_fail},
                {"success_rate", out.trials.empty() ? 0.0 : static_cast<double>(success) / static_cast<double>(out.trials.size())}};
        }

        auto gadget_counts(const Gadget & g, RegularityMode mode) -> bool
        {
            return g.certificate.valid() && mode == RegularityMode::two_sided && g.certificate.verification.method != "sampled";
        }
    }

    auto reduction_general(const PipelineConfig & config) -> PipelineResult
    {
        if (config.pattern.size() == 0)
            throw InvalidInput("/pattern: empty pattern");
        if (config.adversaries.empty())
            throw InvalidInput("/adversaries: at least one adversary required");
        PipelineResult out;
        std::vector<std::string> flags;
        bool base_arrows = false;
        if (config.host.graph) {
            out.base = *config.host.graph;
            base_arrows = verify_base(config, out.base, flags);
        }
        else {
            HostSearchOptions options;
            options.degree_cap = config.host.degree_cap;
            options.random_candidates = config.host.random_candidates;
            options.seed = derive_seed(config.seed, 0x4057);
            auto found = search_host(config.pattern, config.q, CopyMode::subgraph, config.host.max_vertices, options);
            if (! found.host)
                throw PreconditionFailed("host search found no graph arrowing the pattern within " + std::to_string(config.host.max_vertices)
                    + " vertices");
            out.base = *found.host;
            base_arrows = true;
        }

        out.gadget = make_gadget(config, config.s, config.s, derive_seed(config.seed, 0x9ad9e7));
        std::vector<int> sizes(static_cast<std::size_t>(out.base.size()), config.s);
        out.blowup = construct_blowup(out.base, sizes, [&](const Edge &, int, int) { return out.gadget.block; });

        TrialContext ctx;
        ctx.pattern = config.pattern;
        ctx.q = config.q;
        ctx.p = config.gadget.p;
        ctx.gadget_L = out.gadget.certificate.params_claimed.L;
        ctx.gadget_certified = gadget_counts(out.gadget, config.gadget.mode);
        ctx.base_arrows = base_arrows;
        ctx.eta = config.eta;
        ctx.clean_size = config.clean_size;
        ctx.stage_sizes = config.stage_sizes;
        ctx.rho = config.rho;
        ctx.timings = config.timings;
        out.trials = run_trials(out.blowup, ctx, config, CleanKind::regularity, EmbedKind::greedy);

        int k = config.pattern.max_degree();
        int delta = out.base.max_degree();
        Ratio p_paper(1, 100);
        Ratio rho_paper = p_paper / Ratio(4 * config.q);
        auto eta_paper = paper_eta(rho_paper, k, p_paper, delta);
        Json paper = {{"p", p_paper.to_string()}, {"p_paper_formula", "1/100"}, {"rho", rho_paper.to_string()}, {"rho_paper_formula", "p/4q"},
            {"eta", big_to_string(eta_paper)}, {"eta_paper_formula", "(rho/2)^k (1-2p)^Delta / (Delta+k)"}, {"k", k}, {"delta", delta}};
        try {
            auto constants = cleaning_constants(config.q, delta, p_paper, Ratio::from_big(eta_paper));
            TowerNumber neg_log2_eta(-std::log2(to_double(eta_paper)));
            auto log2_s = constants.neg_log2_lambda_product.plus(neg_log2_eta).times(2).plus(TowerNumber(std::log2(config.C)));
            paper["neg_log2_lambda"] = constants.neg_log2_lambda_product.to_string();
            paper["neg_log2_lambda_paper_formula"] = "-log2 prod_t lambda_t, lambda_t = (p/2q)^{13/eps_t}";
            paper["neg_log2_lambda_tower"] = constants.neg_log2_lambda_tower.to_string();
            paper["log2_s"] = log2_s.to_string();
            paper["log2_s_paper_formula"] = "log2(C (lambda eta)^-2)";
            if (TowerNumber(std::log2(static_cast<double>(config.s))).less_than(log2_s))
                flags.push_back("part size below the paper's s");
        }
        catch (const InvalidInput & e) {
            paper["neg_log2_lambda"] = std::string("unavailable: ") + e.what();
        }
        paper["C"] = config.C;
        Json engineering = {{"p", config.gadget.p.to_string()}, {"s", config.s}, {"eta", config.eta.to_string()},
            {"gadget_L", ctx.gadget_L.to_string()}, {"gadget_kind", config.gadget.kind},
            {"clean_size", config.clean_size ? Json(*config.clean_size) : Json((config.s + 1) / 2)},
            {"rho", ctx.rho.value_or(ctx.p / Ratio(4 * config.q)).to_string()}, {"q", config.q}, {"seed", seed_to_json(config.seed)},
            {"adversaries", [&]() {
                 Json a = Json::array();
                 for (auto adv : config.adversaries)
                     a.push_back(to_string(adv));
                 return a;
             }()},
            {"base_arrows_verified", base_arrows}};
        summarize(out, paper, engineering, finale(config, out.blowup, config.pattern), flags);
        out.summary["reduction"] = "general";
        return out;
    }

    auto reduction_bipartite(const PipelineConfig & config) -> PipelineResult
    {
        if (! config.w)
            throw InvalidInput("/w: the bipartite reduction needs w");
        if (config.pattern.size() == 0)
            throw InvalidInput("/pattern: empty pattern");
        if (config.adversaries.empty())
            throw InvalidInput("/adversaries: at least one adversary required");
        if (! bipartition(config.pattern))
            throw PreconditionFailed("the pattern is not bipartite");
        int w = *config.w;
        PipelineResult out;
        std::vector<std::string> flags;
        bool base_arrows = false;
        if (config.host.graph) {
            out.base = *config.host.graph;
            base_arrows = verify_base(config, out.base, flags);
        }
        else {
            for (int a = 1; 2 * a <= config.host.max_vertices && ! base_arrows; ++a) {
                auto g = complete_bipartite_graph(a, a);
                if (config.host.degree_cap && a > *config.host.degree_cap)
                    break;
                try {
                    if (arrows({g, config.pattern, config.q, CopyMode::subgraph}).arrows) {
                        out.base = g;
                        base_arrows = true;
                    }
                }
                catch (const BudgetExceeded &) {
                    break;
                }
            }
            if (! base_arrows)
                throw PreconditionFailed("no complete bipartite host within " + std::to_string(config.host.max_vertices) + " vertices arrows the pattern");
        }
        auto sides = bipartition(out.base);
        if (! sides)
            throw PreconditionFailed("the base host is not bipartite");

        int s = config.s;
        int s0 = config.s0.value_or(config.s);
        out.gadget = make_gadget(config, s, s0, derive_seed(config.seed, 0x9ad9e7));
        std::vector<int> sizes;
        std::vector<int> a_side;
        for (int v = 0; v < out.base.size(); ++v) {
            sizes.push_back((*sides)[v] == 0 ? s : s0);
            if ((*sides)[v] == 0)
                a_side.push_back(v);
        }
        auto transposed = out.gadget.block.transpose();
        out.blowup = construct_blowup(out.base, sizes, [&](const Edge & e, int, int) {
            return (*sides)[e.u] == 0 ? out.gadget.block : transposed;
        });

        TrialContext ctx;
        ctx.pattern = config.pattern;
        ctx.hprime = config.hprime;
        ctx.w = w;
        ctx.q = config.q;
        ctx.p = config.gadget.p;
        ctx.gadget_L = out.gadget.certificate.params_claimed.L;
        ctx.gadget_certified = gadget_counts(out.gadget, config.gadget.mode);
        ctx.base_arrows = base_arrows;
        ctx.eta = config.eta;
        ctx.drc_h = config.drc_h;
        ctx.drc_min_subset = config.drc_min_subset;
        ctx.max_resample = config.max_resample;
        ctx.a_side = a_side;
        ctx.timings = config.timings;
        if (config.hprime) {
            if (config.hprime->size() != config.pattern.size() * w)
                throw InvalidInput("/hprime: expected |V(H)| * w vertices");
            if (config.hprime->size() <= blowup_search_cap && ! is_blowup_of(*config.hprime, config.pattern, w))
                throw PreconditionFailed("hprime is not a w-blowup of the pattern");
        }
        out.trials = run_trials(out.blowup, ctx, config, CleanKind::drc, EmbedKind::lll);

        int k = config.pattern.max_degree();
        int delta = out.base.max_degree();
        Json paper = {{"k", k}, {"delta", delta}, {"w", w}, {"r", k * w}, {"r_paper_formula", "kw"}, {"C", config.C}};
        if (delta > 0) {
            Ratio p_paper(1, 4 * delta);
            double c = std::log2(2.0 * config.q / p_paper.to_double());
            double log2_s = config.C * delta * delta * k * w * c;
            paper["p"] = p_paper.to_string();
            paper["p_paper_formula"] = "1/(4 Delta)";
            paper["log2_s"] = log2_s;
            paper["log2_s_paper_formula"] = "C Delta^2 k w log2(2q/p)";
            paper["log2_s_statement"] = config.C * k * delta * delta * w * std::log2(static_cast<double>(delta) * config.q);
            paper["log2_s_statement_paper_formula"] = "C k Delta^2 w log2(Delta q)";
            paper["log2_s0"] = log2_s / 3;
            paper["log2_s0_paper_formula"] = "log2(s^{1/3})";
            paper["log2_L_bound"] = log2_s / 9;
            paper["log2_L_bound_paper_formula"] = "log2(s^{1/9})";
            paper["log2_y_shrink"] = -5.0 * delta * delta * k * w * c;
            paper["log2_y_shrink_paper_formula"] = "log2((p/2q)^{5 Delta^2 r})";
            if (std::log2(static_cast<double>(s)) < log2_s)
                flags.push_back("part size below the paper's s");
        }
        Json engineering = {{"p", config.gadget.p.to_string()}, {"s", s}, {"s0", s0}, {"gadget_L", ctx.gadget_L.to_string()},
            {"gadget_kind", config.gadget.kind}, {"q", config.q}, {"w", w}, {"seed", seed_to_json(config.seed)},
            {"drc_h", config.drc_h ? Json(*config.drc_h) : Json(4 * k * w)}, {"base_arrows_verified", base_arrows}, {"a_side", a_side}};
        auto target = config.hprime.value_or(complete_w_blowup(config.pattern, w));
        summarize(out, paper, engineering, finale(config, out.blowup, target), flags);
        out.summary["reduction"] = "bipartite";
        return out;
    }

    auto run_pipeline(const PipelineConfig & config) -> PipelineResult
    {
        return config.w ? reduction_bipartite(config) : reduction_general(config);
    }
}
