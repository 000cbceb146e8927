#include <indram/cli.hpp>
#include <indram/coloring.hpp>
#include <indram/errors.hpp>
#include <indram/gadgets.hpp>
#include <indram/oracles.hpp>
#include <indram/pipeline.hpp>
#include <indram/rng.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace indram
{
    auto to_json(const Graph & base, const CleaningOutcome & o) -> Json
    {
        Json certs = Json::array();
        for (auto & c : o.certificates) {
            Json j = {{"edge", edge_key(c.edge)}, {"color", c.color}, {"certified", c.certified()}};
            j["regularity"] = c.regularity ? to_json(*c.regularity) : Json(nullptr);
            if (c.common)
                j["common"] = {{"a", c.common->a}, {"min_count", c.common->min_count}, {"bound_squared_numerator", c.common->bound_numerator},
                    {"bound_squared_denominator", c.common->bound_denominator}, {"bound_paper_formula", "sqrt(|X_a| / 2q^Delta)"},
                    {"exhaustive", c.common->exhaustive}, {"holds", c.common->holds}};
            else
                j["common"] = nullptr;
            certs.push_back(std::move(j));
        }
        Json log = Json::array();
        for (auto & s : o.shrink_log) {
            Json edges = Json::array();
            for (auto & e : s.edges)
                edges.push_back(edge_key(e));
            log.push_back({{"stage", s.stage}, {"size", s.size}, {"edges", edges}, {"neg_log2_paper_factor", s.neg_log2_paper_factor},
                {"part_sizes", s.part_sizes}});
        }
        return {{"aux_coloring", to_json(base, o.aux_coloring)}, {"trimmed_parts", o.trimmed_parts}, {"certificates", certs},
            {"shrink_log", log}, {"regime_flags", o.regime_flags}, {"in_regime", o.in_regime()}, {"certified", o.certified()}};
    }

    namespace
    {
        auto parse_ratio(const std::string & text, const std::string & flag) -> Ratio
        {
            try {
                return Ratio::parse(text);
            }
            catch (const InvalidInput & e) {
                throw InvalidInput(flag + ": " + e.what());
            }
        }

        auto parse_int_list(const std::string & text, const std::string & flag) -> std::vector<int>
        {
            std::vector<int> out;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    std::size_t used = 0;
                    int v = std::stoi(item, &used);
                    if (used != item.size())
                        throw std::invalid_argument(item);
                    out.push_back(v);
                }
                catch (const std::exception &) {
                    throw InvalidInput(flag + ": '" + item + "' is not an integer");
                }
            }
            return out;
        }

        /// Accepts either the object itself or a wrapper holding it under `key`.
        auto unwrap(const Json & j, const std::string & key) -> std::pair<const Json &, std::string>
        {
            if (j.is_object() && j.contains(key) && j[key].is_object())
                return {j[key], "/" + key};
            return {j, ""};
        }

        auto load_graph(const std::string & file) -> Graph
        {
            auto j = read_json_file(file);
            auto [g, path] = unwrap(j, "graph");
            try {
                return graph_from_json(g, path);
            }
            catch (const InvalidInput & e) {
                throw InvalidInput(file + ": " + e.what());
            }
        }

        auto load_blowup(const std::string & file) -> Blowup
        {
            auto j = read_json_file(file);
            auto [b, path] = unwrap(j, "blowup");
            try {
                return blowup_from_json(b, path);
            }
            catch (const InvalidInput & e) {
                throw InvalidInput(file + ": " + e.what());
            }
        }

        auto load_coloring(const Graph & g, const std::string & file) -> EdgeColoring
        {
            auto j = read_json_file(file);
            auto [c, path] = unwrap(j, "coloring");
            try {
                return coloring_from_json(g, c, path);
            }
            catch (const InvalidInput & e) {
                throw InvalidInput(file + ": " + e.what());
            }
        }

        auto load_block(const std::string & file) -> Biadjacency
        {
            auto j = read_json_file(file);
            auto [b, path] = unwrap(j, "block");
            try {
                return block_from_json(b, path);
            }
            catch (const InvalidInput & e) {
                throw InvalidInput(file + ": " + e.what());
            }
        }

        auto mode_of(bool induced) -> CopyMode
        {
            return induced ? CopyMode::induced : CopyMode::subgraph;
        }

        auto regularity_mode(const std::string & m) -> RegularityMode
        {
            if (m == "two-sided")
                return RegularityMode::two_sided;
            if (m == "lower")
                return RegularityMode::lower_only;
            throw InvalidInput("--mode: expected two-sided or lower");
        }

        struct Emitter
        {
            std::ostream & out;
            std::string command;
            std::string buffer;

            auto emit(const Json & j) -> void
            {
                auto text = canonical_dump(j);
                out << text;
                buffer += text;
            }

            auto flush_report() -> void
            {
                const char * dir = std::getenv("INDRAM_REPORT_DIR");
                if (! dir || ! *dir)
                    return;
                std::filesystem::create_directories(dir);
                std::ofstream f(std::filesystem::path(dir) / (command + ".json"), std::ios::binary);
                if (! f)
                    throw InvalidInput(std::string("INDRAM_REPORT_DIR: cannot write to ") + dir);
                f << buffer;
            }
        };

        auto error_json(const std::string & kind, const std::string & message) -> std::string
        {
            return canonical_dump({{"error", kind}, {"message", message}});
        }
    }

    auto run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int
    {
        CLI::App app{"Induced-Ramsey host construction: gadgets, blowups, cleaning, embedding and exact oracles."};
        app.name(args.empty() ? "indram" : args[0]);
        app.require_subcommand(1);
        std::function<int(Emitter &)> action;
        std::string command;

        // gadget
        auto * gadget = app.add_subcommand("gadget", "Generate and certify a pseudorandom bipartite gadget");
        struct
        {
            int a = 0, b = 0, max_attempts = 50;
            std::string p, L, mode = "two-sided", source = "direct", external;
            std::uint64_t seed = 0;
            std::int64_t sampled_trials = 20'000;
        } ga;
        gadget->add_option("--a", ga.a, "Rows")->required();
        gadget->add_option("--b", ga.b, "Columns")->required();
        gadget->add_option("--p", ga.p, "Density (rational or decimal)")->required();
        gadget->add_option("--L", ga.L, "Regularity threshold (defaults to the paper threshold, rounded up)");
        gadget->add_option("--seed", ga.seed, "Root seed")->capture_default_str();
        gadget->add_option("--mode", ga.mode, "two-sided or lower")->capture_default_str();
        gadget->add_option("--source", ga.source, "direct or ambient")->capture_default_str();
        gadget->add_option("--max-attempts", ga.max_attempts)->capture_default_str();
        gadget->add_option("--sampled-trials", ga.sampled_trials)->capture_default_str();
        gadget->add_option("--external", ga.external, "Certify this block file instead of sampling");
        gadget->callback([&]() {
            command = "gadget";
            action = [&](Emitter & em) {
                GadgetOptions o;
                if (! ga.L.empty())
                    o.target_L = parse_ratio(ga.L, "--L");
                o.mode = regularity_mode(ga.mode);
                o.source = parse_gadget_source(ga.source);
                o.max_attempts = ga.max_attempts;
                o.sampled_trials = ga.sampled_trials;
                auto p = parse_ratio(ga.p, "--p");
                Gadget g = ga.external.empty() ? generate_regular_gadget(ga.a, ga.b, p, ga.seed, o)
                                               : certify_external_gadget(load_block(ga.external), p, ga.seed, o);
                em.emit({{"block", block_to_json(g.block)}, {"certificate", to_json(g.certificate)}, {"seed", seed_to_json(ga.seed)}});
                return g.certificate.valid() || g.certificate.verification.status == VerdictStatus::inconclusive ? exit_ok : exit_usage;
            };
        });

        // blowup
        auto * blowup = app.add_subcommand("blowup", "Build an s-blowup with one gadget per base edge");
        struct
        {
            std::string base, sizes, gadget, p, L;
            int s = 0;
            bool complete = false;
            std::uint64_t seed = 0;
        } bl;
        blowup->add_option("--base", bl.base, "Base graph file")->required();
        blowup->add_option("--s", bl.s, "Common part size");
        blowup->add_option("--sizes", bl.sizes, "Comma-separated part sizes");
        blowup->add_option("--gadget", bl.gadget, "Gadget file (output of the gadget command)");
        blowup->add_flag("--complete", bl.complete, "Complete blocks");
        blowup->add_option("--p", bl.p, "Density of per-edge generated gadgets");
        blowup->add_option("--L", bl.L, "Threshold of per-edge generated gadgets");
        blowup->add_option("--seed", bl.seed)->capture_default_str();
        blowup->callback([&]() {
            command = "blowup";
            action = [&](Emitter & em) {
                auto base = load_graph(bl.base);
                std::vector<int> sizes;
                if (! bl.sizes.empty())
                    sizes = parse_int_list(bl.sizes, "--sizes");
                else if (bl.s > 0)
                    sizes.assign(static_cast<std::size_t>(base.size()), bl.s);
                else
                    throw InvalidInput("either --s or --sizes is required");
                if (static_cast<int>(sizes.size()) != base.size())
                    throw InvalidInput("--sizes: expected " + std::to_string(base.size()) + " sizes");
                Json certs = Json::object();
                BlockProvider provider;
                std::optional<Biadjacency> fixed;
                if (! bl.gadget.empty())
                    fixed = load_block(bl.gadget);
                provider = [&](const Edge & e, int rows, int cols) -> Biadjacency {
                    if (bl.complete)
                        return Biadjacency(rows, cols, true);
                    if (fixed) {
                        if (fixed->rows == rows && fixed->cols == cols)
                            return *fixed;
                        if (fixed->rows == cols && fixed->cols == rows)
                            return fixed->transpose();
                        throw InvalidInput("--gadget: block shape does not fit edge " + edge_key(e));
                    }
                    if (bl.p.empty())
                        throw InvalidInput("one of --gadget, --complete or --p is required");
                    GadgetOptions o;
                    if (! bl.L.empty())
                        o.target_L = parse_ratio(bl.L, "--L");
                    auto g = generate_regular_gadget(rows, cols, parse_ratio(bl.p, "--p"),
                        derive_seed(bl.seed, static_cast<std::uint64_t>(e.u) * 65'537 + e.v), o);
                    certs[edge_key(e)] = to_json(g.certificate);
                    return g.block;
                };
                auto b = construct_blowup(base, sizes, provider);
                auto j = to_json(b);
                j["certificates"] = certs;
                j["seed"] = seed_to_json(bl.seed);
                em.emit(j);
                return exit_ok;
            };
        });

        // color
        auto * color = app.add_subcommand("color", "Vizing matchings, LLL coloring, or an adversarial blowup coloring");
        struct
        {
            std::string graph, blowup, adversary = "uniform-random";
            bool vizing = false, lll = false;
            int w = 2, q = 2;
            std::int64_t max_resample = 1000;
            std::uint64_t seed = 0;
        } co;
        color->add_option("--graph", co.graph, "Graph file (for --vizing or --lll)");
        color->add_option("--blowup", co.blowup, "Blowup file (for --adversary)");
        color->add_flag("--vizing", co.vizing, "Proper edge coloring as Delta+1 matchings");
        color->add_flag("--lll", co.lll, "Two-coloring without monochromatic K_{w,w}");
        color->add_option("--w", co.w)->capture_default_str();
        color->add_option("--q", co.q)->capture_default_str();
        color->add_option("--max-resample", co.max_resample)->capture_default_str();
        color->add_option("--adversary", co.adversary, "uniform-random, per-base-edge-majority, part-index-parity, half-split-within-block")
            ->capture_default_str();
        color->add_option("--seed", co.seed)->capture_default_str();
        color->callback([&]() {
            command = "color";
            action = [&](Emitter & em) {
                if (co.vizing || co.lll) {
                    if (co.graph.empty())
                        throw InvalidInput("--graph is required with --vizing or --lll");
                    auto g = load_graph(co.graph);
                    if (co.vizing) {
                        auto d = vizing_matchings(g);
                        auto j = to_json(d);
                        j["max_degree"] = g.max_degree();
                        j["proper"] = is_proper_decomposition(g, d);
                        EdgeColoring c(g, std::max<int>(1, static_cast<int>(d.matchings.size())));
                        for (std::size_t i = 0; i < d.matchings.size(); ++i)
                            for (auto & e : d.matchings[i])
                                c.set(e.u, e.v, static_cast<int>(i));
                        j["coloring"] = to_json(g, c);
                        em.emit(j);
                        return is_proper_decomposition(g, d) ? exit_ok : exit_violation;
                    }
                    auto r = lll_avoid_mono_biclique(g, co.w, co.max_resample, co.seed);
                    em.emit({{"coloring", to_json(g, r.coloring)}, {"resamples", r.resamples}, {"events", r.events},
                        {"dependency_degree", r.dependency_degree}, {"log2_event_probability", r.log2_event_probability},
                        {"log2_event_probability_paper_formula", "1 - w^2"}, {"lll_condition", r.lll_condition},
                        {"lll_condition_paper_formula", "e (D+1) 2^{1-w^2} < 1"}, {"monochromatic_copies", r.monochromatic_copies},
                        {"verified", r.verified}, {"seed", seed_to_json(co.seed)}, {"w", co.w}});
                    return r.verified ? exit_ok : exit_violation;
                }
                if (co.blowup.empty())
                    throw InvalidInput("one of --vizing, --lll or --blowup is required");
                auto b = load_blowup(co.blowup);
                auto c = adversary_color(b, parse_adversary(co.adversary), co.q, co.seed);
                auto j = to_json(b.host, c);
                j["adversary"] = co.adversary;
                j["seed"] = seed_to_json(co.seed);
                em.emit(j);
                return exit_ok;
            };
        });

        // clean
        auto * clean = app.add_subcommand("clean", "Regularity or DRC cleaning of a colored blowup, or the paper constants");
        struct
        {
            std::string blowup, coloring, kind = "regularity", p, eta = "1/2", L, a_side, stage_sizes;
            bool constants = false;
            int q = 2, delta = 1, r = 1, s0 = 0, h = 0;
            std::uint64_t seed = 0;
        } cl;
        clean->add_option("--blowup", cl.blowup);
        clean->add_option("--coloring", cl.coloring);
        clean->add_option("--kind", cl.kind, "regularity or drc")->capture_default_str();
        clean->add_flag("--constants", cl.constants, "Print the paper's cleaning constants");
        clean->add_option("--q", cl.q)->capture_default_str();
        clean->add_option("--delta", cl.delta, "Maximum degree (with --constants)")->capture_default_str();
        clean->add_option("--p", cl.p, "Gadget density parameter");
        clean->add_option("--eta", cl.eta)->capture_default_str();
        clean->add_option("--L", cl.L, "Regularity threshold of the gadget (drc)");
        clean->add_option("--r", cl.r, "Tuple size (drc)")->capture_default_str();
        clean->add_option("--sample-size", cl.h, "Sample size of star cleaning (drc, default 4r)");
        clean->add_option("--s0", cl.s0, "Final part size (regularity)");
        clean->add_option("--stage-sizes", cl.stage_sizes, "Comma-separated stage sizes (regularity)");
        clean->add_option("--a-side", cl.a_side, "Comma-separated A-side base vertices (drc)");
        clean->add_option("--seed", cl.seed)->capture_default_str();
        clean->callback([&]() {
            command = "clean";
            action = [&](Emitter & em) {
                if (cl.p.empty())
                    throw InvalidInput("--p is required");
                auto p = parse_ratio(cl.p, "--p");
                auto eta = parse_ratio(cl.eta, "--eta");
                if (cl.constants) {
                    auto k = cleaning_constants(cl.q, cl.delta, p, eta);
                    Json eps = Json::array(), lam = Json::array(), tower = Json::array();
                    for (auto & t : k.neg_log2_eps)
                        eps.push_back(t.to_string());
                    for (auto & t : k.neg_log2_lambda)
                        lam.push_back(t.to_string());
                    for (auto & t : k.tower_levels)
                        tower.push_back(t.to_string());
                    em.emit({{"q", k.q}, {"delta", k.delta}, {"p", k.p.to_string()}, {"eta", k.eta.to_string()}, {"c", k.c},
                        {"c_paper_formula", "log2(2q/p)"}, {"log2_lambda_matching", k.log2_lambda_matching},
                        {"log2_lambda_matching_paper_formula", "log2((p/2q)^{13/eta})"},
                        {"log2_lambda_matching_half", k.log2_lambda_matching_half},
                        {"log2_lambda_matching_half_paper_formula", "log2((1/2)(p/2q)^{12/eta})"}, {"neg_log2_eps", eps},
                        {"neg_log2_lambda", lam}, {"neg_log2_lambda_paper_formula", "-log2((p/2q)^{13/eps_t})"},
                        {"neg_log2_lambda_product", k.neg_log2_lambda_product.to_string()},
                        {"neg_log2_lambda_product_paper_formula", "-log2(prod_t lambda_t)"}, {"tower_levels", tower},
                        {"neg_log2_lambda_tower", k.neg_log2_lambda_tower.to_string()},
                        {"neg_log2_lambda_tower_paper_formula", "-log2((p/2q)^{14/(p/2q)^{14/...^{14/eta}}})"}});
                    return exit_ok;
                }
                if (cl.blowup.empty() || cl.coloring.empty())
                    throw InvalidInput("--blowup and --coloring are required");
                auto b = load_blowup(cl.blowup);
                auto c = load_coloring(b.host, cl.coloring);
                CleaningOutcome o;
                if (cl.kind == "regularity") {
                    RegularityCleanOptions opt;
                    if (cl.s0 > 0)
                        opt.s0 = cl.s0;
                    if (! cl.stage_sizes.empty())
                        opt.stage_sizes = parse_int_list(cl.stage_sizes, "--stage-sizes");
                    o = regularity_clean(b, c, p, cl.q, eta, cl.seed, opt);
                }
                else if (cl.kind == "drc") {
                    if (cl.L.empty())
                        throw InvalidInput("--L is required for drc cleaning");
                    DrcCleanOptions opt;
                    if (cl.h > 0)
                        opt.star.h = cl.h;
                    std::optional<std::vector<int>> a;
                    if (! cl.a_side.empty())
                        a = parse_int_list(cl.a_side, "--a-side");
                    o = drc_clean(b, c, cl.r, cl.q, parse_ratio(cl.L, "--L"), p, cl.seed, a, opt);
                }
                else
                    throw InvalidInput("--kind: expected regularity or drc");
                auto j = to_json(b.base, o);
                j["kind"] = cl.kind;
                j["seed"] = seed_to_json(cl.seed);
                em.emit(j);
                return exit_ok;
            };
        });

        // embed
        auto * embed = app.add_subcommand("embed", "Find a monochromatic base copy and embed the pattern into a cleaned blowup");
        struct
        {
            std::string blowup, coloring, clean, pattern, kind = "greedy", p, L, eta = "1/2", rho, hprime, a_side;
            int w = 1;
            std::int64_t max_resample = 1000;
            std::uint64_t seed = 0;
        } em_args;
        embed->add_option("--blowup", em_args.blowup)->required();
        embed->add_option("--coloring", em_args.coloring)->required();
        embed->add_option("--clean", em_args.clean, "Output of the clean command")->required();
        embed->add_option("--pattern", em_args.pattern)->required();
        embed->add_option("--kind", em_args.kind, "greedy or lll")->capture_default_str();
        embed->add_option("--p", em_args.p, "Regularity density of the gadget")->required();
        embed->add_option("--L", em_args.L, "Regularity threshold of the gadget")->required();
        embed->add_option("--eta", em_args.eta, "Cleaning margin (greedy)")->capture_default_str();
        embed->add_option("--rho", em_args.rho, "Lower-regularity density of H* (greedy, default p/4q)");
        embed->add_option("--w", em_args.w, "Blowup width (lll)")->capture_default_str();
        embed->add_option("--hprime", em_args.hprime, "Declared w-blowup of the pattern (lll)");
        embed->add_option("--a-side", em_args.a_side, "Comma-separated A-side base vertices (lll)");
        embed->add_option("--max-resample", em_args.max_resample)->capture_default_str();
        embed->add_option("--seed", em_args.seed)->capture_default_str();
        embed->callback([&]() {
            command = "embed";
            action = [&](Emitter & em) {
                auto b = load_blowup(em_args.blowup);
                auto c = load_coloring(b.host, em_args.coloring);
                auto cj = read_json_file(em_args.clean);
                auto aux = coloring_from_json(b.base, require(cj, "aux_coloring", ""), "/aux_coloring");
                auto & tp = require(cj, "trimmed_parts", "");
                if (! tp.is_array() || tp.size() != static_cast<std::size_t>(b.base.size()))
                    throw InvalidInput(em_args.clean + ": /trimmed_parts: expected one part per base vertex");
                std::vector<std::vector<int>> parts;
                for (std::size_t v = 0; v < tp.size(); ++v) {
                    std::vector<int> part;
                    for (std::size_t i = 0; i < tp[v].size(); ++i) {
                        auto x = get_int(tp[v][i], "/trimmed_parts/" + std::to_string(v) + "/" + std::to_string(i));
                        if (x < 0 || x >= b.host.size() || b.phi[x] != static_cast<int>(v))
                            throw InvalidInput(em_args.clean + ": /trimmed_parts/" + std::to_string(v) + "/" + std::to_string(i)
                                + ": not a vertex of part " + std::to_string(v));
                        part.push_back(static_cast<int>(x));
                    }
                    parts.push_back(std::move(part));
                }
                bool certified = cj.contains("certified") && cj["certified"].is_boolean() && cj["certified"].get<bool>();

                TrialContext ctx;
                ctx.pattern = load_graph(em_args.pattern);
                ctx.q = c.q();
                ctx.p = parse_ratio(em_args.p, "--p");
                ctx.gadget_L = parse_ratio(em_args.L, "--L");
                ctx.gadget_certified = false;
                ctx.eta = parse_ratio(em_args.eta, "--eta");
                if (! em_args.rho.empty())
                    ctx.rho = parse_ratio(em_args.rho, "--rho");
                ctx.w = em_args.w;
                ctx.max_resample = em_args.max_resample;
                EmbedKind kind;
                if (em_args.kind == "greedy")
                    kind = EmbedKind::greedy;
                else if (em_args.kind == "lll") {
                    kind = EmbedKind::lll;
                    if (! em_args.hprime.empty())
                        ctx.hprime = load_graph(em_args.hprime);
                    if (! em_args.a_side.empty())
                        ctx.a_side = parse_int_list(em_args.a_side, "--a-side");
                    else {
                        auto sides = bipartition(b.base);
                        if (! sides)
                            throw PreconditionFailed("the base graph is not bipartite");
                        for (int v = 0; v < b.base.size(); ++v)
                            if ((*sides)[v] == 0)
                                ctx.a_side.push_back(v);
                    }
                }
                else
                    throw InvalidInput("--kind: expected greedy or lll");
                auto rep = embed_after_cleaning(b, ctx, c, aux, parts, certified, kind, em_args.seed);
                auto j = to_json(rep, false);
                j.erase("trial");
                j.erase("adversary");
                if (rep.success) {
                    auto & stage = rep.stages["embedding"];
                    Graph pat = kind == EmbedKind::greedy ? ctx.pattern : ctx.hprime.value_or(complete_w_blowup(ctx.pattern, ctx.w));
                    j["embedding"] = {{"pattern", to_json(pat)}, {"map", stage["map"]}, {"color", *rep.color}};
                }
                em.emit(j);
                return rep.violations.empty() ? exit_ok : exit_violation;
            };
        });

        // arrows
        auto * arr = app.add_subcommand("arrows", "Decide G -> (H)_q or a density arrow exhaustively");
        struct
        {
            std::string host, pattern, gamma;
            int q = 2;
            bool induced = false;
            std::int64_t budget = arrows_budget;
        } ar;
        arr->add_option("--host", ar.host)->required();
        arr->add_option("--pattern", ar.pattern)->required();
        arr->add_option("--q", ar.q)->capture_default_str();
        arr->add_option("--gamma", ar.gamma, "Density arrow threshold instead of colorings");
        arr->add_flag("--induced", ar.induced, "Require induced copies");
        arr->add_option("--budget", ar.budget)->capture_default_str();
        arr->callback([&]() {
            command = "arrows";
            action = [&](Emitter & em) {
                auto host = load_graph(ar.host);
                auto pattern = load_graph(ar.pattern);
                auto mode = mode_of(ar.induced);
                if (! ar.gamma.empty()) {
                    auto gamma = parse_ratio(ar.gamma, "--gamma");
                    auto r = arrows_density(host, pattern, gamma, mode, ar.budget);
                    em.emit({{"arrows", r.arrows}, {"gamma", gamma.to_string()}, {"mode", to_string(mode)},
                        {"edges_required", r.edges_required}, {"subsets_checked", r.subsets_checked},
                        {"counterexample", r.counterexample ? to_json(*r.counterexample) : Json(nullptr)}});
                    return exit_ok;
                }
                auto r = arrows({host, pattern, ar.q, mode}, ar.budget);
                Json cx = nullptr;
                if (r.counterexample) {
                    if (find_copy(host, pattern, mode, &*r.counterexample))
                        throw InvariantViolation("counterexample coloring contains a monochromatic copy");
                    cx = to_json(host, *r.counterexample);
                }
                em.emit({{"arrows", r.arrows}, {"q", ar.q}, {"mode", to_string(mode)}, {"colorings_checked", r.colorings_checked},
                    {"counterexample", cx}});
                return exit_ok;
            };
        });

        // host-search
        auto * hs = app.add_subcommand("host-search", "Search small hosts arrowing a pattern, or degree-prune a host");
        struct
        {
            std::string pattern, prune;
            int q = 2, max_vertices = 6, degree_cap = -1, random_candidates = 20, k = 1, D = 1, n = -1;
            bool induced = false;
            std::uint64_t seed = 0;
            std::int64_t budget = arrows_budget;
        } hsa;
        hs->add_option("--pattern", hsa.pattern);
        hs->add_option("--q", hsa.q)->capture_default_str();
        hs->add_option("--max-vertices", hsa.max_vertices)->capture_default_str();
        hs->add_option("--degree-cap", hsa.degree_cap, "Maximum degree of candidates");
        hs->add_option("--random-candidates", hsa.random_candidates)->capture_default_str();
        hs->add_flag("--induced", hsa.induced);
        hs->add_option("--seed", hsa.seed)->capture_default_str();
        hs->add_option("--budget", hsa.budget)->capture_default_str();
        hs->add_option("--prune", hsa.prune, "Host file to degree-prune instead of searching");
        hs->add_option("--k", hsa.k, "Pattern maximum degree (prune)")->capture_default_str();
        hs->add_option("--D", hsa.D, "Edge density constant (prune)")->capture_default_str();
        hs->add_option("--n", hsa.n, "Pattern vertex count (prune)");
        hs->callback([&]() {
            command = "host-search";
            action = [&](Emitter & em) {
                if (! hsa.prune.empty()) {
                    auto g0 = load_graph(hsa.prune);
                    auto r = degree_prune_host(g0, hsa.k, hsa.D, hsa.n >= 0 ? std::optional<int>(hsa.n) : std::nullopt);
                    em.emit({{"graph", to_json(r.pruned.graph)}, {"original", r.pruned.original}, {"degree_limit", r.degree_limit},
                        {"degree_limit_paper_formula", "4kD"},
                        {"vertex_bound", r.vertex_bound ? Json(*r.vertex_bound) : Json(nullptr)}, {"vertex_bound_paper_formula", "2Dn"},
                        {"within_bound", r.within_bound}, {"max_degree", r.pruned.graph.max_degree()}});
                    return exit_ok;
                }
                if (hsa.pattern.empty())
                    throw InvalidInput("--pattern is required");
                HostSearchOptions o;
                if (hsa.degree_cap >= 0)
                    o.degree_cap = hsa.degree_cap;
                o.random_candidates = hsa.random_candidates;
                o.seed = hsa.seed;
                o.budget = hsa.budget;
                auto r = search_host(load_graph(hsa.pattern), hsa.q, mode_of(hsa.induced), hsa.max_vertices, o);
                Json log = Json::array();
                for (auto & e : r.log)
                    log.push_back({{"candidate", e.candidate}, {"vertices", e.vertices}, {"edges", e.edges}, {"verdict", e.verdict}});
                em.emit({{"found", r.host.has_value()}, {"host", r.host ? to_json(*r.host) : Json(nullptr)}, {"log", log},
                    {"seed", seed_to_json(hsa.seed)}});
                return exit_ok;
            };
        });

        // pipeline
        auto * pl = app.add_subcommand("pipeline", "Run a reduction end to end; one JSON line per trial, then a summary line");
        struct
        {
            std::string config;
            int jobs = 1;
            bool timings = false;
        } pa;
        pl->add_option("--config", pa.config, "PipelineConfig JSON file")->required();
        pl->add_option("--jobs", pa.jobs, "Worker threads")->capture_default_str();
        pl->add_flag("--timings", pa.timings, "Add wall-clock seconds to trial reports");
        pl->callback([&]() {
            command = "pipeline";
            action = [&](Emitter & em) {
                auto j = read_json_file(pa.config);
                PipelineConfig config;
                try {
                    config = pipeline_config_from_json(j);
                }
                catch (const InvalidInput & e) {
                    throw InvalidInput(pa.config + ": " + e.what());
                }
                config.jobs = std::max(1, pa.jobs);
                config.timings = pa.timings;
                auto result = run_pipeline(config);
                for (auto & t : result.trials)
                    em.emit(to_json(t, pa.timings));
                em.emit({{"summary", result.summary}});
                return result.violations == 0 ? exit_ok : exit_violation;
            };
        });

        // verify
        auto * vf = app.add_subcommand("verify", "Check a blowup, an embedding, a coloring or a gadget");
        struct
        {
            std::string blowup, embedding, host, coloring, graph, gadget, p, L, mode = "two-sided";
            int s = 0;
            std::uint64_t seed = 0;
        } va;
        vf->add_option("--blowup", va.blowup);
        vf->add_option("--s", va.s, "Maximum part size (with --blowup)");
        vf->add_option("--embedding", va.embedding, "Embedding file ({pattern, map, color})");
        vf->add_option("--host", va.host, "Host graph or blowup file (with --embedding)");
        vf->add_option("--coloring", va.coloring);
        vf->add_option("--graph", va.graph, "Graph the coloring should cover");
        vf->add_option("--gadget", va.gadget, "Block file to re-certify");
        vf->add_option("--p", va.p);
        vf->add_option("--L", va.L);
        vf->add_option("--mode", va.mode)->capture_default_str();
        vf->add_option("--seed", va.seed)->capture_default_str();
        vf->callback([&]() {
            command = "verify";
            action = [&](Emitter & em) {
                if (! va.blowup.empty()) {
                    if (va.s <= 0)
                        throw InvalidInput("--s is required with --blowup");
                    auto check = verify_blowup(load_blowup(va.blowup), va.s);
                    em.emit({{"ok", check.ok}, {"violations", check.violations},
                        {"offending_edge", check.offending_edge ? Json(edge_key(*check.offending_edge)) : Json(nullptr)}});
                    return check.ok ? exit_ok : exit_violation;
                }
                if (! va.embedding.empty()) {
                    if (va.host.empty())
                        throw InvalidInput("--host is required with --embedding");
                    auto hj = read_json_file(va.host);
                    Graph host;
                    if (hj.contains("blocks") || hj.contains("blowup"))
                        host = load_blowup(va.host).host;
                    else
                        host = load_graph(va.host);
                    auto ej = read_json_file(va.embedding);
                    auto [e, path] = unwrap(ej, "embedding");
                    auto pattern = graph_from_json(require(e, "pattern", path), path + "/pattern");
                    auto & mj = require(e, "map", path);
                    if (! mj.is_array())
                        throw InvalidInput(path + "/map: expected an array");
                    std::vector<int> map;
                    for (std::size_t i = 0; i < mj.size(); ++i) {
                        auto x = get_int(mj[i], path + "/map/" + std::to_string(i));
                        if (x < 0 || x >= host.size())
                            throw InvalidInput(path + "/map/" + std::to_string(i) + ": vertex out of range");
                        map.push_back(static_cast<int>(x));
                    }
                    std::optional<int> col;
                    std::optional<EdgeColoring> c;
                    if (! va.coloring.empty()) {
                        c = load_coloring(host, va.coloring);
                        if (e.contains("color") && ! e["color"].is_null())
                            col = static_cast<int>(get_int(e["color"], path + "/color"));
                    }
                    bool ok = static_cast<int>(map.size()) == pattern.size() && is_induced_copy(host, pattern, map, c ? &*c : nullptr, col);
                    em.emit({{"induced_copy", ok}, {"monochromatic_checked", col.has_value()}});
                    return ok ? exit_ok : exit_violation;
                }
                if (! va.coloring.empty()) {
                    if (va.graph.empty())
                        throw InvalidInput("--graph is required with --coloring");
                    auto g = load_graph(va.graph);
                    bool ok = true;
                    std::string why;
                    try {
                        (void) load_coloring(g, va.coloring);
                    }
                    catch (const InvalidInput & ex) {
                        ok = false;
                        why = ex.what();
                    }
                    em.emit({{"valid", ok}, {"reason", why}});
                    return ok ? exit_ok : exit_violation;
                }
                if (! va.gadget.empty()) {
                    if (va.p.empty() || va.L.empty())
                        throw InvalidInput("--p and --L are required with --gadget");
                    RegularityParams params{parse_ratio(va.L, "--L"), parse_ratio(va.p, "--p"), regularity_mode(va.mode)};
                    auto v = certify_block(load_block(va.gadget), params, 20'000, va.seed);
                    em.emit({{"verdict", to_json(v)}, {"seed", seed_to_json(va.seed)}});
                    return v.status == VerdictStatus::refuted ? exit_violation : exit_ok;
                }
                throw InvalidInput("one of --blowup, --embedding, --coloring or --gadget is required");
            };
        });

        std::vector<const char *> argv;
        for (auto & a : args)
            argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        }
        catch (const CLI::ParseError & e) {
            int code = app.exit(e, out, err);
            return code == 0 ? exit_ok : exit_usage;
        }
        catch (const InvalidInput & e) {
            err << error_json("invalid-input", e.what());
            return exit_usage;
        }
        Emitter em{out, command, {}};
        try {
            int code = action(em);
            em.flush_report();
            return code;
        }
        catch (const InvariantViolation & e) {
            err << error_json("invariant-violation", e.what());
            return exit_violation;
        }
        catch (const InvalidInput & e) {
            err << error_json("invalid-input", e.what());
        }
        catch (const BudgetExceeded & e) {
            err << error_json("budget-exceeded", e.what());
        }
        catch (const AttemptsExhausted & e) {
            err << error_json("attempts-exhausted", e.what());
        }
        catch (const PreconditionFailed & e) {
            err << error_json("precondition-failed", e.what());
        }
        catch (const Json::exception & e) {
            err << error_json("invalid-input", e.what());
        }
        return exit_usage;
    }
}
