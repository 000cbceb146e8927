#include <indram/errors.hpp>
#include <indram/gadgets.hpp>
#include <indram/rng.hpp>

#include <cmath>
#include <limits>

namespace indram
{
    auto sample_gnp(int n, const Ratio & p, std::uint64_t seed) -> Graph
    {
        if (p.num() < 0 || p > Ratio(1))
            throw InvalidInput("edge probability must lie in [0,1], got " + p.to_string());
        Graph g(n);
        Rng rng(seed);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p))
                    g.add_edge(u, v);
        return g;
    }

    auto sample_bipartite_block(int rows, int cols, const Ratio & p, std::uint64_t seed) -> Biadjacency
    {
        if (p.num() < 0 || p > Ratio(1))
            throw InvalidInput("edge probability must lie in [0,1], got " + p.to_string());
        if (rows < 0 || cols < 0)
            throw InvalidInput("negative block dimension");
        Biadjacency b(rows, cols);
        Rng rng(seed);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (rng.bernoulli(p))
                    b.set(i, j);
        return b;
    }

    auto dense_graph_regime_bound(int t, const Ratio & p, const Ratio & eps) -> double
    {
        return std::exp(t * eps.to_double() * eps.to_double() * p.to_double() / 6.0);
    }

    auto generate_dense_pseudorandom_graph(int n, const Ratio & p, int t, const Ratio & eps, int max_attempts,
        std::uint64_t seed) -> DenseGraphResult
    {
        if (max_attempts < 1)
            throw InvalidInput("max_attempts must be at least 1");
        DenseGraphResult out;
        out.seed = seed;
        out.regime_bound = dense_graph_regime_bound(t, p, eps);
        out.in_guaranteed_regime = static_cast<double>(n) <= out.regime_bound;

        double best = std::numeric_limits<double>::infinity();
        std::string best_report;
        for (int k = 0; k < max_attempts; ++k) {
            auto s = derive_seed(seed, static_cast<std::uint64_t>(k));
            auto g = sample_gnp(n, p, s);
            auto verdict = check_density_condition(g, t, p, eps);
            if (verdict.status == VerdictStatus::certified) {
                out.graph = std::move(g);
                out.verification = std::move(verdict);
                out.attempts_used = k + 1;
                out.accepted_seed = s;
                return out;
            }
            if (verdict.worst_deviation < best) {
                best = verdict.worst_deviation;
                best_report = "attempt " + std::to_string(k) + " violated with e(X',Y') = " + std::to_string(verdict.violating_edges)
                    + " after " + std::to_string(verdict.pairs_checked) + " pairs";
            }
        }
        throw AttemptsExhausted("attempts exhausted: no certified graph in " + std::to_string(max_attempts)
            + " attempts; best " + best_report);
    }

    auto to_string(GadgetSource s) -> std::string
    {
        switch (s) {
        case GadgetSource::direct: return "direct";
        case GadgetSource::ambient: return "ambient";
        case GadgetSource::external: return "external";
        }
        return "direct";
    }

    auto parse_gadget_source(const std::string & s) -> GadgetSource
    {
        if (s == "direct")
            return GadgetSource::direct;
        if (s == "ambient")
            return GadgetSource::ambient;
        if (s == "external")
            return GadgetSource::external;
        throw InvalidInput("unknown gadget source '" + s + "' (expected direct, ambient or external)");
    }

    auto paper_gadget_threshold(int a, int b, const Ratio & p) -> double
    {
        return 48.0 / p.to_double() * std::log(static_cast<double>(a + b));
    }

    namespace
    {
        auto claimed_params(int a, int b, const Ratio & p, const GadgetOptions & options) -> RegularityParams
        {
            RegularityParams params;
            params.p = p;
            params.mode = options.mode;
            params.L = options.target_L ? *options.target_L
                                        : Ratio(static_cast<std::int64_t>(std::ceil(paper_gadget_threshold(a, b, p))));
            validate(params);
            return params;
        }

        auto fill_paper_fields(GadgetCertificate & cert, int a, int b, const Ratio & p) -> void
        {
            cert.paper_threshold = paper_gadget_threshold(a, b, p);
            cert.paper_threshold_vacuous = cert.paper_threshold > a && cert.paper_threshold > b;
        }

        auto sample_block(int a, int b, const Ratio & p, std::uint64_t s, GadgetSource source) -> Biadjacency
        {
            if (source == GadgetSource::direct)
                return sample_bipartite_block(a, b, p, s);
            auto g = sample_gnp(a + b, p, s);
            Biadjacency block(a, b);
            for (int i = 0; i < a; ++i)
                for (int j = 0; j < b; ++j)
                    if (g.adjacent(i, a + j))
                        block.set(i, j);
            return block;
        }
    }

    auto generate_regular_gadget(int a, int b, const Ratio & p, std::uint64_t seed, const GadgetOptions & options) -> Gadget
    {
        if (a < 1 || b < 1)
            throw InvalidInput("gadget sides must be positive");
        if (options.max_attempts < 1)
            throw InvalidInput("max_attempts must be at least 1");
        if (options.source == GadgetSource::external)
            throw InvalidInput("external gadgets are certified with certify_external_gadget");
        auto params = claimed_params(a, b, p, options);

        for (int k = 0; k < options.max_attempts; ++k) {
            auto s = derive_seed(seed, static_cast<std::uint64_t>(k));
            auto block = sample_block(a, b, p, s, options.source);
            auto verdict = certify_block(block, params, options.sampled_trials, derive_seed(s, 1));
            if (verdict.status != VerdictStatus::refuted) {
                Gadget g{std::move(block), {}};
                g.certificate.params_claimed = params;
                g.certificate.verification = std::move(verdict);
                g.certificate.attempts_used = k + 1;
                g.certificate.seed = seed;
                g.certificate.accepted_seed = s;
                g.certificate.source = options.source;
                fill_paper_fields(g.certificate, a, b, p);
                return g;
            }
        }
        throw AttemptsExhausted("attempts exhausted: no (" + params.L.to_string() + ", " + p.to_string() + ")-"
            + to_string(params.mode) + " regular " + std::to_string(a) + "x" + std::to_string(b) + " gadget in "
            + std::to_string(options.max_attempts) + " attempts");
    }

    auto certify_external_gadget(const Biadjacency & block, const Ratio & p, std::uint64_t seed, const GadgetOptions & options)
        -> Gadget
    {
        auto params = claimed_params(block.rows, block.cols, p, options);
        Gadget g{block, {}};
        g.certificate.params_claimed = params;
        g.certificate.verification = certify_block(block, params, options.sampled_trials, seed);
        g.certificate.attempts_used = 1;
        g.certificate.seed = seed;
        g.certificate.accepted_seed = seed;
        g.certificate.source = GadgetSource::external;
        fill_paper_fields(g.certificate, block.rows, block.cols, p);
        return g;
    }
}
