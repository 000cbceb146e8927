#include <indram/drc.hpp>
#include <indram/embedding.hpp>
#include <indram/errors.hpp>
#include <indram/rng.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace indram
{
    namespace
    {
        auto one_minus_2p(const Ratio & p) -> BigRational
        {
            BigRational v = BigRational(1) - 2 * p.to_big();
            return v < 0 ? BigRational(0) : v;
        }

        /// Rational lower and upper bounds on e from the first terms of sum 1/k!.
        auto e_bounds() -> std::pair<BigRational, BigRational>
        {
            BigRational sum = 0, term = 1;
            constexpr int terms = 30;
            for (int k = 0; k < terms; ++k) {
                sum += term;
                term /= (k + 1);
            }
            // remaining tail is below 2 * (first omitted term)
            return {sum, sum + 2 * term};
        }
    }

    auto feasibility_check(const EmbedParams & params) -> FeasibilityReport
    {
        if (params.s_star < 1 || params.k < 0 || params.delta < 0 || params.w < 1)
            throw InvalidInput("s*, w must be positive and k, delta non-negative");
        FeasibilityReport r;
        r.greedy_lhs = BigRational(params.s_star) * pow(params.rho.to_big() / 2, params.k) * pow(one_minus_2p(params.p), params.delta);
        r.greedy_rhs = BigRational(params.delta) * params.L.to_big() + BigRational(params.k) * params.L_prime.to_big();
        r.greedy_holds = r.greedy_lhs > r.greedy_rhs;

        // w delta L e (w delta^2 + 1) <= s*
        BigRational x = BigRational(params.w) * params.delta * params.L.to_big() * (params.w * params.delta * params.delta + 1);
        auto [e_lo, e_hi] = e_bounds();
        if (x * e_hi <= params.s_star)
            r.lll_holds = true;
        else if (x * e_lo > params.s_star)
            r.lll_holds = false;
        else
            r.lll_holds = false; // unresolved at this precision; treated as failing
        r.lll_lhs = params.w * params.delta * params.L.to_double() / params.s_star;
        r.lll_rhs = 1.0 / (std::numbers::e * (params.w * params.delta * params.delta + 1));
        return r;
    }

    auto paper_eta(const Ratio & rho, int k, const Ratio & p, int delta) -> BigRational
    {
        if (delta + k <= 0)
            throw InvalidInput("delta + k must be positive");
        return pow(rho.to_big() / 2, k) * pow(one_minus_2p(p), delta) / (delta + k);
    }

    auto build_hstar(const Graph & host, const EdgeColoring & coloring, int c, const Graph & pattern,
        const std::vector<std::vector<int>> & parts) -> Graph
    {
        if (parts.size() != static_cast<std::size_t>(pattern.size()))
            throw InvalidInput("one part per pattern vertex required");
        Graph out(host.size());
        for (auto & e : pattern.edges())
            for (int x : parts[e.u])
                for (int y : parts[e.v])
                    if (host.adjacent(x, y) && coloring.color(x, y) == c)
                        out.add_edge(x, y);
        return out;
    }

    auto bfs_order(const Graph & h) -> std::vector<int>
    {
        std::vector<int> order;
        std::vector<bool> seen(static_cast<std::size_t>(h.size()), false);
        for (int s = 0; s < h.size(); ++s) {
            if (seen[s])
                continue;
            std::deque<int> queue{s};
            seen[s] = true;
            while (! queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                order.push_back(v);
                h.neighbors(v).for_each([&](int u) {
                    if (! seen[u]) {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                });
            }
        }
        return order;
    }

    auto complete_w_blowup(const Graph & h, int w) -> Graph
    {
        if (w < 1)
            throw InvalidInput("w must be at least 1");
        Graph out(h.size() * w);
        for (auto & e : h.edges())
            for (int i = 0; i < w; ++i)
                for (int j = 0; j < w; ++j)
                    out.add_edge(e.u * w + i, e.v * w + j);
        return out;
    }

    namespace
    {
        auto check_structure(const Graph & h, const Graph & g, const Graph & hstar, const Graph & gstar,
            const std::vector<std::vector<int>> & parts) -> void
        {
            if (h.size() != g.size())
                throw InvalidInput("H and G must share vertex labels");
            for (auto & e : h.edges())
                if (! g.adjacent(e.u, e.v))
                    throw InvalidInput("H is not a subgraph of G at " + edge_key(e));
            if (hstar.size() != gstar.size())
                throw InvalidInput("H* and G* must share the host vertex set");
            if (parts.size() != static_cast<std::size_t>(g.size()))
                throw InvalidInput("one part per vertex of G required");
            std::vector<int> phi(static_cast<std::size_t>(gstar.size()), -1);
            for (std::size_t v = 0; v < parts.size(); ++v)
                for (int x : parts[v]) {
                    if (x < 0 || x >= gstar.size())
                        throw InvalidInput("part vertex out of range");
                    if (phi[x] >= 0)
                        throw InvalidInput("parts are not disjoint at host vertex " + std::to_string(x));
                    phi[x] = static_cast<int>(v);
                }
            for (std::size_t v = 0; v < parts.size(); ++v)
                for (int x : parts[v]) {
                    if (! hstar.neighbors(x).is_subset_of(gstar.neighbors(x)))
                        throw InvalidInput("H* is not a subgraph of G* at host vertex " + std::to_string(x));
                    gstar.neighbors(x).for_each([&](int y) {
                        if (phi[y] < 0)
                            return;
                        if (phi[y] == phi[x])
                            throw PreconditionFailed("edge inside part " + std::to_string(v));
                        if (! g.adjacent(phi[x], phi[y]))
                            throw PreconditionFailed("G* edge over a non-edge of G");
                    });
                }
        }
    }

    auto greedy_induced_embed(const Graph & h, const Graph & g, const Graph & hstar, const Graph & gstar,
        const std::vector<std::vector<int>> & parts, const EmbedParams & params, const std::optional<std::vector<int>> & order,
        const GreedyOptions & options) -> EmbedResult
    {
        check_structure(h, g, hstar, gstar, parts);
        EmbedResult out;
        out.feasibility = feasibility_check(params);
        auto & trace = out.trace;
        int n = h.size();
        trace.order = order.value_or(bfs_order(h));
        {
            auto sorted = trace.order;
            std::sort(sorted.begin(), sorted.end());
            for (int i = 0; i < n; ++i)
                if (static_cast<int>(sorted.size()) != n || sorted[i] != i)
                    throw InvalidInput("order must be a permutation of V(H)");
        }
        auto & ord = trace.order;
        int universe = gstar.size();

        // in_j[i][j]: v_j is an H-neighbor of v_i; in_jbar[i][j]: G-neighbor but not H-neighbor
        std::vector<std::vector<bool>> in_j(n, std::vector<bool>(n, false)), in_jbar(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) {
                in_j[i][j] = h.adjacent(ord[i], ord[j]);
                in_jbar[i][j] = ! in_j[i][j] && g.adjacent(ord[i], ord[j]);
            }

        std::vector<VertexSet> cand;
        for (int i = 0; i < n; ++i)
            cand.push_back(VertexSet::from_members(universe, parts[ord[i]]));
        auto snapshot = [&]() {
            std::vector<int> sizes;
            for (auto & c : cand)
                sizes.push_back(c.count());
            trace.candidate_sizes.push_back(std::move(sizes));
        };
        snapshot();

        std::vector<int> a_count(n, 0), b_count(n, 0);
        BigRational rho_half = params.rho.to_big() / 2;
        BigRational mu = one_minus_2p(params.p);
        std::vector<int> x(n, -1);
        for (int t = 0; t < n; ++t) {
            auto & here = cand[t];
            if (here.empty()) {
                trace.failure_step = t;
                return out;
            }
            VertexSet bad(universe);
            std::vector<int> bad_sizes;
            auto part = VertexSet::from_members(universe, parts[ord[t]]);
            for (int i = t + 1; i < n; ++i) {
                if (! in_j[i][t] && ! in_jbar[i][t])
                    continue;
                auto size = static_cast<std::int64_t>(cand[i].count());
                VertexSet b(universe);
                part.for_each([&](int v) {
                    if (in_j[i][t]) {
                        // fewer than (rho/2)|X_i| H*-neighbors in X_i
                        std::int64_t d = hstar.neighbors(v).intersection_count(cand[i]);
                        if (static_cast<__int128>(2 * d) * params.rho.den() < static_cast<__int128>(params.rho.num()) * size)
                            b.set(v);
                    }
                    else {
                        // fewer than (1-2p)|X_i| G*-non-neighbors in X_i
                        std::int64_t rest = size - gstar.neighbors(v).intersection_count(cand[i]);
                        if (BigRational(rest) < mu * size)
                            b.set(v);
                    }
                });
                bad_sizes.push_back(b.count());
                bad |= b;
            }
            trace.bad_set_sizes.push_back(std::move(bad_sizes));
            auto good = here;
            good.subtract(bad);
            int pick;
            if (good.empty()) {
                pick = here.first();
                trace.fallback_steps.push_back(t);
            }
            else
                pick = good.first();
            x[t] = pick;
            trace.chosen.push_back(pick);

            for (int j = 0; j < t; ++j)
                if (! in_j[t][j] && ! in_jbar[t][j] && gstar.adjacent(pick, x[j]))
                    throw InvariantViolation("chosen vertex is adjacent to an image of a non-neighbor in G");

            for (int i = t + 1; i < n; ++i) {
                if (in_j[i][t]) {
                    cand[i] &= hstar.neighbors(pick);
                    ++a_count[i];
                }
                else if (in_jbar[i][t]) {
                    cand[i].subtract(gstar.neighbors(pick));
                    ++b_count[i];
                }
                cand[i].reset(pick);
                BigRational bound = BigRational(params.s_star) * pow(rho_half, a_count[i]) * pow(mu, b_count[i]);
                ++trace.law_checks;
                if (BigRational(cand[i].count()) < bound) {
                    auto msg = "step " + std::to_string(t) + ": |X_" + std::to_string(i) + "| = " + std::to_string(cand[i].count())
                        + " below " + big_to_string(bound);
                    if (options.hypotheses_certified && out.feasibility.greedy_holds)
                        throw InvariantViolation("candidate-size law violated with certified hypotheses, " + msg);
                    trace.law_violations.push_back(std::move(msg));
                }
            }
            snapshot();
        }

        Embedding emb;
        emb.pattern = h;
        emb.map.assign(static_cast<std::size_t>(n), -1);
        for (int t = 0; t < n; ++t)
            emb.map[ord[t]] = x[t];
        if (! is_induced_copy(hstar, h, emb.map) || ! is_induced_copy(gstar, h, emb.map))
            throw InvariantViolation("greedy embedding failed its final induced-copy verification");
        out.success = true;
        out.embedding = std::move(emb);
        return out;
    }

    namespace
    {
        struct LllSetup
        {
            int w = 1;
            int n = 0;
            std::vector<int> side;
            std::vector<int> a_vertices, b_vertices;
            Graph hprime;
            /// chunk[b * w + i] = Y_{b,i} as host vertices
            std::vector<std::vector<int>> chunk;
            std::vector<VertexSet> x_part;
        };

        auto setup(const Graph & h, const Graph & g, const std::optional<Graph> & hprime, const Graph & gstar,
            const std::vector<std::vector<int>> & parts, const EmbedParams & params, const std::optional<std::vector<int>> & a_side)
            -> LllSetup
        {
            LllSetup s;
            s.w = params.w;
            s.n = g.size();
            if (a_side) {
                s.side.assign(static_cast<std::size_t>(s.n), 1);
                for (int a : *a_side) {
                    if (a < 0 || a >= s.n)
                        throw InvalidInput("A-side vertex out of range");
                    s.side[a] = 0;
                }
                for (auto & e : g.edges())
                    if (s.side[e.u] == s.side[e.v])
                        throw PreconditionFailed("G edge " + edge_key(e) + " inside one side");
            }
            else {
                auto two = bipartition(g);
                if (! two)
                    throw PreconditionFailed("G is not bipartite");
                s.side = *two;
            }
            for (int v = 0; v < s.n; ++v)
                (s.side[v] == 0 ? s.a_vertices : s.b_vertices).push_back(v);

            auto full = complete_w_blowup(h, s.w);
            if (hprime) {
                if (hprime->size() != full.size())
                    throw InvalidInput("H' must have |V(H)| * w vertices labeled v * w + i");
                for (auto & e : hprime->edges())
                    if (! full.adjacent(e.u, e.v))
                        throw InvalidInput("H' edge " + edge_key(e) + " does not project to an edge of H");
                s.hprime = *hprime;
            }
            else
                s.hprime = full;

            s.chunk.resize(static_cast<std::size_t>(s.n * s.w));
            s.x_part.resize(static_cast<std::size_t>(s.n));
            for (int b : s.b_vertices) {
                auto ys = parts[b];
                std::sort(ys.begin(), ys.end());
                if (static_cast<std::int64_t>(ys.size()) < static_cast<std::int64_t>(s.w) * params.s_star)
                    throw PreconditionFailed("|Y_" + std::to_string(b) + "| = " + std::to_string(ys.size()) + " is below w s* = "
                        + std::to_string(s.w * params.s_star));
                for (int i = 0; i < s.w; ++i)
                    s.chunk[b * s.w + i].assign(ys.begin() + i * params.s_star, ys.begin() + (i + 1) * params.s_star);
            }
            for (int a : s.a_vertices)
                s.x_part[a] = VertexSet::from_members(gstar.size(), parts[a]);
            return s;
        }

        auto compute_t(const LllSetup & s, const Graph & g, const Graph & hstar, const Graph & gstar, const std::vector<int> & y, int a,
            int j) -> VertexSet
        {
            auto t = s.x_part[a];
            int self = a * s.w + j;
            g.neighbors(a).for_each([&](int b) {
                for (int i = 0; i < s.w; ++i) {
                    int yb = y[b * s.w + i];
                    if (s.hprime.adjacent(self, b * s.w + i))
                        t &= hstar.neighbors(yb);
                    else
                        t.subtract(gstar.neighbors(yb));
                }
            });
            return t;
        }

        auto sample_y(const LllSetup & s, Rng & rng, std::vector<int> & y, int b) -> void
        {
            for (int i = 0; i < s.w; ++i) {
                auto & c = s.chunk[b * s.w + i];
                y[b * s.w + i] = c[rng.below(c.size())];
            }
        }
    }

    auto lll_blowup_embed(const Graph & h, const Graph & g, const std::optional<Graph> & hprime, const Graph & hstar,
        const Graph & gstar, const std::vector<std::vector<int>> & parts, const EmbedParams & params, std::uint64_t seed,
        std::int64_t max_resample, const std::optional<std::vector<int>> & a_side) -> LllEmbedResult
    {
        check_structure(h, g, hstar, gstar, parts);
        auto s = setup(h, g, hprime, gstar, parts, params, a_side);
        LllEmbedResult out;
        out.feasibility = feasibility_check(params);
        auto & trace = out.trace;
        int w = s.w;

        Rng rng(seed);
        std::vector<int> y(static_cast<std::size_t>(s.n * w), -1);
        for (int b : s.b_vertices)
            sample_y(s, rng, y, b);

        while (true) {
            ++trace.rounds;
            std::optional<int> violated;
            std::int64_t bad = 0;
            for (int a : s.a_vertices)
                for (int j = 0; j < w; ++j)
                    if (compute_t(s, g, hstar, gstar, y, a, j).count() < w) {
                        ++bad;
                        if (! violated)
                            violated = a;
                    }
            trace.surviving_bad_events = bad;
            if (! violated)
                break;
            if (trace.resamples >= max_resample)
                throw AttemptsExhausted("resample budget exhausted after " + std::to_string(trace.resamples) + " resamplings, "
                    + std::to_string(bad) + " bad events survive");
            ++trace.resamples;
            g.neighbors(*violated).for_each([&](int b) { sample_y(s, rng, y, b); });
        }

        trace.y_choice = y;
        trace.t_sizes.assign(static_cast<std::size_t>(s.n * w), -1);
        std::vector<int> map(static_cast<std::size_t>(s.n * w), -1);
        for (int b : s.b_vertices)
            for (int i = 0; i < w; ++i)
                map[b * w + i] = y[b * w + i];
        for (int a : s.a_vertices) {
            VertexSet used(gstar.size());
            for (int j = 0; j < w; ++j) {
                auto t = compute_t(s, g, hstar, gstar, y, a, j);
                trace.t_sizes[a * w + j] = t.count();
                t.subtract(used);
                if (t.empty()) {
                    trace.stalled = true;
                    return out;
                }
                int pick = t.first();
                used.set(pick);
                map[a * w + j] = pick;
            }
        }

        if (! is_induced_copy(hstar, s.hprime, map) || ! is_induced_copy(gstar, s.hprime, map))
            throw InvariantViolation("blowup embedding failed its final induced-copy verification");
        if (s.hprime.size() <= blowup_search_cap) {
            if (! is_blowup_of(s.hprime, h, w))
                throw InvariantViolation("H' is not a w-blowup of H");
            trace.blowup_verified = true;
        }
        Embedding emb;
        emb.pattern = s.hprime;
        emb.map = std::move(map);
        out.embedding = std::move(emb);
        out.success = true;
        return out;
    }

    auto audit_bad_events(const Graph & h, const Graph & g, const std::optional<Graph> & hprime, const Graph & hstar,
        const Graph & gstar, const std::vector<std::vector<int>> & parts, const EmbedParams & params, std::int64_t samples,
        std::uint64_t seed, const std::optional<std::vector<int>> & a_side) -> BadEventAudit
    {
        if (samples < 1)
            throw InvalidInput("samples must be positive");
        check_structure(h, g, hstar, gstar, parts);
        auto s = setup(h, g, hprime, gstar, parts, params, a_side);
        int w = s.w;
        std::vector<std::int64_t> hits(static_cast<std::size_t>(s.n * w), 0);
        std::vector<int> y(static_cast<std::size_t>(s.n * w), -1);
        for (std::int64_t k = 0; k < samples; ++k) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
            for (int b : s.b_vertices)
                sample_y(s, rng, y, b);
            for (int a : s.a_vertices)
                for (int j = 0; j < w; ++j)
                    if (compute_t(s, g, hstar, gstar, y, a, j).count() < w)
                        ++hits[a * w + j];
        }
        BadEventAudit out;
        out.samples = samples;
        for (auto c : hits)
            out.max_frequency = std::max(out.max_frequency, static_cast<double>(c) / static_cast<double>(samples));
        out.bound = params.w * params.delta * params.L.to_double() / params.s_star;
        double b = std::min(1.0, out.bound);
        out.sigma = std::sqrt(b * (1 - b) / static_cast<double>(samples));
        out.within = out.max_frequency <= out.bound + 3 * out.sigma;
        return out;
    }

    auto check_property3(const Graph & h, const Graph & hstar, const std::vector<std::vector<int>> & parts,
        const std::vector<int> & a_vertices, const EmbedParams & params, std::int64_t budget, std::int64_t spot_checks,
        std::uint64_t seed) -> Property3Check
    {
        Property3Check out;
        out.exhaustive = true;
        out.min_common = std::numeric_limits<std::int64_t>::max();
        int r = params.w * params.k;
        for (int a : a_vertices) {
            auto & xa = parts[a];
            std::vector<VertexSet> columns;
            h.neighbors(a).for_each([&](int b) {
                for (int y : parts[b]) {
                    VertexSet c(static_cast<int>(xa.size()));
                    for (std::size_t i = 0; i < xa.size(); ++i)
                        if (hstar.adjacent(xa[i], y))
                            c.set(static_cast<int>(i));
                    columns.push_back(std::move(c));
                }
            });
            std::vector<int> members(columns.size());
            for (std::size_t i = 0; i < members.size(); ++i)
                members[i] = static_cast<int>(i);
            auto [min, exhaustive] = columns.empty() ? std::pair<std::int64_t, bool>{static_cast<std::int64_t>(xa.size()), true}
                                                     : min_common_neighborhood(columns, members, r, budget, spot_checks,
                                                         derive_seed(seed, static_cast<std::uint64_t>(a)));
            out.min_common = std::min(out.min_common, min);
            out.exhaustive = out.exhaustive && exhaustive;
        }
        if (a_vertices.empty())
            out.min_common = 0;
        BigRational lhs = pow(one_minus_2p(params.p), params.delta * params.w) * BigRational(out.min_common);
        out.holds = lhs >= BigRational(params.w) * params.L.to_big();
        return out;
    }
}
