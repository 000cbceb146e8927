#include <indram/errors.hpp>
#include <indram/gadgets.hpp>
#include <indram/oracles.hpp>
#include <indram/rng.hpp>

#include <algorithm>
#include <cmath>

namespace indram
{
    auto to_string(CopyMode m) -> std::string
    {
        return m == CopyMode::subgraph ? "subgraph" : "induced";
    }

    auto parse_copy_mode(const std::string & s) -> CopyMode
    {
        if (s == "subgraph")
            return CopyMode::subgraph;
        if (s == "induced")
            return CopyMode::induced;
        throw InvalidInput("unknown mode '" + s + "' (expected subgraph or induced)");
    }

    namespace
    {
        /// Next vertex: most already-placed neighbors, then highest degree, then lowest label.
        auto search_order(const Graph & pattern) -> std::vector<int>
        {
            int k = pattern.size();
            std::vector<int> order;
            std::vector<bool> placed(static_cast<std::size_t>(k), false);
            std::vector<int> links(static_cast<std::size_t>(k), 0);
            for (int step = 0; step < k; ++step) {
                int best = -1;
                for (int v = 0; v < k; ++v) {
                    if (placed[v])
                        continue;
                    if (best < 0 || links[v] > links[best] || (links[v] == links[best] && pattern.degree(v) > pattern.degree(best)))
                        best = v;
                }
                placed[best] = true;
                order.push_back(best);
                pattern.neighbors(best).for_each([&](int u) { ++links[u]; });
            }
            return order;
        }

        class CopySearch
        {
        public:
            CopySearch(const std::vector<VertexSet> & allowed, const std::vector<VertexSet> & host, const Graph & pattern, CopyMode mode)
                : _allowed(allowed), _host(host), _pattern(pattern), _mode(mode), _order(search_order(pattern))
            {
                _n = static_cast<int>(host.size());
                _map.assign(static_cast<std::size_t>(pattern.size()), -1);
                _allowed_degree.resize(static_cast<std::size_t>(_n));
                for (int v = 0; v < _n; ++v)
                    _allowed_degree[v] = allowed[v].count();
            }

            auto run() -> std::optional<std::vector<int>>
            {
                if (_pattern.size() > _n)
                    return std::nullopt;
                VertexSet used(_n);
                if (extend(0, used))
                    return _map;
                return std::nullopt;
            }

        private:
            auto extend(int depth, VertexSet & used) -> bool
            {
                if (depth == static_cast<int>(_order.size()))
                    return true;
                int v = _order[depth];
                VertexSet cand(_n);
                for (int x = 0; x < _n; ++x)
                    cand.set(x);
                cand.subtract(used);
                for (int i = 0; i < depth; ++i) {
                    int u = _order[i];
                    if (_pattern.adjacent(u, v))
                        cand &= _allowed[_map[u]];
                    else if (_mode == CopyMode::induced)
                        cand.subtract(_host[_map[u]]);
                }
                int need = _pattern.degree(v);
                for (int x = cand.first(); x >= 0; x = cand.next(x + 1)) {
                    if (_allowed_degree[x] < need)
                        continue;
                    _map[v] = x;
                    used.set(x);
                    if (extend(depth + 1, used))
                        return true;
                    used.reset(x);
                }
                _map[v] = -1;
                return false;
            }

            const std::vector<VertexSet> & _allowed;
            const std::vector<VertexSet> & _host;
            const Graph & _pattern;
            CopyMode _mode;
            std::vector<int> _order;
            std::vector<int> _map;
            std::vector<int> _allowed_degree;
            int _n = 0;
        };

        auto search(const std::vector<VertexSet> & allowed, const std::vector<VertexSet> & host, const Graph & pattern, CopyMode mode)
            -> std::optional<std::vector<int>>
        {
            return CopySearch(allowed, host, pattern, mode).run();
        }

        auto checked_pow(std::int64_t base, std::int64_t exponent, std::int64_t cap) -> std::optional<std::int64_t>
        {
            std::int64_t v = 1;
            for (std::int64_t i = 0; i < exponent; ++i) {
                if (v > cap / std::max<std::int64_t>(base, 1))
                    return std::nullopt;
                v *= base;
            }
            return v;
        }
    }

    auto find_copy(const Graph & host, const Graph & pattern, CopyMode mode, const EdgeColoring * coloring, std::optional<int> color)
        -> std::optional<std::vector<int>>
    {
        if (color && ! coloring)
            throw InvalidInput("a color constraint needs a coloring");
        if (! coloring)
            return search(host.rows(), host.rows(), pattern, mode);
        if (coloring->vertex_count() != host.size())
            throw InvalidInput("coloring and host differ in vertex count");
        if (color) {
            if (*color < 0 || *color >= coloring->q())
                throw InvalidInput("color out of range");
            return search(coloring->class_rows(*color), host.rows(), pattern, mode);
        }
        for (int c = 0; c < coloring->q(); ++c)
            if (auto m = search(coloring->class_rows(c), host.rows(), pattern, mode))
                return m;
        return std::nullopt;
    }

    auto find_copy_in(const Graph & host, const Graph & allowed, const Graph & pattern, CopyMode mode) -> std::optional<std::vector<int>>
    {
        if (allowed.size() != host.size())
            throw InvalidInput("allowed subgraph and host differ in vertex count");
        return search(allowed.rows(), host.rows(), pattern, mode);
    }

    auto arrows(const ArrowQuery & query, std::int64_t budget) -> ArrowResult
    {
        if (query.q < 1 || query.q > EdgeColoring::max_colors)
            throw InvalidInput("q must be between 1 and " + std::to_string(EdgeColoring::max_colors));
        auto edges = query.host.edges();
        auto e = static_cast<std::int64_t>(edges.size());
        ArrowResult out;
        if (e == 0) {
            out.colorings_checked = 1;
            out.arrows = find_copy(query.host, query.pattern, query.mode).has_value();
            if (! out.arrows)
                out.counterexample = EdgeColoring(query.host, query.q);
            return out;
        }
        if (! checked_pow(query.q, e - 1, budget))
            throw BudgetExceeded("q^(e-1) = " + std::to_string(query.q) + "^" + std::to_string(e - 1) + " colorings exceed the budget of "
                + std::to_string(budget));

        int n = query.host.size();
        int q = query.q;
        std::vector<std::vector<VertexSet>> rows(static_cast<std::size_t>(q), std::vector<VertexSet>(n, VertexSet(n)));
        rows[0] = query.host.rows();
        std::vector<int> digit(static_cast<std::size_t>(e), 0);
        auto move = [&](const Edge & ed, int from, int to) {
            rows[from][ed.u].reset(ed.v);
            rows[from][ed.v].reset(ed.u);
            rows[to][ed.u].set(ed.v);
            rows[to][ed.v].set(ed.u);
        };
        while (true) {
            ++out.colorings_checked;
            bool found = false;
            for (int c = 0; c < q && ! found; ++c)
                found = search(rows[c], query.host.rows(), query.pattern, query.mode).has_value();
            if (! found) {
                EdgeColoring cx(query.host, q);
                for (std::int64_t i = 0; i < e; ++i)
                    cx.set(edges[i].u, edges[i].v, digit[i]);
                out.counterexample = std::move(cx);
                return out;
            }
            std::int64_t i = e - 1;
            while (i >= 1 && digit[i] == q - 1) {
                move(edges[i], q - 1, 0);
                digit[i] = 0;
                --i;
            }
            if (i < 1)
                break;
            move(edges[i], digit[i], digit[i] + 1);
            ++digit[i];
        }
        out.arrows = true;
        return out;
    }

    auto arrows_density(const Graph & host, const Graph & pattern, const Ratio & gamma, CopyMode mode, std::int64_t budget)
        -> DensityArrowResult
    {
        if (gamma <= Ratio(0) || gamma > Ratio(1))
            throw InvalidInput("gamma must lie in (0, 1]");
        auto edges = host.edges();
        auto e = static_cast<std::int64_t>(edges.size());
        if (! checked_pow(2, e, budget))
            throw BudgetExceeded("2^" + std::to_string(e) + " edge subsets exceed the budget of " + std::to_string(budget));
        DensityArrowResult out;
        auto m = (Ratio(e) * gamma).ceil();
        out.edges_required = m;
        std::vector<int> pick(static_cast<std::size_t>(m));
        for (std::int64_t i = 0; i < m; ++i)
            pick[i] = static_cast<int>(i);
        while (true) {
            ++out.subsets_checked;
            Graph sub(host.size());
            for (int i : pick)
                sub.add_edge(edges[i].u, edges[i].v);
            if (! find_copy_in(host, sub, pattern, mode)) {
                out.counterexample = std::move(sub);
                return out;
            }
            std::int64_t i = m - 1;
            while (i >= 0 && pick[i] == e - m + i)
                --i;
            if (i < 0)
                break;
            ++pick[i];
            for (std::int64_t j = i + 1; j < m; ++j)
                pick[j] = pick[j - 1] + 1;
        }
        out.arrows = true;
        return out;
    }

    auto search_host(const Graph & pattern, int q, CopyMode mode, int max_vertices, const HostSearchOptions & options) -> HostSearchResult
    {
        if (max_vertices < 2)
            throw InvalidInput("max_vertices must be at least 2");
        HostSearchResult out;
        auto consider = [&](const std::string & name, const Graph & g) -> bool {
            HostSearchEntry entry{name, g.size(), g.edge_count(), ""};
            if (options.degree_cap && g.max_degree() > *options.degree_cap) {
                entry.verdict = "over-degree-cap";
                out.log.push_back(entry);
                return false;
            }
            try {
                bool ok = arrows({g, pattern, q, mode}, options.budget).arrows;
                entry.verdict = ok ? "arrows" : "fails";
            }
            catch (const BudgetExceeded &) {
                entry.verdict = "over-budget";
            }
            out.log.push_back(entry);
            if (entry.verdict == "arrows") {
                out.host = g;
                return true;
            }
            return false;
        };
        for (int n = 2; n <= max_vertices; ++n)
            if (consider("K" + std::to_string(n), complete_graph(n)))
                return out;
        for (int i = 0; i < options.random_candidates; ++i) {
            auto g = sample_gnp(max_vertices, Ratio(1, 2), derive_seed(options.seed, static_cast<std::uint64_t>(i)));
            if (options.degree_cap)
                for (auto & e : g.edges())
                    if (g.degree(e.u) > *options.degree_cap || g.degree(e.v) > *options.degree_cap)
                        g.remove_edge(e.u, e.v);
            if (consider("gnp-" + std::to_string(i), g))
                return out;
        }
        return out;
    }

    auto degree_prune_host(const Graph & g0, int k, int D, std::optional<int> n) -> PruneReport
    {
        if (k < 0 || D < 0)
            throw InvalidInput("k and D must be non-negative");
        PruneReport out;
        out.degree_limit = 4 * k * D;
        std::vector<int> keep;
        for (int v = 0; v < g0.size(); ++v)
            if (g0.degree(v) > 0 && g0.degree(v) <= out.degree_limit)
                keep.push_back(v);
        auto first = induced_subgraph(g0, keep);
        std::vector<int> second;
        for (int v = 0; v < first.graph.size(); ++v)
            if (first.graph.degree(v) > 0)
                second.push_back(v);
        auto pruned = induced_subgraph(first.graph, second);
        for (auto & v : pruned.original)
            v = first.original[v];
        out.pruned = std::move(pruned);
        if (n) {
            out.vertex_bound = 2LL * D * *n;
            out.within_bound = out.pruned.graph.size() <= *out.vertex_bound;
        }
        return out;
    }
}
