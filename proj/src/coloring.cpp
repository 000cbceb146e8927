#include <indram/coloring.hpp>
#include <indram/errors.hpp>
#include <indram/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace indram
{
    namespace
    {
        class MisraGries
        {
        public:
            explicit MisraGries(const Graph & g) :
                _g(g),
                _n(g.size()),
                _colors(g.max_degree() + 1),
                _col(static_cast<std::size_t>(_n) * _n, -1),
                _used(static_cast<std::size_t>(_n) * _colors, 0)
            {
            }

            auto run() -> void
            {
                for (auto & e : _g.edges())
                    color_edge(e.u, e.v);
            }

            [[nodiscard]] auto color(int u, int v) const -> int { return _col[idx(u, v)]; }
            [[nodiscard]] auto colors() const -> int { return _colors; }

        private:
            [[nodiscard]] auto idx(int u, int v) const -> std::size_t { return static_cast<std::size_t>(u) * _n + v; }
            [[nodiscard]] auto is_free(int v, int c) const -> bool { return ! _used[static_cast<std::size_t>(v) * _colors + c]; }

            auto paint(int u, int v, int c) -> void
            {
                _col[idx(u, v)] = c;
                _col[idx(v, u)] = c;
                _used[static_cast<std::size_t>(u) * _colors + c] = 1;
                _used[static_cast<std::size_t>(v) * _colors + c] = 1;
            }

            auto erase(int u, int v) -> void
            {
                int c = _col[idx(u, v)];
                if (c < 0)
                    return;
                _col[idx(u, v)] = -1;
                _col[idx(v, u)] = -1;
                _used[static_cast<std::size_t>(u) * _colors + c] = 0;
                _used[static_cast<std::size_t>(v) * _colors + c] = 0;
            }

            [[nodiscard]] auto lowest_free(int v) const -> int
            {
                for (int c = 0; c < _colors; ++c)
                    if (is_free(v, c))
                        return c;
                throw InvariantViolation("no free color at a vertex with degree below the palette size");
            }

            [[nodiscard]] auto neighbor_with_color(int v, int c) const -> int
            {
                int found = -1;
                _g.neighbors(v).for_each([&](int y) {
                    if (found == -1 && _col[idx(v, y)] == c)
                        found = y;
                });
                return found;
            }

            [[nodiscard]] auto is_fan_prefix(int u, const std::vector<int> & fan, std::size_t last) const -> bool
            {
                for (std::size_t j = 1; j <= last; ++j) {
                    int c = _col[idx(u, fan[j])];
                    if (c < 0 || ! is_free(fan[j - 1], c))
                        return false;
                }
                return true;
            }

            auto color_edge(int u, int v) -> void
            {
                std::vector<int> fan{v};
                VertexSet in_fan(_n);
                in_fan.set(v);
                bool grew = true;
                while (grew) {
                    grew = false;
                    int last = fan.back();
                    for (int x = _g.neighbors(u).first(); x != -1; x = _g.neighbors(u).next(x + 1)) {
                        int c = _col[idx(u, x)];
                        if (! in_fan.test(x) && c >= 0 && is_free(last, c)) {
                            fan.push_back(x);
                            in_fan.set(x);
                            grew = true;
                            break;
                        }
                    }
                }

                int c = lowest_free(u);
                int d = lowest_free(fan.back());

                std::vector<std::pair<int, int>> path;
                for (int cur = u, want = d;;) {
                    int y = neighbor_with_color(cur, want);
                    if (y == -1)
                        break;
                    path.emplace_back(cur, y);
                    cur = y;
                    want = want == d ? c : d;
                }
                std::vector<int> old;
                for (auto [a, b] : path) {
                    old.push_back(_col[idx(a, b)]);
                    erase(a, b);
                }
                for (std::size_t i = 0; i < path.size(); ++i)
                    paint(path[i].first, path[i].second, old[i] == d ? c : d);

                std::size_t w = fan.size();
                for (std::size_t i = 0; i < fan.size(); ++i)
                    if (is_free(fan[i], d) && is_fan_prefix(u, fan, i)) {
                        w = i;
                        break;
                    }
                if (w == fan.size())
                    throw InvariantViolation("Misra-Gries rotation target not found");

                std::vector<int> shifted;
                for (std::size_t j = 0; j < w; ++j)
                    shifted.push_back(_col[idx(u, fan[j + 1])]);
                for (std::size_t j = 1; j <= w; ++j)
                    erase(u, fan[j]);
                for (std::size_t j = 0; j < w; ++j)
                    paint(u, fan[j], shifted[j]);
                if (! is_free(u, d) || ! is_free(fan[w], d))
                    throw InvariantViolation("Misra-Gries final color not free");
                paint(u, fan[w], d);
            }

            const Graph & _g;
            int _n;
            int _colors;
            std::vector<int> _col;
            std::vector<char> _used;
        };
    }

    auto vizing_matchings(const Graph & g) -> MatchingDecomposition
    {
        MatchingDecomposition out;
        if (g.edge_count() == 0)
            return out;
        MisraGries mg(g);
        mg.run();
        std::vector<std::vector<Edge>> classes(static_cast<std::size_t>(mg.colors()));
        for (auto & e : g.edges()) {
            int c = mg.color(e.u, e.v);
            if (c < 0)
                throw InvariantViolation("edge left uncolored by Misra-Gries");
            classes[c].push_back(e);
        }
        for (auto & cls : classes)
            if (! cls.empty())
                out.matchings.push_back(std::move(cls));
        if (! is_proper_decomposition(g, out))
            throw InvariantViolation("Misra-Gries produced an improper edge coloring");
        return out;
    }

    auto is_proper_decomposition(const Graph & g, const MatchingDecomposition & d) -> bool
    {
        if (static_cast<int>(d.matchings.size()) > g.max_degree() + 1)
            return false;
        std::vector<Edge> all;
        for (auto & m : d.matchings) {
            VertexSet touched(g.size());
            for (auto & e : m) {
                if (e.u < 0 || e.v >= g.size() || e.u >= e.v || ! g.adjacent(e.u, e.v))
                    return false;
                if (touched.test(e.u) || touched.test(e.v))
                    return false;
                touched.set(e.u);
                touched.set(e.v);
                all.push_back(e);
            }
        }
        std::sort(all.begin(), all.end());
        return all == g.edges();
    }

    namespace
    {
        auto next_combination(std::vector<int> & c, int n) -> bool
        {
            int k = static_cast<int>(c.size());
            for (int i = k - 1; i >= 0; --i)
                if (c[i] < n - k + i) {
                    ++c[i];
                    for (int j = i + 1; j < k; ++j)
                        c[j] = c[j - 1] + 1;
                    return true;
                }
            return false;
        }

        auto extend_left(const Graph & g, int w, std::vector<int> & left, const VertexSet & common, std::int64_t budget,
            std::vector<Biclique> & out) -> void
        {
            if (static_cast<int>(left.size()) == w) {
                std::vector<int> pool;
                common.for_each([&](int y) {
                    if (y > left[0])
                        pool.push_back(y);
                });
                if (static_cast<int>(pool.size()) < w)
                    return;
                std::vector<int> pick(static_cast<std::size_t>(w));
                std::iota(pick.begin(), pick.end(), 0);
                do {
                    if (static_cast<std::int64_t>(out.size()) >= budget)
                        throw BudgetExceeded("biclique enumeration budget of " + std::to_string(budget) + " copies exceeded");
                    Biclique b;
                    b.left = left;
                    for (int i : pick)
                        b.right.push_back(pool[i]);
                    out.push_back(std::move(b));
                } while (next_combination(pick, static_cast<int>(pool.size())));
                return;
            }
            int start = left.empty() ? 0 : left.back() + 1;
            for (int v = start; v < g.size(); ++v) {
                auto next = common & g.neighbors(v);
                if (next.count() < w)
                    continue;
                left.push_back(v);
                extend_left(g, w, left, next, budget, out);
                left.pop_back();
            }
        }
    }

    auto enumerate_bicliques(const Graph & g, int w, std::int64_t budget) -> std::vector<Biclique>
    {
        if (w < 1)
            throw InvalidInput("biclique size w must be at least 1");
        std::vector<Biclique> out;
        std::vector<int> left;
        extend_left(g, w, left, VertexSet(g.size(), true), budget, out);
        return out;
    }

    auto count_monochromatic_bicliques(const Graph & g, const EdgeColoring & c, int w, std::int64_t budget) -> std::int64_t
    {
        if (! c.matches(g))
            throw InvalidInput("coloring does not match the graph's edge set");
        std::int64_t total = 0;
        for (int color = 0; color < c.q(); ++color)
            total += static_cast<std::int64_t>(enumerate_bicliques(c.class_graph(color), w, budget).size());
        return total;
    }

    auto lll_avoid_mono_biclique(const Graph & g, int w, std::int64_t max_resample, std::uint64_t seed, std::int64_t budget)
        -> LllReport
    {
        auto copies = enumerate_bicliques(g, w, budget);
        auto edges = g.edges();
        int n = g.size();
        std::vector<int> edge_index(static_cast<std::size_t>(n) * n, -1);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            edge_index[static_cast<std::size_t>(edges[i].u) * n + edges[i].v] = static_cast<int>(i);
            edge_index[static_cast<std::size_t>(edges[i].v) * n + edges[i].u] = static_cast<int>(i);
        }

        std::vector<std::vector<int>> events;
        std::vector<std::vector<int>> by_edge(edges.size());
        for (std::size_t k = 0; k < copies.size(); ++k) {
            std::vector<int> ev;
            for (int a : copies[k].left)
                for (int b : copies[k].right)
                    ev.push_back(edge_index[static_cast<std::size_t>(a) * n + b]);
            for (int e : ev)
                by_edge[e].push_back(static_cast<int>(k));
            events.push_back(std::move(ev));
        }

        LllReport report;
        report.seed = seed;
        report.events = static_cast<std::int64_t>(events.size());
        std::vector<std::int64_t> mark(events.size(), -1);
        for (std::size_t k = 0; k < events.size(); ++k) {
            std::int64_t deg = 0;
            for (int e : events[k])
                for (int other : by_edge[e])
                    if (other != static_cast<int>(k) && mark[other] != static_cast<std::int64_t>(k)) {
                        mark[other] = static_cast<std::int64_t>(k);
                        ++deg;
                    }
            report.dependency_degree = std::max(report.dependency_degree, deg);
        }
        report.log2_event_probability = 1.0 - static_cast<double>(w) * w;
        report.lll_condition = std::log2(std::numbers::e) + std::log2(static_cast<double>(report.dependency_degree + 1))
                + report.log2_event_probability
            < 0;

        Rng rng(seed);
        std::vector<std::uint8_t> color(edges.size());
        for (auto & c : color)
            c = static_cast<std::uint8_t>(rng.below(2));

        auto violated = [&]() -> int {
            for (std::size_t k = 0; k < events.size(); ++k) {
                auto & ev = events[k];
                bool mono = true;
                for (std::size_t i = 1; i < ev.size() && mono; ++i)
                    mono = color[ev[i]] == color[ev[0]];
                if (mono)
                    return static_cast<int>(k);
            }
            return -1;
        };

        for (int k = violated(); k != -1; k = violated()) {
            if (report.resamples >= max_resample)
                throw AttemptsExhausted("resample budget exhausted: " + std::to_string(max_resample)
                    + " resamplings left a monochromatic K_{" + std::to_string(w) + "," + std::to_string(w) + "}");
            for (int e : events[k])
                color[e] = static_cast<std::uint8_t>(rng.below(2));
            ++report.resamples;
        }

        report.coloring = EdgeColoring(g, 2);
        for (std::size_t i = 0; i < edges.size(); ++i)
            report.coloring.set(edges[i].u, edges[i].v, color[i]);
        report.monochromatic_copies = count_monochromatic_bicliques(g, report.coloring, w, budget);
        if (report.monochromatic_copies != 0)
            throw InvariantViolation("Moser-Tardos output still contains a monochromatic biclique");
        report.verified = true;
        return report;
    }

    auto to_string(Adversary a) -> std::string
    {
        switch (a) {
        case Adversary::uniform_random: return "uniform-random";
        case Adversary::per_base_edge_majority: return "per-base-edge-majority";
        case Adversary::part_index_parity: return "part-index-parity";
        case Adversary::half_split_within_block: return "half-split-within-block";
        }
        return "uniform-random";
    }

    auto parse_adversary(const std::string & s) -> Adversary
    {
        for (auto a : {Adversary::uniform_random, Adversary::per_base_edge_majority, Adversary::part_index_parity,
                 Adversary::half_split_within_block})
            if (to_string(a) == s)
                return a;
        throw InvalidInput("unknown adversary strategy '" + s
            + "' (expected uniform-random, per-base-edge-majority, part-index-parity or half-split-within-block)");
    }

    auto adversary_color(const Blowup & b, Adversary strategy, int q, std::uint64_t seed) -> EdgeColoring
    {
        EdgeColoring out(b.host, q);
        std::vector<int> pos(b.phi.size(), 0);
        for (auto & part : b.parts)
            for (std::size_t i = 0; i < part.size(); ++i)
                pos[part[i]] = static_cast<int>(i);
        auto base_edges = b.base.edges();
        Rng rng(seed);

        for (auto & e : b.host.edges()) {
            int c = 0;
            auto be = make_edge(b.phi[e.u], b.phi[e.v]);
            switch (strategy) {
            case Adversary::uniform_random:
                c = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
                break;
            case Adversary::per_base_edge_majority: {
                auto it = std::lower_bound(base_edges.begin(), base_edges.end(), be);
                c = static_cast<int>((it - base_edges.begin()) % q);
                break;
            }
            case Adversary::part_index_parity:
                c = (pos[e.u] + pos[e.v]) % q;
                break;
            case Adversary::half_split_within_block: {
                int row = b.phi[e.u] == be.u ? e.u : e.v;
                auto rows = static_cast<int>(b.parts[be.u].size());
                c = static_cast<int>(static_cast<std::int64_t>(pos[row]) * q / rows);
                break;
            }
            }
            out.set(e.u, e.v, c);
        }
        return out;
    }

    auto random_regular_graph(int n, int d, std::uint64_t seed) -> Graph
    {
        if (n < 1 || d < 0 || d >= n || (static_cast<std::int64_t>(n) * d) % 2)
            throw InvalidInput("no simple " + std::to_string(d) + "-regular graph on " + std::to_string(n) + " vertices");
        Rng rng(seed);
        std::vector<int> points;
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i)
                points.push_back(v);
        for (int attempt = 0; attempt < 100'000; ++attempt) {
            rng.shuffle(points);
            Graph g(n);
            bool ok = true;
            for (std::size_t i = 0; i + 1 < points.size() && ok; i += 2) {
                int a = points[i], b = points[i + 1];
                ok = a != b && ! g.adjacent(a, b);
                if (ok)
                    g.add_edge(a, b);
            }
            if (ok)
                return g;
        }
        throw AttemptsExhausted("pairing model rejected 100000 times");
    }
}
