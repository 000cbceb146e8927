#include <indram/errors.hpp>
#include <indram/graph.hpp>

#include <algorithm>
#include <charconv>
#include <deque>
#include <numeric>

namespace indram
{
    auto make_edge(int a, int b) -> Edge
    {
        return a < b ? Edge{a, b} : Edge{b, a};
    }

    auto edge_key(const Edge & e) -> std::string
    {
        return std::to_string(e.u) + "-" + std::to_string(e.v);
    }

    auto parse_edge_key(const std::string & key) -> Edge
    {
        auto dash = key.find('-');
        int a = -1, b = -1;
        if (dash == std::string::npos)
            throw InvalidInput("edge key '" + key + "' is not of the form u-v");
        auto r1 = std::from_chars(key.data(), key.data() + dash, a);
        auto r2 = std::from_chars(key.data() + dash + 1, key.data() + key.size(), b);
        if (r1.ec != std::errc{} || r1.ptr != key.data() + dash || r2.ec != std::errc{} || r2.ptr != key.data() + key.size())
            throw InvalidInput("edge key '" + key + "' is not of the form u-v");
        return make_edge(a, b);
    }

    Graph::Graph(int n)
    {
        if (n < 0)
            throw InvalidInput("negative vertex count");
        _rows.assign(static_cast<std::size_t>(n), VertexSet(n));
    }

    auto Graph::max_degree() const -> int
    {
        int d = 0;
        for (auto & r : _rows)
            d = std::max(d, r.count());
        return d;
    }

    auto Graph::edges() const -> std::vector<Edge>
    {
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(_edge_count));
        for (int u = 0; u < size(); ++u)
            for (int v = _rows[u].next(u + 1); v != -1; v = _rows[u].next(v + 1))
                out.push_back({u, v});
        return out;
    }

    auto Graph::add_edge(int u, int v) -> bool
    {
        if (u < 0 || v < 0 || u >= size() || v >= size())
            throw InvalidInput("edge (" + std::to_string(u) + "," + std::to_string(v) + ") has an endpoint outside 0.."
                + std::to_string(size() - 1));
        if (u == v)
            throw InvalidInput("self-loop (" + std::to_string(u) + "," + std::to_string(v) + ")");
        if (_rows[u].test(v))
            return false;
        _rows[u].set(v);
        _rows[v].set(u);
        ++_edge_count;
        return true;
    }

    auto Graph::remove_edge(int u, int v) -> bool
    {
        if (! _rows[u].test(v))
            return false;
        _rows[u].reset(v);
        _rows[v].reset(u);
        --_edge_count;
        return true;
    }

    auto build_graph(int n, const std::vector<std::pair<int, int>> & edges) -> Graph
    {
        Graph g(n);
        for (auto [u, v] : edges)
            g.add_edge(u, v);
        return g;
    }

    auto complete_graph(int n) -> Graph
    {
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                g.add_edge(u, v);
        return g;
    }

    auto path_graph(int n) -> Graph
    {
        Graph g(n);
        for (int v = 0; v + 1 < n; ++v)
            g.add_edge(v, v + 1);
        return g;
    }

    auto cycle_graph(int n) -> Graph
    {
        auto g = path_graph(n);
        if (n >= 3)
            g.add_edge(n - 1, 0);
        return g;
    }

    auto star_graph(int leaves) -> Graph
    {
        Graph g(leaves + 1);
        for (int v = 1; v <= leaves; ++v)
            g.add_edge(0, v);
        return g;
    }

    auto complete_bipartite_graph(int a, int b) -> Graph
    {
        Graph g(a + b);
        for (int u = 0; u < a; ++u)
            for (int v = a; v < a + b; ++v)
                g.add_edge(u, v);
        return g;
    }

    auto bipartition(const Graph & g) -> std::optional<std::vector<int>>
    {
        std::vector<int> side(static_cast<std::size_t>(g.size()), -1);
        for (int s = 0; s < g.size(); ++s) {
            if (side[s] != -1)
                continue;
            side[s] = 0;
            std::deque<int> queue{s};
            while (! queue.empty()) {
                int u = queue.front();
                queue.pop_front();
                bool clash = false;
                g.neighbors(u).for_each([&](int v) {
                    if (side[v] == -1) {
                        side[v] = 1 - side[u];
                        queue.push_back(v);
                    }
                    else if (side[v] == side[u])
                        clash = true;
                });
                if (clash)
                    return std::nullopt;
            }
        }
        return side;
    }

    auto induced_subgraph(const Graph & g, const std::vector<int> & subset) -> InducedSubgraph
    {
        VertexSet seen(g.size());
        for (int v : subset) {
            if (v < 0 || v >= g.size())
                throw InvalidInput("vertex " + std::to_string(v) + " outside 0.." + std::to_string(g.size() - 1));
            if (seen.test(v))
                throw InvalidInput("vertex " + std::to_string(v) + " repeated in subset");
            seen.set(v);
        }
        InducedSubgraph out{Graph(static_cast<int>(subset.size())), subset};
        for (std::size_t i = 0; i < subset.size(); ++i)
            for (std::size_t j = i + 1; j < subset.size(); ++j)
                if (g.adjacent(subset[i], subset[j]))
                    out.graph.add_edge(static_cast<int>(i), static_cast<int>(j));
        return out;
    }

    Biadjacency::Biadjacency(int r, int c, bool full) :
        rows(r),
        cols(c),
        row(static_cast<std::size_t>(r), VertexSet(c, full))
    {
    }

    auto Biadjacency::edge_count() const -> std::int64_t
    {
        std::int64_t e = 0;
        for (auto & r : row)
            e += r.count();
        return e;
    }

    auto Biadjacency::transpose() const -> Biadjacency
    {
        Biadjacency t(cols, rows);
        for (int i = 0; i < rows; ++i)
            row[i].for_each([&](int j) { t.set(j, i); });
        return t;
    }

    BipartitePair::BipartitePair(std::shared_ptr<const Graph> host, std::vector<int> x, std::vector<int> y) :
        _host(std::move(host)),
        _x(std::move(x)),
        _y(std::move(y))
    {
        if (! _host)
            throw InvalidInput("bipartite pair without a host graph");
        VertexSet seen(_host->size());
        for (auto * side : {&_x, &_y})
            for (int v : *side) {
                if (v < 0 || v >= _host->size())
                    throw InvalidInput("pair vertex " + std::to_string(v) + " outside host");
                if (seen.test(v))
                    throw InvalidInput("pair sides overlap or repeat vertex " + std::to_string(v));
                seen.set(v);
            }
    }

    auto BipartitePair::from_block(const Biadjacency & block) -> BipartitePair
    {
        auto host = std::make_shared<Graph>(block.rows + block.cols);
        for (int i = 0; i < block.rows; ++i)
            block.row[i].for_each([&](int j) { host->add_edge(i, block.rows + j); });
        std::vector<int> x(static_cast<std::size_t>(block.rows)), y(static_cast<std::size_t>(block.cols));
        std::iota(x.begin(), x.end(), 0);
        std::iota(y.begin(), y.end(), block.rows);
        return BipartitePair(std::move(host), std::move(x), std::move(y));
    }

    auto BipartitePair::biadjacency() const -> Biadjacency
    {
        Biadjacency b(static_cast<int>(_x.size()), static_cast<int>(_y.size()));
        for (std::size_t i = 0; i < _x.size(); ++i)
            for (std::size_t j = 0; j < _y.size(); ++j)
                if (_host->adjacent(_x[i], _y[j]))
                    b.set(static_cast<int>(i), static_cast<int>(j));
        return b;
    }

    auto Blowup::part_sizes() const -> std::vector<int>
    {
        std::vector<int> out;
        out.reserve(parts.size());
        for (auto & p : parts)
            out.push_back(static_cast<int>(p.size()));
        return out;
    }

    auto Blowup::part_set(int v) const -> VertexSet
    {
        return VertexSet::from_members(host.size(), parts[v]);
    }

    auto Blowup::block(const Edge & e) const -> Biadjacency
    {
        auto & rows = parts[e.u];
        auto & cols = parts[e.v];
        Biadjacency b(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (host.adjacent(rows[i], cols[j]))
                    b.set(static_cast<int>(i), static_cast<int>(j));
        return b;
    }

    auto construct_blowup(const Graph & base, const std::vector<int> & part_sizes, const BlockProvider & provider) -> Blowup
    {
        if (static_cast<int>(part_sizes.size()) != base.size())
            throw InvalidInput("expected " + std::to_string(base.size()) + " part sizes, got " + std::to_string(part_sizes.size()));

        Blowup b;
        b.base = base;
        b.parts.resize(part_sizes.size());
        int total = 0;
        for (std::size_t v = 0; v < part_sizes.size(); ++v) {
            if (part_sizes[v] < 0)
                throw InvalidInput("negative part size for base vertex " + std::to_string(v));
            for (int i = 0; i < part_sizes[v]; ++i) {
                b.parts[v].push_back(total + i);
                b.phi.push_back(static_cast<int>(v));
            }
            total += part_sizes[v];
        }

        b.host = Graph(total);
        for (auto & e : base.edges()) {
            auto block = provider(e, part_sizes[e.u], part_sizes[e.v]);
            if (block.rows != part_sizes[e.u] || block.cols != part_sizes[e.v] || static_cast<int>(block.row.size()) != block.rows)
                throw InvalidInput("block for base edge " + edge_key(e) + " is " + std::to_string(block.rows) + "x"
                    + std::to_string(block.cols) + ", parts need " + std::to_string(part_sizes[e.u]) + "x"
                    + std::to_string(part_sizes[e.v]));
            for (int i = 0; i < block.rows; ++i) {
                if (block.row[i].universe() != block.cols)
                    throw InvalidInput("block row width mismatch on base edge " + edge_key(e));
                block.row[i].for_each([&](int j) { b.host.add_edge(b.parts[e.u][i], b.parts[e.v][j]); });
            }
        }
        return b;
    }

    auto verify_blowup(const Blowup & b, int s) -> BlowupCheck
    {
        BlowupCheck check;
        auto fail = [&](std::string why) {
            check.ok = false;
            check.violations.push_back(std::move(why));
        };

        if (static_cast<int>(b.phi.size()) != b.host.size())
            fail("phi is not total on the host");
        if (static_cast<int>(b.parts.size()) != b.base.size())
            fail("parts list does not match the base vertex count");
        if (! check.ok)
            return check;

        for (std::size_t x = 0; x < b.phi.size(); ++x)
            if (b.phi[x] < 0 || b.phi[x] >= b.base.size())
                fail("phi(" + std::to_string(x) + ") outside base");
        if (! check.ok)
            return check;

        std::vector<int> expected(b.phi.size(), -1);
        for (std::size_t v = 0; v < b.parts.size(); ++v) {
            if (static_cast<int>(b.parts[v].size()) > s)
                fail("part too large: base vertex " + std::to_string(v) + " has " + std::to_string(b.parts[v].size())
                    + " > " + std::to_string(s));
            for (int x : b.parts[v]) {
                if (x < 0 || x >= b.host.size() || expected[x] != -1)
                    fail("parts overlap or leave the host at vertex " + std::to_string(x));
                else
                    expected[x] = static_cast<int>(v);
            }
        }
        if (expected != b.phi)
            fail("parts disagree with phi");

        for (auto & e : b.host.edges()) {
            int pu = b.phi[e.u], pv = b.phi[e.v];
            if (pu == pv) {
                fail("intra-part edge " + edge_key(e) + " inside part " + std::to_string(pu));
                if (! check.offending_edge)
                    check.offending_edge = e;
            }
            else if (! b.base.adjacent(pu, pv)) {
                fail("host edge " + edge_key(e) + " maps to base non-edge " + edge_key(make_edge(pu, pv)));
                if (! check.offending_edge)
                    check.offending_edge = e;
            }
        }
        return check;
    }

    namespace
    {
        auto blowup_search(const Graph & hprime, const Graph & h, int w, int next, std::vector<int> & phi, std::vector<int> & load) -> bool
        {
            if (next == hprime.size())
                return true;
            for (int t = 0; t < h.size(); ++t) {
                if (load[t] >= w)
                    continue;
                bool ok = true;
                for (int j = 0; j < next && ok; ++j)
                    if (hprime.adjacent(next, j) && ! h.adjacent(t, phi[j]))
                        ok = false;
                if (! ok)
                    continue;
                phi[next] = t;
                ++load[t];
                if (blowup_search(hprime, h, w, next + 1, phi, load))
                    return true;
                --load[t];
            }
            return false;
        }
    }

    auto is_blowup_of(const Graph & hprime, const Graph & h, int w) -> std::optional<std::vector<int>>
    {
        if (hprime.size() > blowup_search_cap)
            throw BudgetExceeded("search cap: is_blowup_of accepts at most " + std::to_string(blowup_search_cap)
                + " vertices, got " + std::to_string(hprime.size()));
        if (w < 1)
            return hprime.size() == 0 ? std::optional<std::vector<int>>(std::vector<int>{}) : std::nullopt;
        std::vector<int> phi(static_cast<std::size_t>(hprime.size()), -1), load(static_cast<std::size_t>(h.size()), 0);
        if (blowup_search(hprime, h, w, 0, phi, load))
            return phi;
        return std::nullopt;
    }

    EdgeColoring::EdgeColoring(const Graph & g, int q, int initial) :
        _q(q),
        _n(g.size()),
        _colors(static_cast<std::size_t>(g.size()) * g.size(), no_edge)
    {
        if (q < 1 || q > max_colors)
            throw InvalidInput("color count q must lie in 1.." + std::to_string(max_colors));
        if (initial < 0 || initial >= q)
            throw InvalidInput("initial color outside 0..q-1");
        for (auto & e : g.edges()) {
            _colors[static_cast<std::size_t>(e.u) * _n + e.v] = static_cast<std::uint8_t>(initial);
            _colors[static_cast<std::size_t>(e.v) * _n + e.u] = static_cast<std::uint8_t>(initial);
        }
    }

    auto EdgeColoring::set(int u, int v, int c) -> void
    {
        if (u < 0 || v < 0 || u >= _n || v >= _n || color(u, v) == -1)
            throw InvalidInput("cannot color non-edge " + edge_key(make_edge(u, v)));
        if (c < 0 || c >= _q)
            throw InvalidInput("color " + std::to_string(c) + " outside 0.." + std::to_string(_q - 1));
        _colors[static_cast<std::size_t>(u) * _n + v] = static_cast<std::uint8_t>(c);
        _colors[static_cast<std::size_t>(v) * _n + u] = static_cast<std::uint8_t>(c);
    }

    auto EdgeColoring::class_rows(int c) const -> std::vector<VertexSet>
    {
        std::vector<VertexSet> rows(static_cast<std::size_t>(_n), VertexSet(_n));
        for (int u = 0; u < _n; ++u)
            for (int v = 0; v < _n; ++v)
                if (_colors[static_cast<std::size_t>(u) * _n + v] == c)
                    rows[u].set(v);
        return rows;
    }

    auto EdgeColoring::class_graph(int c) const -> Graph
    {
        Graph g(_n);
        for (int u = 0; u < _n; ++u)
            for (int v = u + 1; v < _n; ++v)
                if (_colors[static_cast<std::size_t>(u) * _n + v] == c)
                    g.add_edge(u, v);
        return g;
    }

    auto EdgeColoring::matches(const Graph & g) const -> bool
    {
        if (g.size() != _n)
            return false;
        for (int u = 0; u < _n; ++u)
            for (int v = 0; v < _n; ++v) {
                auto c = _colors[static_cast<std::size_t>(u) * _n + v];
                if (g.adjacent(u, v) != (c != no_edge))
                    return false;
                if (c != no_edge && c >= _q)
                    return false;
            }
        return true;
    }

    auto is_induced_copy(const Graph & host, const Graph & pattern, const std::vector<int> & map,
        const EdgeColoring * coloring, std::optional<int> color) -> bool
    {
        if (static_cast<int>(map.size()) != pattern.size())
            return false;
        VertexSet used(host.size());
        for (int x : map) {
            if (x < 0 || x >= host.size() || used.test(x))
                return false;
            used.set(x);
        }
        for (int u = 0; u < pattern.size(); ++u)
            for (int v = u + 1; v < pattern.size(); ++v) {
                bool want = pattern.adjacent(u, v);
                if (host.adjacent(map[u], map[v]) != want)
                    return false;
                if (want && coloring && color && coloring->color(map[u], map[v]) != *color)
                    return false;
            }
        return true;
    }
}
