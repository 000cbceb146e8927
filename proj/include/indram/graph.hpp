#pragma once

#include <indram/vertex_set.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace indram
{
    /// Undirected edge, always stored with u < v.
    struct Edge
    {
        int u = 0;
        int v = 0;

        auto operator<=>(const Edge &) const = default;
    };

    [[nodiscard]] auto make_edge(int a, int b) -> Edge;
    [[nodiscard]] auto edge_key(const Edge & e) -> std::string;
    [[nodiscard]] auto parse_edge_key(const std::string & key) -> Edge;

    /// Simple undirected graph on 0..n-1 with one adjacency bitmap per vertex.
    class Graph
    {
    public:
        Graph() = default;
        explicit Graph(int n);

        [[nodiscard]] auto size() const -> int { return static_cast<int>(_rows.size()); }
        [[nodiscard]] auto edge_count() const -> std::int64_t { return _edge_count; }
        [[nodiscard]] auto adjacent(int u, int v) const -> bool { return _rows[u].test(v); }
        [[nodiscard]] auto neighbors(int v) const -> const VertexSet & { return _rows[v]; }
        [[nodiscard]] auto rows() const -> const std::vector<VertexSet> & { return _rows; }
        [[nodiscard]] auto degree(int v) const -> int { return _rows[v].count(); }
        [[nodiscard]] auto max_degree() const -> int;

        /// Sorted lexicographically.
        [[nodiscard]] auto edges() const -> std::vector<Edge>;

        /// Returns false when the edge was already present. Throws InvalidInput on loops or bad endpoints.
        auto add_edge(int u, int v) -> bool;
        auto remove_edge(int u, int v) -> bool;

        friend auto operator==(const Graph &, const Graph &) -> bool = default;

    private:
        std::vector<VertexSet> _rows;
        std::int64_t _edge_count = 0;
    };

    /// Duplicates (in either orientation) collapse; loops and out-of-range endpoints throw InvalidInput.
    [[nodiscard]] auto build_graph(int n, const std::vector<std::pair<int, int>> & edges) -> Graph;

    [[nodiscard]] auto complete_graph(int n) -> Graph;
    [[nodiscard]] auto path_graph(int n) -> Graph;
    [[nodiscard]] auto cycle_graph(int n) -> Graph;
    /// K_{1,m}; vertex 0 is the center.
    [[nodiscard]] auto star_graph(int leaves) -> Graph;
    /// K_{a,b} with sides 0..a-1 and a..a+b-1.
    [[nodiscard]] auto complete_bipartite_graph(int a, int b) -> Graph;

    /// Two-coloring of the vertices if the graph is bipartite (side 0 holds the lowest vertex of each component).
    [[nodiscard]] auto bipartition(const Graph & g) -> std::optional<std::vector<int>>;

    struct InducedSubgraph
    {
        Graph graph;
        std::vector<int> original; ///< original[new] = old
    };

    [[nodiscard]] auto induced_subgraph(const Graph & g, const std::vector<int> & subset) -> InducedSubgraph;

    /// rows x cols 0/1 matrix; row i is a bitmap over the columns.
    struct Biadjacency
    {
        int rows = 0;
        int cols = 0;
        std::vector<VertexSet> row;

        Biadjacency() = default;
        Biadjacency(int r, int c, bool full = false);

        [[nodiscard]] auto test(int i, int j) const -> bool { return row[i].test(j); }
        auto set(int i, int j) -> void { row[i].set(j); }
        [[nodiscard]] auto edge_count() const -> std::int64_t;
        [[nodiscard]] auto transpose() const -> Biadjacency;

        friend auto operator==(const Biadjacency &, const Biadjacency &) -> bool = default;
    };

    /// Two disjoint vertex subsets of a shared host graph.
    class BipartitePair
    {
    public:
        BipartitePair(std::shared_ptr<const Graph> host, std::vector<int> x, std::vector<int> y);

        /// Host on a+b vertices: X = 0..a-1, Y = a..a+b-1, edges as in the block.
        static auto from_block(const Biadjacency & block) -> BipartitePair;

        [[nodiscard]] auto host() const -> const Graph & { return *_host; }
        [[nodiscard]] auto host_ptr() const -> const std::shared_ptr<const Graph> & { return _host; }
        [[nodiscard]] auto x() const -> const std::vector<int> & { return _x; }
        [[nodiscard]] auto y() const -> const std::vector<int> & { return _y; }

        /// Rows follow the order of x(), columns the order of y().
        [[nodiscard]] auto biadjacency() const -> Biadjacency;

    private:
        std::shared_ptr<const Graph> _host;
        std::vector<int> _x, _y;
    };

    /// Host graph with a homomorphism phi onto the base whose fibers (parts) are independent sets.
    struct Blowup
    {
        Graph base;
        Graph host;
        std::vector<int> phi;
        std::vector<std::vector<int>> parts;

        [[nodiscard]] auto part_sizes() const -> std::vector<int>;
        [[nodiscard]] auto part_set(int v) const -> VertexSet;
        /// Rows are parts[e.u], columns parts[e.v].
        [[nodiscard]] auto block(const Edge & e) const -> Biadjacency;
    };

    using BlockProvider = std::function<Biadjacency(const Edge & base_edge, int rows, int cols)>;

    /// Parts are laid out consecutively in base-vertex order. Each base edge (u<v) gets the
    /// provider's block with rows in parts[u] and columns in parts[v].
    [[nodiscard]] auto construct_blowup(const Graph & base, const std::vector<int> & part_sizes, const BlockProvider & provider) -> Blowup;

    struct BlowupCheck
    {
        bool ok = true;
        std::vector<std::string> violations;
        std::optional<Edge> offending_edge;
    };

    [[nodiscard]] auto verify_blowup(const Blowup & b, int s) -> BlowupCheck;

    /// Largest H' accepted by is_blowup_of.
    inline constexpr int blowup_search_cap = 16;

    /// A homomorphism H' -> H with fibers of size <= w, if one exists. Throws BudgetExceeded above the cap.
    [[nodiscard]] auto is_blowup_of(const Graph & hprime, const Graph & h, int w) -> std::optional<std::vector<int>>;

    /// Total q-coloring of a graph's edges, stored as a symmetric matrix.
    class EdgeColoring
    {
    public:
        static constexpr std::uint8_t no_edge = 0xff;
        static constexpr int max_colors = 254;

        EdgeColoring() = default;
        /// Every edge of g receives `initial`.
        EdgeColoring(const Graph & g, int q, int initial = 0);

        [[nodiscard]] auto q() const -> int { return _q; }
        [[nodiscard]] auto vertex_count() const -> int { return _n; }
        /// -1 when uv is not an edge of the colored graph.
        [[nodiscard]] auto color(int u, int v) const -> int
        {
            auto c = _colors[static_cast<std::size_t>(u) * _n + v];
            return c == no_edge ? -1 : c;
        }
        auto set(int u, int v, int c) -> void;

        /// Adjacency rows of the color-c subgraph.
        [[nodiscard]] auto class_rows(int c) const -> std::vector<VertexSet>;
        [[nodiscard]] auto class_graph(int c) const -> Graph;
        /// Defined on exactly g's edge set, all values < q.
        [[nodiscard]] auto matches(const Graph & g) const -> bool;

        friend auto operator==(const EdgeColoring &, const EdgeColoring &) -> bool = default;

    private:
        int _q = 0;
        int _n = 0;
        std::vector<std::uint8_t> _colors;
    };

    struct Embedding
    {
        Graph pattern;
        std::vector<int> map; ///< pattern vertex -> host vertex
        std::optional<int> claimed_color;
    };

    /// map injective, edges and non-edges preserved, and (with a coloring and color) every image edge has that color.
    [[nodiscard]] auto is_induced_copy(const Graph & host, const Graph & pattern, const std::vector<int> & map,
        const EdgeColoring * coloring = nullptr, std::optional<int> color = std::nullopt) -> bool;
}
