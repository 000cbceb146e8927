#include <indram/errors.hpp>
#include <indram/serialization.hpp>

#include <fstream>
#include <sstream>

namespace indram
{
    auto canonical_dump(const Json & j) -> std::string
    {
        return j.dump() + "\n";
    }

    auto read_json_file(const std::string & path) -> Json
    {
        std::ifstream in(path);
        if (! in)
            throw InvalidInput("cannot open " + path);
        try {
            return Json::parse(in);
        }
        catch (const Json::parse_error & e) {
            throw InvalidInput(path + ": " + e.what());
        }
    }

    auto require(const Json & j, const std::string & key, const std::string & path) -> const Json &
    {
        if (! j.is_object())
            throw InvalidInput((path.empty() ? "/" : path) + ": expected an object");
        auto it = j.find(key);
        if (it == j.end())
            throw InvalidInput(path + "/" + key + ": missing field");
        return *it;
    }

    auto get_int(const Json & j, const std::string & path) -> std::int64_t
    {
        if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            throw InvalidInput(path + ": integer out of range");
        if (! j.is_number_integer())
            throw InvalidInput(path + ": expected an integer");
        return j.get<std::int64_t>();
    }

    namespace
    {
        auto get_word(const Json & j, const std::string & path) -> std::uint64_t
        {
            if (j.is_number_unsigned())
                return j.get<std::uint64_t>();
            if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
                return static_cast<std::uint64_t>(j.get<std::int64_t>());
            throw InvalidInput(path + ": expected a non-negative integer bitmask");
        }

        auto words_from_json(const Json & j, int universe, const std::string & path) -> VertexSet
        {
            VertexSet s(universe);
            auto & words = s.words();
            if (j.is_array()) {
                if (j.size() != words.size())
                    throw InvalidInput(path + ": expected " + std::to_string(words.size()) + " words, got " + std::to_string(j.size()));
                for (std::size_t i = 0; i < words.size(); ++i)
                    words[i] = get_word(j[i], path + "/" + std::to_string(i));
            }
            else {
                if (words.size() > 1)
                    throw InvalidInput(path + ": rows wider than 64 columns must be arrays of words");
                auto w = get_word(j, path);
                if (words.empty()) {
                    if (w != 0)
                        throw InvalidInput(path + ": bits set outside the column range");
                    return s;
                }
                words[0] = w;
            }
            int spare = universe % 64;
            if (spare != 0 && (words.back() >> spare) != 0)
                throw InvalidInput(path + ": bits set outside the column range");
            return s;
        }

        auto words_to_json(const VertexSet & s) -> Json
        {
            Json a = Json::array();
            for (auto w : s.words())
                a.push_back(w);
            return a;
        }

        auto dimension(const Json & j, const std::string & path) -> int
        {
            auto v = get_int(j, path);
            if (v < 0 || v > 1'000'000)
                throw InvalidInput(path + ": dimension out of range");
            return static_cast<int>(v);
        }
    }

    auto to_json(const Graph & g) -> Json
    {
        Json edges = Json::array();
        for (auto & e : g.edges())
            edges.push_back({e.u, e.v});
        return {{"n", g.size()}, {"edges", edges}};
    }

    auto graph_from_json(const Json & j, const std::string & path) -> Graph
    {
        if (! j.is_object())
            throw InvalidInput(path + ": expected an object");
        for (auto & [key, value] : j.items())
            if (key != "n" && key != "edges")
                throw InvalidInput(path + "/" + key + ": unknown field");
        int n = dimension(require(j, "n", path), path + "/n");
        auto & edges = require(j, "edges", path);
        if (! edges.is_array())
            throw InvalidInput(path + "/edges: expected an array");
        Graph g(n);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            auto at = path + "/edges/" + std::to_string(i);
            auto & e = edges[i];
            if (! e.is_array() || e.size() != 2)
                throw InvalidInput(at + ": expected a vertex pair");
            auto u = get_int(e[0], at + "/0");
            auto v = get_int(e[1], at + "/1");
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw InvalidInput(at + ": endpoint out of range in (" + std::to_string(u) + "," + std::to_string(v) + ")");
            if (u == v)
                throw InvalidInput(at + ": self-loop (" + std::to_string(u) + "," + std::to_string(v) + ")");
            g.add_edge(static_cast<int>(u), static_cast<int>(v));
        }
        return g;
    }

    auto block_to_json(const Biadjacency & b) -> Json
    {
        Json rows = Json::array();
        for (auto & r : b.row) {
            if (b.cols <= 64)
                rows.push_back(r.words().empty() ? 0 : r.words()[0]);
            else
                rows.push_back(words_to_json(r));
        }
        return {{"a", b.rows}, {"b", b.cols}, {"rows", rows}};
    }

    auto block_from_json(const Json & j, const std::string & path) -> Biadjacency
    {
        int a = dimension(require(j, "a", path), path + "/a");
        int b = dimension(require(j, "b", path), path + "/b");
        auto & rows = require(j, "rows", path);
        if (! rows.is_array() || rows.size() != static_cast<std::size_t>(a))
            throw InvalidInput(path + "/rows: expected an array of " + std::to_string(a) + " rows");
        Biadjacency block(a, b);
        for (int i = 0; i < a; ++i)
            block.row[i] = words_from_json(rows[i], b, path + "/rows/" + std::to_string(i));
        return block;
    }

    auto to_json(const Blowup & b) -> Json
    {
        Json blocks = Json::object();
        for (auto & e : b.base.edges()) {
            Json rows = Json::array();
            for (auto & r : b.block(e).row)
                rows.push_back(words_to_json(r));
            blocks[edge_key(e)] = rows;
        }
        return {{"base", to_json(b.base)}, {"part_sizes", b.part_sizes()}, {"blocks", blocks}};
    }

    auto blowup_from_json(const Json & j, const std::string & path) -> Blowup
    {
        auto base = graph_from_json(require(j, "base", path), path + "/base");
        auto & sizes_json = require(j, "part_sizes", path);
        if (! sizes_json.is_array() || sizes_json.size() != static_cast<std::size_t>(base.size()))
            throw InvalidInput(path + "/part_sizes: expected " + std::to_string(base.size()) + " sizes");
        std::vector<int> sizes;
        for (std::size_t i = 0; i < sizes_json.size(); ++i)
            sizes.push_back(dimension(sizes_json[i], path + "/part_sizes/" + std::to_string(i)));

        auto & blocks = require(j, "blocks", path);
        if (! blocks.is_object())
            throw InvalidInput(path + "/blocks: expected an object");
        for (auto it = blocks.begin(); it != blocks.end(); ++it) {
            Edge e;
            try {
                e = parse_edge_key(it.key());
            }
            catch (const InvalidInput &) {
                throw InvalidInput(path + "/blocks/" + it.key() + ": malformed edge key");
            }
            if (e.v >= base.size() || ! base.adjacent(e.u, e.v))
                throw InvalidInput(path + "/blocks/" + it.key() + ": not an edge of the base");
        }
        auto provider = [&](const Edge & e, int rows, int cols) {
            auto key = edge_key(e);
            auto at = path + "/blocks/" + key;
            auto it = blocks.find(key);
            if (it == blocks.end())
                throw InvalidInput(at + ": missing block");
            if (! it->is_array() || it->size() != static_cast<std::size_t>(rows))
                throw InvalidInput(at + ": expected " + std::to_string(rows) + " rows");
            Biadjacency block(rows, cols);
            for (int i = 0; i < rows; ++i)
                block.row[i] = words_from_json((*it)[i], cols, at + "/" + std::to_string(i));
            return block;
        };
        auto b = construct_blowup(base, sizes, provider);
        if (j.contains("host")) {
            auto host = graph_from_json(j["host"], path + "/host");
            if (host.size() != b.host.size())
                throw InvalidInput(path + "/host: expected " + std::to_string(b.host.size()) + " vertices");
            b.host = std::move(host);
        }
        return b;
    }

    auto to_json(const Graph & g, const EdgeColoring & c) -> Json
    {
        Json colors = Json::object();
        for (auto & e : g.edges())
            colors[edge_key(e)] = c.color(e.u, e.v);
        return {{"q", c.q()}, {"colors", colors}};
    }

    auto coloring_from_json(const Graph & g, const Json & j, const std::string & path) -> EdgeColoring
    {
        auto q = get_int(require(j, "q", path), path + "/q");
        if (q < 1 || q > EdgeColoring::max_colors)
            throw InvalidInput(path + "/q: color count out of range");
        auto & colors = require(j, "colors", path);
        if (! colors.is_object())
            throw InvalidInput(path + "/colors: expected an object");
        EdgeColoring c(g, static_cast<int>(q));
        std::int64_t seen = 0;
        for (auto it = colors.begin(); it != colors.end(); ++it) {
            auto at = path + "/colors/" + it.key();
            Edge e;
            try {
                e = parse_edge_key(it.key());
            }
            catch (const InvalidInput &) {
                throw InvalidInput(at + ": malformed edge key");
            }
            if (e.v >= g.size() || ! g.adjacent(e.u, e.v))
                throw InvalidInput(at + ": not an edge of the graph");
            auto v = get_int(it.value(), at);
            if (v < 0 || v >= q)
                throw InvalidInput(at + ": color out of range");
            c.set(e.u, e.v, static_cast<int>(v));
            ++seen;
        }
        if (seen != g.edge_count())
            throw InvalidInput(path + "/colors: coloring must cover all " + std::to_string(g.edge_count()) + " edges");
        return c;
    }

    auto to_json(const Ratio & r) -> Json
    {
        return r.to_string();
    }

    auto ratio_from_json(const Json & j, const std::string & path) -> Ratio
    {
        try {
            if (j.is_string())
                return Ratio::parse(j.get<std::string>());
            if (j.is_number_integer())
                return Ratio(j.get<std::int64_t>());
            if (j.is_number_float())
                return Ratio::from_double(j.get<double>());
        }
        catch (const InvalidInput & e) {
            throw InvalidInput(path + ": " + e.what());
        }
        throw InvalidInput(path + ": expected a number or a rational string");
    }

    auto to_json(const RegularityParams & p) -> Json
    {
        return {{"L", to_json(p.L)}, {"p", to_json(p.p)}, {"mode", to_string(p.mode)}};
    }

    auto to_json(const RegularityVerdict & v) -> Json
    {
        Json j = {{"status", to_string(v.status)}, {"method", v.method}, {"params", to_json(v.params)},
            {"subsets_examined", v.subsets_examined}};
        if (v.witness)
            j["witness"] = {{"side", v.witness->side == 0 ? "X" : "Y"}, {"subset", v.witness->subset},
                {"offending", v.witness->offending}};
        else
            j["witness"] = nullptr;
        return j;
    }

    auto to_json(const DensityVerdict & v) -> Json
    {
        Json j = {{"status", to_string(v.status)}, {"pairs_checked", v.pairs_checked}, {"worst_deviation", v.worst_deviation}};
        if (v.violating_pair)
            j["violating_pair"] = {{"X", v.violating_pair->first}, {"Y", v.violating_pair->second}, {"edges", v.violating_edges}};
        else
            j["violating_pair"] = nullptr;
        return j;
    }

    auto to_json(const GadgetCertificate & c) -> Json
    {
        return {{"params_claimed", to_json(c.params_claimed)}, {"verification", to_json(c.verification)},
            {"attempts_used", c.attempts_used}, {"seed", seed_to_json(c.seed)}, {"accepted_seed", seed_to_json(c.accepted_seed)},
            {"source", to_string(c.source)}, {"valid", c.valid()}, {"paper_threshold", c.paper_threshold},
            {"paper_threshold_paper_formula", "(48/p) ln(a+b)"}, {"paper_threshold_vacuous", c.paper_threshold_vacuous}};
    }

    auto to_json(const SimDrcOutcome & o) -> Json
    {
        return {{"subsets", o.subsets}, {"picked", o.picked}, {"good_certified", o.good_certified}, {"bad_refuted", o.bad_refuted},
            {"bad_check", o.bad_check}, {"attempts_used", o.attempts_used}, {"feasible", o.feasible},
            {"feasible_paper_formula", "p^{h l}/2 > |Y|^r |X|^{-h/2}"}, {"min_common", o.min_common}};
    }

    auto to_json(const MatchingDecomposition & d) -> Json
    {
        Json m = Json::array();
        for (auto & matching : d.matchings) {
            Json a = Json::array();
            for (auto & e : matching)
                a.push_back({e.u, e.v});
            m.push_back(a);
        }
        return {{"matchings", m}, {"classes", d.matchings.size()}};
    }

    auto seed_to_json(std::uint64_t seed) -> Json
    {
        return std::to_string(seed);
    }
}
