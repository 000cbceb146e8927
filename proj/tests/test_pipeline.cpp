#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <indram/errors.hpp>
#include <indram/pipeline.hpp>

#include <fstream>

using namespace indram;

namespace
{
    auto base_config(const Graph & pattern) -> Json
    {
        return {{"pattern", to_json(pattern)}, {"q", 2}, {"s", 16}, {"trials", 4}, {"seed", "3"}, {"host", {{"max_vertices", 5}}}};
    }

    auto check_trials(const PipelineResult & r) -> void
    {
        for (auto & t : r.trials) {
            if (t.success)
                CHECK(t.verified);
            CHECK(t.certificate_failures == 0);
            CHECK(t.violations.empty());
        }
        CHECK(r.violations == 0);
    }
}

TEST_CASE("config parsing")
{
    auto c = pipeline_config_from_json(base_config(path_graph(3)));
    CHECK(c.pattern == path_graph(3));
    CHECK(c.seed == 3);
    CHECK(c.s == 16);

    auto j = base_config(path_graph(3));
    j["bogus"] = 1;
    try {
        (void) pipeline_config_from_json(j);
        FAIL("expected InvalidInput");
    }
    catch (const InvalidInput & e) {
        CHECK(std::string(e.what()).find("/bogus") != std::string::npos);
    }
    auto k = base_config(path_graph(3));
    k["gadget"] = {{"mode", "sideways"}};
    CHECK_THROWS_AS((void) pipeline_config_from_json(k), InvalidInput);
    auto l = base_config(path_graph(3));
    l["adversaries"] = {"uniform-random", "nope"};
    CHECK_THROWS_AS((void) pipeline_config_from_json(l), InvalidInput);
    auto m = base_config(path_graph(3));
    m["pattern"]["edges"] = {{0, 9}};
    CHECK_THROWS_AS((void) pipeline_config_from_json(m), InvalidInput);
}

TEST_CASE("single edge with a complete gadget succeeds every trial")
{
    auto j = base_config(complete_graph(2));
    j["gadget"] = {{"kind", "complete"}};
    j["trials"] = 6;
    j["adversaries"] = {"uniform-random", "part-index-parity", "half-split-within-block"};
    auto r = run_pipeline(pipeline_config_from_json(j));
    REQUIRE(r.trials.size() == 6);
    for (auto & t : r.trials) {
        CHECK(t.success);
        CHECK(t.verified);
    }
    check_trials(r);
    CHECK(r.summary["successes"] == 6);
}

TEST_CASE("P3 over a searched host: every success verified")
{
    auto j = base_config(path_graph(3));
    j["trials"] = 30;
    j["s"] = 32;
    auto r = reduction_general(pipeline_config_from_json(j));
    check_trials(r);
    CHECK(r.summary["base"] == to_json(r.base));
    CHECK(arrows({r.base, path_graph(3), 2, CopyMode::subgraph}).arrows);
    CHECK(verify_blowup(r.blowup, 32).ok);
}

TEST_CASE("paper constants are echoed")
{
    auto r = run_pipeline(pipeline_config_from_json(base_config(path_graph(3))));
    auto & paper = r.summary["paper"];
    CHECK(paper["rho"] == "1/800");
    CHECK(paper["rho_paper_formula"] == "p/4q");
    // eta = (rho/2)^k (1-2p)^Delta / (Delta + k) with k = 1 and Delta(G) of the searched host.
    CHECK(paper.contains("eta"));
    CHECK(paper["eta_paper_formula"] == "(rho/2)^k (1-2p)^Delta / (Delta+k)");
    auto & acc = r.summary["accounting"];
    CHECK(acc["host_vertices"] == r.blowup.host.size());
    CHECK(acc["host_edges"] == r.blowup.host.edge_count());
    CHECK(acc["within_vertex_bound"] == true);
    CHECK(acc["within_edge_bound"] == true);
}

TEST_CASE("deterministic across job counts")
{
    auto j = base_config(path_graph(3));
    j["trials"] = 6;
    auto one = pipeline_config_from_json(j);
    auto two = one;
    two.jobs = 3;
    auto a = run_pipeline(one), b = run_pipeline(two);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i)
        CHECK(canonical_dump(to_json(a.trials[i], false)) == canonical_dump(to_json(b.trials[i], false)));
    CHECK(canonical_dump(a.summary) == canonical_dump(b.summary));
}

TEST_CASE("bipartite reduction embeds a 2-blowup of an edge")
{
    Json j = {{"pattern", to_json(complete_graph(2))}, {"w", 2}, {"q", 2}, {"s", 12}, {"s0", 12}, {"trials", 6}, {"seed", "1"},
        {"gadget", {{"kind", "complete"}, {"L", "2"}, {"mode", "lower"}}}, {"host", {{"graph", to_json(complete_graph(2))}}},
        {"adversaries", {"uniform-random", "per-base-edge-majority"}}};
    auto r = reduction_bipartite(pipeline_config_from_json(j));
    check_trials(r);
    int successes = 0;
    for (auto & t : r.trials)
        successes += t.success;
    CHECK(successes > 0);
    auto & paper = r.summary["paper"];
    CHECK(paper["log2_s0_paper_formula"] == "log2(s^{1/3})");
    CHECK(paper["log2_L_bound_paper_formula"] == "log2(s^{1/9})");
    CHECK(paper["p_paper_formula"] == "1/(4 Delta)");
}

TEST_CASE("declared host that does not arrow is rejected")
{
    auto j = base_config(path_graph(3));
    j["host"] = {{"graph", to_json(path_graph(3))}};
    CHECK_THROWS_AS((void) run_pipeline(pipeline_config_from_json(j)), PreconditionFailed);
    j["host"]["trusted"] = true;
    auto r = run_pipeline(pipeline_config_from_json(j));
    CHECK(r.violations == 0);
}

TEST_CASE("starved sizes flag feasibility and still record outcomes")
{
    auto j = base_config(path_graph(3));
    j["s"] = 4;
    j["trials"] = 3;
    auto r = run_pipeline(pipeline_config_from_json(j));
    for (auto & t : r.trials)
        CHECK(! t.feasible);
    check_trials(r);
}

TEST_CASE("finale decides the induced arrow on a micro blowup")
{
    Json j = {{"pattern", to_json(path_graph(3))}, {"q", 2}, {"s", 2}, {"trials", 2}, {"seed", "2"}, {"finale", true},
        {"gadget", {{"kind", "complete"}}}, {"host", {{"graph", to_json(complete_graph(3))}, {"trusted", true}}}};
    auto r = run_pipeline(pipeline_config_from_json(j));
    auto & fin = r.summary["finale"];
    REQUIRE(fin.is_object());
    CHECK(fin["status"] == "decided");
    CHECK(fin.contains("arrows_induced"));
}

TEST_CASE("shipped schema lists exactly the accepted keys")
{
    std::ifstream in(std::string(INDRAM_SCHEMA_DIR) + "/pipeline-config.schema.json");
    REQUIRE(in);
    auto schema = Json::parse(in);
    auto check = [](const Json & props, auto make) {
        for (auto & [key, value] : props.items()) {
            auto j = make(key);
            try {
                (void) pipeline_config_from_json(j);
            }
            catch (const std::exception & e) {
                CHECK_MESSAGE(std::string(e.what()).find("unknown field") == std::string::npos, key);
            }
        }
    };
    check(schema["properties"], [](const std::string & key) {
        auto j = base_config(path_graph(3));
        if (! j.contains(key))
            j[key] = nullptr;
        return j;
    });
    check(schema["properties"]["gadget"]["properties"], [](const std::string & key) {
        auto j = base_config(path_graph(3));
        j["gadget"] = {{key, nullptr}};
        return j;
    });
    check(schema["properties"]["host"]["properties"], [](const std::string & key) {
        auto j = base_config(path_graph(3));
        j["host"] = {{key, nullptr}};
        return j;
    });
    CHECK(schema["additionalProperties"] == false);
}
