#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <indram/errors.hpp>
#include <indram/gadgets.hpp>
#include <indram/regularity.hpp>
#include <indram/rng.hpp>

using namespace indram;

namespace
{
    auto block_from_bits(int a, int b, std::uint64_t bits) -> Biadjacency
    {
        Biadjacency m(a, b);
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j)
                if ((bits >> (i * b + j)) & 1)
                    m.set(i, j);
        return m;
    }

    // Oracle straight from the definition, in big rationals.
    auto side_regular(const Biadjacency & m, const RegularityParams & params) -> bool
    {
        BigRational L = params.L.to_big(), p = params.p.to_big();
        for (std::uint32_t mask = 1; mask < (1u << m.rows); ++mask) {
            int size = __builtin_popcount(mask);
            if (BigRational(size) < L)
                continue;
            int bad = 0;
            for (int j = 0; j < m.cols; ++j) {
                int d = 0;
                for (int i = 0; i < m.rows; ++i)
                    d += ((mask >> i) & 1) && m.test(i, j);
                bool low = BigRational(d) < p * size / 2;
                bool high = params.mode == RegularityMode::two_sided && BigRational(d) > 2 * p * size;
                bad += low || high;
            }
            if (BigRational(bad) > L)
                return false;
        }
        return true;
    }

    auto oracle_regular(const Biadjacency & m, const RegularityParams & params) -> bool
    {
        return side_regular(m, params) && side_regular(m.transpose(), params);
    }

    auto star_block() -> Biadjacency
    {
        Biadjacency m(4, 4);
        for (int i = 0; i < 4; ++i)
            m.set(i, 0);
        return m;
    }
}

TEST_CASE("block density")
{
    CHECK(block_density(Biadjacency(2, 2, true)) == Ratio(1));
    CHECK(block_density(Biadjacency(3, 3)) == Ratio(0));
    Biadjacency m(3, 3);
    m.set(0, 0);
    m.set(0, 1);
    m.set(1, 1);
    m.set(2, 2);
    CHECK(block_density(m) == Ratio(4, 9));
    CHECK_THROWS_AS((void) block_density(Biadjacency(0, 3)), InvalidInput);
}

TEST_CASE("exact checker examples")
{
    RegularityParams params{Ratio(1), Ratio(1, 2), RegularityMode::two_sided};
    auto full = check_regularity_exact(Biadjacency(4, 4, true), params);
    CHECK(full.status == VerdictStatus::certified);

    auto vac = check_regularity_exact(Biadjacency(3, 3), RegularityParams{Ratio(4), Ratio(1, 2), RegularityMode::two_sided});
    CHECK(vac.status == VerdictStatus::certified);

    auto star = check_regularity_exact(star_block(), params);
    REQUIRE(star.status == VerdictStatus::refuted);
    REQUIRE(star.witness);
    CHECK(witness_is_valid(star_block(), params, *star.witness));

    CHECK_THROWS_AS((void) check_regularity_exact(sample_bipartite_block(exhaustive_cap + 1, 2, Ratio(1, 2), 1), params), BudgetExceeded);
}

TEST_CASE("star refutation witness with X' = X")
{
    // Definition check for the witness named in the examples: X' = X leaves y1,y2,y3 with degree 0 < 1.
    RegularityParams params{Ratio(1), Ratio(1, 2), RegularityMode::two_sided};
    RegularityWitness w{0, {0, 1, 2, 3}, {1, 2, 3}};
    CHECK(witness_is_valid(star_block(), params, w));
    RegularityWitness wrong{0, {0, 1, 2, 3}, {1, 2}};
    CHECK(! witness_is_valid(star_block(), params, wrong));
}

TEST_CASE("sampled refuter examples")
{
    RegularityParams params{Ratio(1), Ratio(1, 2), RegularityMode::two_sided};
    auto w = refute_regularity_sampled(star_block(), params, 100, 1);
    REQUIRE(w);
    CHECK(witness_is_valid(star_block(), params, *w));
    CHECK(! refute_regularity_sampled(Biadjacency(4, 4, true), params, 1000, 2));
    CHECK(! refute_regularity_sampled(Biadjacency(3, 3), RegularityParams{Ratio(5), Ratio(1, 2), RegularityMode::two_sided}, 1000, 3));
}

TEST_CASE("boundary degrees are inside the window")
{
    RegularityParams params{Ratio(1), Ratio(1, 2), RegularityMode::two_sided};
    for (int m = 1; m <= 12; ++m) {
        CHECK(! is_bad_degree(m, m, params));
        // d = p m / 2 exactly is not low.
        if (m % 4 == 0)
            CHECK(! is_bad_degree(m / 4, m, params));
    }
    RegularityParams third{Ratio(1), Ratio(1, 3), RegularityMode::two_sided};
    CHECK(! is_bad_degree(2, 3, third));
    CHECK(is_bad_degree(3, 4, third));
    CHECK(! is_bad_degree(1, 6, third));
    CHECK(is_bad_degree(0, 6, third));
    RegularityParams lower{Ratio(1), Ratio(1, 3), RegularityMode::lower_only};
    CHECK(! is_bad_degree(4, 4, lower));
}

TEST_CASE("exact checker agrees with the definition on all 3x3 blocks and random 4x5 blocks")
{
    std::vector<RegularityParams> grid{{Ratio(1), Ratio(1, 2), RegularityMode::two_sided}, {Ratio(2), Ratio(1, 3), RegularityMode::two_sided},
        {Ratio(3, 2), Ratio(2, 5), RegularityMode::lower_only}, {Ratio(1), Ratio(1, 4), RegularityMode::lower_only}};
    for (std::uint64_t bits = 0; bits < (1u << 9); ++bits) {
        auto m = block_from_bits(3, 3, bits);
        for (auto & params : grid) {
            auto v = check_regularity_exact(m, params);
            CHECK((v.status == VerdictStatus::certified) == oracle_regular(m, params));
            if (v.witness)
                CHECK(witness_is_valid(m, params, *v.witness));
        }
    }
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto m = sample_bipartite_block(4, 5, Ratio(1, 2), seed);
        for (auto & params : grid)
            CHECK((check_regularity_exact(m, params).status == VerdictStatus::certified) == oracle_regular(m, params));
    }
}

TEST_CASE("certify_block routes by size")
{
    RegularityParams params{Ratio(3), Ratio(1, 2), RegularityMode::two_sided};
    auto small = certify_block(sample_bipartite_block(6, 6, Ratio(1, 2), 4), params, 100, 1);
    CHECK(small.method == "exact");
    auto big = certify_block(Biadjacency(30, 30, true), RegularityParams{Ratio(3), Ratio(1, 2), RegularityMode::two_sided}, 100, 1);
    CHECK(big.status == VerdictStatus::certified);
    auto sampled = certify_block(sample_bipartite_block(30, 30, Ratio(1, 2), 5), params, 200, 1);
    CHECK(sampled.method == "sampled");
    CHECK(sampled.status != VerdictStatus::certified);
}

TEST_CASE("density condition")
{
    auto k = check_density_condition(complete_graph(6), 2, Ratio(1), Ratio(1, 3));
    CHECK(k.status == VerdictStatus::certified);
    auto e = check_density_condition(Graph(6), 2, Ratio(1, 2), Ratio(1, 2));
    CHECK(e.status == VerdictStatus::refuted);
    REQUIRE(e.violating_pair);
    CHECK(e.violating_edges == 0);

    // Oracle: recount the edge totals of every pair of disjoint 3-sets.
    auto g = sample_gnp(10, Ratio(1, 2), 7);
    auto v = check_density_condition(g, 3, Ratio(1, 2), Ratio(9, 10));
    bool ok = true;
    for (std::uint32_t a = 0; a < 1024; ++a) {
        if (__builtin_popcount(a) != 3)
            continue;
        for (std::uint32_t b = 0; b < 1024; ++b) {
            if (__builtin_popcount(b) != 3 || (a & b))
                continue;
            int edges = 0;
            for (int x = 0; x < 10; ++x)
                for (int y = 0; y < 10; ++y)
                    edges += ((a >> x) & 1) && ((b >> y) & 1) && g.adjacent(x, y);
            BigRational dev = BigRational(edges) - BigRational(9, 2);
            if (dev < 0)
                dev = -dev;
            ok = ok && dev <= BigRational(9, 10) * BigRational(9, 2);
        }
    }
    CHECK((v.status == VerdictStatus::certified) == ok);
}
