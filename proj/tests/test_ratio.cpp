#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <indram/errors.hpp>
#include <indram/ratio.hpp>
#include <indram/rng.hpp>
#include <indram/tower_number.hpp>

#include <cmath>

using namespace indram;

TEST_CASE("ratio parsing")
{
    CHECK(Ratio::parse("4/5") == Ratio(4, 5));
    CHECK(Ratio::parse("0.8") == Ratio(4, 5));
    CHECK(Ratio::parse("1e-2") == Ratio(1, 100));
    CHECK(Ratio::parse("2.5e1") == Ratio(25));
    CHECK(Ratio::parse("-2") == Ratio(-2));
    CHECK(Ratio::parse("6/8") == Ratio(3, 4));
    CHECK_THROWS_AS((void) Ratio::parse("1/0"), InvalidInput);
    CHECK_THROWS_AS((void) Ratio::parse("abc"), InvalidInput);
    CHECK(Ratio::from_double(0.8) == Ratio(4, 5));
}

TEST_CASE("ratio arithmetic and rounding")
{
    Ratio a(1, 3), b(1, 6);
    CHECK(a + b == Ratio(1, 2));
    CHECK(a - b == Ratio(1, 6));
    CHECK(a * b == Ratio(1, 18));
    CHECK(a / b == Ratio(2));
    CHECK(a > b);
    CHECK(Ratio(7, 2).ceil() == 4);
    CHECK(Ratio(7, 2).floor() == 3);
    CHECK(Ratio(-7, 2).ceil() == -3);
    CHECK(Ratio(-7, 2).floor() == -4);
    CHECK(Ratio(4).ceil() == 4);
    CHECK(times_lt(3, Ratio(1, 3), 2));
    CHECK(! times_lt(6, Ratio(1, 3), 2));
}

TEST_CASE("ratio arithmetic matches big rationals (property)")
{
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        Ratio a(static_cast<std::int64_t>(rng.below(2001)) - 1000, 1 + static_cast<std::int64_t>(rng.below(999)));
        Ratio b(static_cast<std::int64_t>(rng.below(2001)) - 1000, 1 + static_cast<std::int64_t>(rng.below(999)));
        CHECK((a + b).to_big() == a.to_big() + b.to_big());
        CHECK((a * b).to_big() == a.to_big() * b.to_big());
        CHECK(((a < b) == (a.to_big() < b.to_big())));
    }
}

TEST_CASE("derived seeds are deterministic and distinct")
{
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    Rng a(9), b(9);
    for (int i = 0; i < 10; ++i)
        CHECK(a.below(17) == b.below(17));
}

TEST_CASE("bernoulli frequency")
{
    Rng rng(5);
    int hits = 0;
    for (int i = 0; i < 100'000; ++i)
        hits += rng.bernoulli(Ratio(3, 10));
    CHECK(std::abs(hits / 100'000.0 - 0.3) < 0.006);
    CHECK(! Rng(1).bernoulli(Ratio(0)));
    CHECK(Rng(1).bernoulli(Ratio(1)));
}

TEST_CASE("tower numbers")
{
    TowerNumber small(39);
    CHECK(small.level() == 0);
    CHECK(small.to_double() == doctest::Approx(39));
    auto big = small.exp2().exp2();
    CHECK(std::isinf(big.to_double()));
    CHECK(big.log2().log2().to_double() == doctest::Approx(39));
    CHECK(small.less_than(big));
    CHECK(TowerNumber(3).plus(TowerNumber(4)).to_double() == doctest::Approx(7));
    CHECK(TowerNumber(3).times(2).to_double() == doctest::Approx(6));
    CHECK(TowerNumber(1, 2000).plus(TowerNumber(5)).log2().to_double() == doctest::Approx(2000));
}
