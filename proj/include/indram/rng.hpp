#pragma once

#include <indram/ratio.hpp>

#include <cstdint>
#include <random>

namespace indram
{
    /// SplitMix64 finalizer; used to derive child seeds from a root seed.
    [[nodiscard]] constexpr auto mix_seed(std::uint64_t x) -> std::uint64_t
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Child seed number `index` of `root`. Attempt k of any randomized procedure uses derive_seed(seed, k).
    [[nodiscard]] constexpr auto derive_seed(std::uint64_t root, std::uint64_t index) -> std::uint64_t
    {
        return mix_seed(root ^ mix_seed(index + 0x632be59bd9b4e019ULL));
    }

    /// Seeded generator with distribution helpers whose output is fixed by the standard
    /// (mt19937_64 plus our own rejection sampling), so results do not depend on the library vendor.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : _engine(seed) {}

        auto next() -> std::uint64_t { return _engine(); }

        /// Uniform in [0, n). n must be positive.
        auto below(std::uint64_t n) -> std::uint64_t
        {
            if (n <= 1)
                return 0;
            std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
            while (true) {
                auto v = _engine();
                if (v < limit)
                    return v % n;
            }
        }

        /// True with probability exactly r (0 <= r <= 1).
        auto bernoulli(const Ratio & r) -> bool
        {
            if (r.num() <= 0)
                return false;
            if (r.num() >= r.den())
                return true;
            return below(static_cast<std::uint64_t>(r.den())) < static_cast<std::uint64_t>(r.num());
        }

        template <typename Container>
        auto shuffle(Container & c) -> void
        {
            for (std::size_t i = c.size(); i > 1; --i) {
                auto j = static_cast<std::size_t>(below(i));
                std::swap(c[i - 1], c[j]);
            }
        }

    private:
        std::mt19937_64 _engine;
    };
}
