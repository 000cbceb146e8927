#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace indram
{
    /// Fixed-universe bitset over 0..size-1, one bit per vertex.
    class VertexSet
    {
    public:
        using Word = std::uint64_t;
        static constexpr int bits_per_word = 64;

        VertexSet() = default;
        explicit VertexSet(int size, bool full = false) :
            _size(size),
            _words((size + bits_per_word - 1) / bits_per_word, full ? ~Word{0} : Word{0})
        {
            if (full)
                trim();
        }

        [[nodiscard]] auto universe() const -> int { return _size; }
        [[nodiscard]] auto words() const -> const std::vector<Word> & { return _words; }
        [[nodiscard]] auto words() -> std::vector<Word> & { return _words; }

        auto set(int v) -> void { _words[v / bits_per_word] |= Word{1} << (v % bits_per_word); }
        auto reset(int v) -> void { _words[v / bits_per_word] &= ~(Word{1} << (v % bits_per_word)); }
        auto flip(int v) -> void { _words[v / bits_per_word] ^= Word{1} << (v % bits_per_word); }
        [[nodiscard]] auto test(int v) const -> bool { return (_words[v / bits_per_word] >> (v % bits_per_word)) & 1U; }

        auto clear() -> void
        {
            for (auto & w : _words)
                w = 0;
        }

        [[nodiscard]] auto count() const -> int
        {
            int c = 0;
            for (auto w : _words)
                c += std::popcount(w);
            return c;
        }

        [[nodiscard]] auto empty() const -> bool
        {
            for (auto w : _words)
                if (w)
                    return false;
            return true;
        }

        /// Lowest member, or -1.
        [[nodiscard]] auto first() const -> int { return next(0); }

        /// Lowest member >= from, or -1.
        [[nodiscard]] auto next(int from) const -> int
        {
            if (from >= _size)
                return -1;
            auto wi = static_cast<std::size_t>(from / bits_per_word);
            Word w = _words[wi] & (~Word{0} << (from % bits_per_word));
            while (true) {
                if (w)
                    return static_cast<int>(wi) * bits_per_word + std::countr_zero(w);
                if (++wi == _words.size())
                    return -1;
                w = _words[wi];
            }
        }

        template <typename F>
        auto for_each(F && f) const -> void
        {
            for (std::size_t wi = 0; wi < _words.size(); ++wi) {
                Word w = _words[wi];
                while (w) {
                    f(static_cast<int>(wi) * bits_per_word + std::countr_zero(w));
                    w &= w - 1;
                }
            }
        }

        [[nodiscard]] auto to_vector() const -> std::vector<int>
        {
            std::vector<int> out;
            out.reserve(static_cast<std::size_t>(count()));
            for_each([&](int v) { out.push_back(v); });
            return out;
        }

        auto operator&=(const VertexSet & o) -> VertexSet &
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                _words[i] &= o._words[i];
            return *this;
        }

        auto operator|=(const VertexSet & o) -> VertexSet &
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                _words[i] |= o._words[i];
            return *this;
        }

        /// Set difference in place.
        auto subtract(const VertexSet & o) -> VertexSet &
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                _words[i] &= ~o._words[i];
            return *this;
        }

        [[nodiscard]] auto intersection_count(const VertexSet & o) const -> int
        {
            int c = 0;
            for (std::size_t i = 0; i < _words.size(); ++i)
                c += std::popcount(_words[i] & o._words[i]);
            return c;
        }

        [[nodiscard]] auto intersects(const VertexSet & o) const -> bool
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                if (_words[i] & o._words[i])
                    return true;
            return false;
        }

        [[nodiscard]] auto is_subset_of(const VertexSet & o) const -> bool
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                if (_words[i] & ~o._words[i])
                    return false;
            return true;
        }

        friend auto operator&(VertexSet a, const VertexSet & b) -> VertexSet { return a &= b; }
        friend auto operator|(VertexSet a, const VertexSet & b) -> VertexSet { return a |= b; }
        friend auto operator==(const VertexSet &, const VertexSet &) -> bool = default;

        static auto from_members(int size, const std::vector<int> & members) -> VertexSet
        {
            VertexSet s(size);
            for (int v : members)
                s.set(v);
            return s;
        }

    private:
        auto trim() -> void
        {
            if (_size % bits_per_word && ! _words.empty())
                _words.back() &= (Word{1} << (_size % bits_per_word)) - 1;
        }

        int _size = 0;
        std::vector<Word> _words;
    };
}
