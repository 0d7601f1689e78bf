#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace oksvm {

/// Random engine used everywhere in the library.
///
/// MT19937-64 with Boost.Random distributions: both the engine and the
/// distribution algorithms are fixed by Boost rather than by the standard
/// library vendor, so a given seed yields the same stream on every platform.
using Engine = boost::random::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a sequence of 64-bit words into one seed: h <- splitmix64(h ^ part).
constexpr std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto part : parts) h = splitmix64(h ^ part);
    return h;
}

/// Bit pattern of a double, for hashing real-valued grid coordinates.
inline std::uint64_t seed_bits(double value) noexcept {
    return std::bit_cast<std::uint64_t>(value == 0.0 ? 0.0 : value);
}

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

/// Fisher-Yates shuffle; std::shuffle is not portable across standard libraries.
template <class T>
void shuffle(std::span<T> items, Engine& engine) {
    for (std::size_t i = items.size(); i > 1; --i) {
        boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(items[i - 1], items[pick(engine)]);
    }
}

}  // namespace oksvm
