#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ffrsim::rng {

// SplitMix64 finalizer; used to derive well-mixed substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Order-sensitive fold of several words into one seed.
inline std::uint64_t mix(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
    for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
    return h;
}

// Stage tags keep the drop-generation, SIR, and classification-only
// substreams of one drop index independent of each other.
enum class Stage : std::uint64_t { geometry = 1, sir = 2, class_only = 3 };

inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index, Stage stage) {
    return std::mt19937_64(mix({master_seed, index, static_cast<std::uint64_t>(stage)}));
}

inline std::mt19937_64 make_stream(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

// Seed for one sweep grid point: hash(master_seed, axis index, overlay index).
inline std::uint64_t point_seed(std::uint64_t master_seed, std::uint64_t axis_index,
                                std::uint64_t overlay_index) {
    return mix({master_seed, axis_index, overlay_index});
}

// Unit-mean exponential draw (Rayleigh channel power gain).
inline double exponential_gain(std::mt19937_64& gen) {
    return std::exponential_distribution<double>(1.0)(gen);
}

}  // namespace ffrsim::rng
