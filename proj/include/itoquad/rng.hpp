#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>

namespace itoquad {

/// Independent random channels carried by one replicate.
enum class stream_tag : std::uint32_t {
    wiener = 1,
    wiener2 = 2,
    poisson = 3,
    bootstrap = 4,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the stream identified by (seed, replicate, tag). Each component is
/// folded in through its own mixing round so nearby keys decorrelate.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t replicate, std::uint32_t tag) noexcept {
    std::uint64_t s = mix64(seed);
    s = mix64(s ^ mix64(replicate + 0x632be59bd9b4e019ULL));
    s = mix64(s ^ (static_cast<std::uint64_t>(tag) * 0xd6e8feb86659fd93ULL));
    return s;
}

constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t replicate, stream_tag tag) noexcept {
    return derive_stream(seed, replicate, static_cast<std::uint32_t>(tag));
}

using engine = boost::random::mt19937_64;

inline engine make_engine(std::uint64_t seed, std::uint64_t replicate, stream_tag tag) {
    return engine(derive_stream(seed, replicate, tag));
}

}  // namespace itoquad
