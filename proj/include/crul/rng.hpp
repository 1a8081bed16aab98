#pragma once

#include <cstdint>

namespace crul {

// SplitMix64 finalizer: a bijective 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based random stream. The i-th draw is a pure function of
// (key, i), so a stream can be reconstructed at any position and two
// streams with distinct keys never share state.
class CounterStream {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    constexpr explicit CounterStream(std::uint64_t key, std::uint64_t counter = 0) noexcept
        : key_(key), counter_(counter) {}

    // Stream owned by chunk `chunk` of a run seeded with `seed`.
    static constexpr CounterStream for_chunk(std::uint64_t seed, std::uint64_t chunk) noexcept
    {
        return CounterStream(mix64(mix64(seed) ^ mix64(chunk + kGolden)));
    }

    constexpr std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGolden); }

    // Uniform on (0, 1], 53-bit resolution.
    constexpr double next_uniform() noexcept
    {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace crul
