#pragma once

#include <cstdint>
#include <random>

namespace mzlaw {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Full avalanche on 64 bits.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of replication `index` under `master_seed`. Two rounds of SplitMix64
/// so that neighbouring (master, index) pairs land far apart.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                                  std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ (index * 0xD1B54A32D192ED03ULL));
}

/// Stream of uniforms on the open interval (0,1).
///
/// Backed by std::mt19937_64 seeded with a single 64-bit word. Each draw
/// takes the top 53 bits b of one engine output and returns (b + 0.5) / 2^53,
/// so 0 and 1 are never produced and every value is exactly representable.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double next() noexcept {
        constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
        return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace mzlaw
