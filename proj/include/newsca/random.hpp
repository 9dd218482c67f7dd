#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace newsca {

// Recorded in every manifest so runs can be reproduced elsewhere.
inline constexpr std::string_view kRngId = "mt19937_64;u01=(x>>11)*2^-53;run_seed=splitmix64";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of ensemble member `run_index`.
inline constexpr std::uint64_t derive_run_seed(std::uint64_t base_seed,
                                               std::uint64_t run_index) noexcept {
    return splitmix64(splitmix64(base_seed) + run_index);
}

// mt19937_64 is bit-specified by the standard; the uniform mapping is done
// by hand because std::uniform_real_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace newsca
