#pragma once

#include <cstdint>
#include <vector>

namespace ids {

// splitmix64 finalizer. All seed derivation in the project goes through
// mix_seed so that parallel workers never share or reorder RNG draws.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (0x9E3779B97F4A7C15ull + splitmix64(b)));
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                 std::uint64_t d) {
    return mix_seed(mix_seed(a, b, c), d);
}

// Stream tags for deriving independent random streams from one master seed.
namespace seedstream {
inline constexpr std::uint64_t kSubsample = 1;
inline constexpr std::uint64_t kFoldClass = 2;
inline constexpr std::uint64_t kGaInit = 3;
inline constexpr std::uint64_t kGaFitnessFolds = 4;
inline constexpr std::uint64_t kGaBreed = 5;
inline constexpr std::uint64_t kTree = 6;
inline constexpr std::uint64_t kBag = 7;
inline constexpr std::uint64_t kStackFolds = 8;
inline constexpr std::uint64_t kStackBase = 9;
inline constexpr std::uint64_t kStackMeta = 10;
inline constexpr std::uint64_t kStackFinal = 11;
inline constexpr std::uint64_t kCvFit = 12;
inline constexpr std::uint64_t kDeriveSubsample = 13;
inline constexpr std::uint64_t kDeriveGa = 14;
inline constexpr std::uint64_t kDeriveCv = 15;
inline constexpr std::uint64_t kNestedGa = 16;
}  // namespace seedstream

// xoshiro256** generator. Self-contained so results are bitwise reproducible
// across platforms and standard libraries (std::shuffle and the std
// distributions are implementation-defined and must not be used where
// determinism matters).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm = splitmix64(sm);
            word = sm;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased uniform draw in [0, bound); bound must be >= 1.
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; no cached second value so the draw
    // count per call is fixed.
    double normal();

    // Fisher-Yates. Deterministic replacement for std::shuffle.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace ids
