#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "ids/rng.hpp"

using ids::mix_seed;
using ids::Rng;
using ids::splitmix64;

namespace {

// Reference implementations transcribed independently from the published
// algorithm definitions, used as cross-checks against the library's copies.
struct RefSplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

struct RefXoshiro {
    std::array<std::uint64_t, 4> s;
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

}  // namespace

TEST_CASE("splitmix64 matches the reference generator step") {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 1234567ull, 0xDEADBEEFull,
                               0xFFFFFFFFFFFFFFFFull}) {
        RefSplitMix ref{seed};
        CHECK(splitmix64(seed) == ref.next());
    }
}

TEST_CASE("xoshiro output matches an independent transcription") {
    const std::uint64_t seed = 987654321;
    // Library seeding: each state word is the splitmix64 finalizer applied to
    // the previous word, starting from the seed.
    std::array<std::uint64_t, 4> words{};
    RefSplitMix sm{seed};
    for (auto& word : words) {
        word = sm.next();
        sm.state = word;
    }
    RefXoshiro ref{words};
    Rng rng(seed);
    for (int i = 0; i < 200; ++i) CHECK(rng.next_u64() == ref.next());
}

TEST_CASE("same seed gives the same stream, different seeds differ") {
    Rng a(7), b(7), c(8);
    bool any_difference = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) any_difference = true;
    }
    CHECK(any_difference);
}

TEST_CASE("mix_seed separates streams and is order sensitive") {
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(0, 0) != 0);
    CHECK(mix_seed(1, 2, 3) == mix_seed(mix_seed(1, 2), 3));
    CHECK(mix_seed(1, 2, 3, 4) == mix_seed(mix_seed(1, 2, 3), 4));

    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 32; ++a) {
        for (std::uint64_t b = 0; b < 32; ++b) seen.insert(mix_seed(a, b));
    }
    CHECK(seen.size() == 32u * 32u);
}

TEST_CASE("below is in range and unbiased") {
    Rng rng(11);
    SUBCASE("bound one always yields zero") {
        for (int i = 0; i < 20; ++i) CHECK(rng.below(1) == 0);
    }
    SUBCASE("all residues reachable and near-uniform") {
        const std::uint64_t bound = 10;
        const int draws = 100000;
        std::vector<int> hist(bound, 0);
        for (int i = 0; i < draws; ++i) {
            const std::uint64_t v = rng.below(bound);
            REQUIRE(v < bound);
            ++hist[v];
        }
        for (std::uint64_t v = 0; v < bound; ++v) {
            CHECK(hist[v] > 10000 - 500);
            CHECK(hist[v] < 10000 + 500);
        }
    }
    SUBCASE("non power of two bound") {
        const int draws = 30000;
        std::vector<int> hist(3, 0);
        for (int i = 0; i < draws; ++i) ++hist[rng.below(3)];
        for (int v = 0; v < 3; ++v) {
            CHECK(hist[v] > 10000 - 400);
            CHECK(hist[v] < 10000 + 400);
        }
    }
}

TEST_CASE("uniform lies in the half-open unit interval with mean one half") {
    Rng rng(33);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("bernoulli hits its probability") {
    Rng rng(44);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
    CHECK(static_cast<double>(hits) / n == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("normal has standard moments") {
    Rng rng(55);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        REQUIRE(std::isfinite(x));
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("shuffle permutes and is uniform over small arrays") {
    SUBCASE("multiset preserved") {
        Rng rng(66);
        std::vector<int> v(50);
        std::iota(v.begin(), v.end(), 0);
        auto shuffled = v;
        rng.shuffle(shuffled);
        auto sorted = shuffled;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == v);
        CHECK(shuffled != v);  // astronomically unlikely to be identity
    }
    SUBCASE("deterministic under the seed") {
        std::vector<int> a{1, 2, 3, 4, 5, 6, 7}, b = a;
        Rng r1(9), r2(9);
        r1.shuffle(a);
        r2.shuffle(b);
        CHECK(a == b);
    }
    SUBCASE("all six permutations of three elements near-equally likely") {
        Rng rng(77);
        std::map<std::vector<int>, int> hist;
        const int draws = 60000;
        for (int i = 0; i < draws; ++i) {
            std::vector<int> v{0, 1, 2};
            rng.shuffle(v);
            ++hist[v];
        }
        CHECK(hist.size() == 6);
        for (const auto& [perm, count] : hist) {
            CHECK(count > 10000 - 500);
            CHECK(count < 10000 + 500);
        }
    }
}
