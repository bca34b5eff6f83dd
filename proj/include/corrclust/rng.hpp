#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "corrclust/error.hpp"

namespace corrclust {

// All randomness flows through this wrapper so every sampled artifact is a
// pure function of (seed, stream). The engine is std::mt19937_64, whose
// output sequence is fixed by the standard; the value transforms below are
// spelled out here instead of using std::*_distribution, whose results are
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(mix(seed, stream)) {}

    // stable sub-seed for handing independent streams to seeded functions
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return mix(seed, stream);
    }

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0,1) with 53-bit resolution
    double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

    // Box-Muller, cosine branch; consumes exactly two engine values
    double normal(double mean = 0.0, double sigma = 1.0) {
        const double u1 = double((engine_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
        const double u2 = double(engine_() >> 11) * 0x1.0p-53;        // [0,1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * radius * std::cos(2.0 * std::numbers::pi * u2);
    }

    // unbiased uniform integer in [0, bound)
    std::uint64_t below(std::uint64_t bound) {
        require(bound >= 1, errc::invalid_argument, "bound must be positive");
        unsigned __int128 product = (unsigned __int128)engine_() * bound;
        auto low = std::uint64_t(product);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                product = (unsigned __int128)engine_() * bound;
                low = std::uint64_t(product);
            }
        }
        return std::uint64_t(product >> 64);
    }

    // k distinct values from [0,n), uniform over k-subsets (Floyd)
    std::vector<std::size_t> sample_distinct(std::size_t k, std::size_t n) {
        require(k <= n, errc::invalid_argument, "cannot sample more values than available");
        std::vector<std::size_t> chosen;
        chosen.reserve(k);
        for (std::size_t i = n - k; i < n; ++i) {
            std::size_t candidate = std::size_t(below(i + 1));
            bool taken = false;
            for (std::size_t c : chosen)
                if (c == candidate) {
                    taken = true;
                    break;
                }
            chosen.push_back(taken ? i : candidate);
        }
        return chosen;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        return splitmix64(splitmix64(seed) ^ (stream * 0x9E3779B97F4A7C15ULL + 1));
    }

    std::mt19937_64 engine_;
};

}  // namespace corrclust
