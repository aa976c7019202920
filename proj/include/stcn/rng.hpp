#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace stcn {

// splitmix64 step; used both as a stream mixer and to derive independent
// sub-seeds from (seed, label) pairs so benchmark cells do not share streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, const std::string& label) {
    std::uint64_t h = splitmix64(seed);
    for (unsigned char c : label) h = splitmix64(h ^ c);
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, const std::string& label, std::uint64_t n) {
    return splitmix64(mix_seed(seed, label) ^ n);
}

// Deterministic RNG wrapper. All randomness in the library flows through this
// class; the uniform mapping is fixed explicitly (not distribution-object
// dependent) so results are reproducible across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform double in [0,1) with 53 random bits
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return x % n;
    }

    std::uint64_t raw() { return engine_(); }

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace stcn
