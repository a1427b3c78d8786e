#pragma once

#include <cstdint>
#include <vector>

namespace mobrisk::rng {

// SplitMix64 finalizer. Bijective on 64-bit words, good avalanche; used both
// as the step function of the sequential stream and as the mixing primitive
// of the keyed (counter-based) draws below.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stateless draw addressed by a key tuple. Every consumer derives its random
// numbers from (seed, domain tag, indices...), so results do not depend on
// evaluation order and replications can run in parallel without shared state.
inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                               std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ tag);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit_double(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

inline double keyed_unit(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                         std::uint64_t b = 0, std::uint64_t c = 0) {
    return to_unit_double(keyed_u64(seed, tag, a, b, c));
}

// Sequential stream for places that want a plain generator (dataset
// synthesis, permutations). Not std::mt19937: distribution code in libstdc++
// is implementation-defined, and output here must be identical everywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased uniform in [0, n) via rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    double unit() { return to_unit_double(next()); }

private:
    std::uint64_t state_;
};

// In-place Fisher-Yates shuffle with platform-independent draws.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& gen) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(gen.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace mobrisk::rng
