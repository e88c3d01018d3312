#pragma once

#include <cstdint>

#include "pamap/rational.hpp"

namespace pamap {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Small deterministic generator. All randomized operations take an explicit
// 64-bit seed and become pure functions of it.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so nearby seeds diverge immediately
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0,1) with 53 random bits; identical across platforms
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // exact dyadic k/2^64, uniform on [0,1)
    Rational next_rational() {
        std::uint64_t k = next_u64();
        BigInt num;
        mpz_import(num.get_mpz_t(), 1, 1, sizeof(k), 0, 0, &k);
        BigInt den = 1;
        den <<= 64;
        return rat(num, den);
    }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

   private:
    std::uint64_t state_;
};

// Per-task seed derivation (seed XOR index, mixed) so batches parallelize
// deterministically.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ index;
    return splitmix64(s);
}

}  // namespace pamap
