#pragma once

#include <cstdint>
#include <cmath>

namespace loewner {

// SplitMix64 finalizer.  Used both as a seed hash and as the mixing
// function of the counter-based generator below.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent stream seed from (master_seed, index).  Every
// Monte-Carlo sample uses derive_seed(master, sample_index) so that
// workers need no coordination and results are independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 0x6a09e667f3bcc909ULL));
}

// Counter-based generator: output k is a pure function of (key, k).
// Statistically this is the SplitMix64 sequence with a hashed key,
// which is more than adequate for Monte-Carlo sampling and makes the
// whole stream reproducible from a single 64-bit seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0)
        : key_(mix64(key ^ mix64(stream + 0xbb67ae8584caa73bULL))), ctr_(0) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++ctr_); }

    // Uniform on (0,1), never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second deviate is cached.
    double normal() {
        if (has_cache_) {
            has_cache_ = false;
            return cache_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925286766559 * u2;
        cache_ = rad * std::sin(ang);
        has_cache_ = true;
        return rad * std::cos(ang);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
    double cache_ = 0.0;
    bool has_cache_ = false;
};

} // namespace loewner
