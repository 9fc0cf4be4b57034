#ifndef MIXLAB_RNG_HPP
#define MIXLAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mixlab {

// Counter-based splittable generator (SplitMix64). Replica r of a run uses
// the stream (master_seed, r); streams are independent and a trajectory is
// reproducible from (master_seed, stream_id) alone, regardless of worker
// count or interleaving.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
        state_ = mix(master_seed ^ 0x5bd1e995u);
        state_ = mix(state_ + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform in [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // unbiased uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = next_u64(); } while (x >= limit);
        return x % n;
    }

    double exponential(double rate) {
        return -std::log1p(-next_double()) / rate;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

} // namespace mixlab

#endif
