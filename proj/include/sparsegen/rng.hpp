#pragma once

#include <cstdint>

namespace sparsegen {

// Counter-based generator: stream(seed, trial) yields the same sequence no
// matter which worker runs the trial, so paired-seed comparisons and
// thread-count-independent outputs are exact.
class TrialRng {
public:
    TrialRng(uint64_t seed, uint64_t trial) {
        state_ = mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(trial * 0xbf58476d1ce4e5b9ull + 1);
        if (state_ == 0) state_ = 0x2545f4914f6cdd1dull;
    }

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    bool bernoulli(double p) { return next_double() < p; }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
        return z ^ (z >> 33);
    }
    uint64_t state_;
};

}  // namespace sparsegen
