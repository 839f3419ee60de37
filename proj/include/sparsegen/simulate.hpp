#pragma once

#include <cstdint>

#include "sparsegen/channel.hpp"
#include "sparsegen/decoder.hpp"
#include "sparsegen/graph.hpp"

namespace sparsegen {

struct SimResult {
    int64_t trials = 0;
    int64_t failures = 0;
    double rate_estimate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
};

// Monte-Carlo block failure rate. Trial t draws its randomness from
// TrialRng(seed, t), so results are independent of the thread count and
// paired across runs that share a seed.
SimResult simulate_block_errors(const CodeSpec& spec, const Channel& channel, int64_t trials, uint64_t seed,
                                int threads = 1);

// Wilson score interval at z = 1.96
void wilson_interval(int64_t failures, int64_t trials, double* lo, double* hi);

}  // namespace sparsegen
