#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sparsegen/channel.hpp"

namespace sparsegen {

// A-DRS encoder structure. The main tree is the plain polar encoder over
// adjacent pairs; at a marked level every XOR gets fresh noise on its minus
// operand plus two plain replica subtrees: one re-encoding the upper-half
// wires with the noise in the marked slot, one re-encoding the lower-half
// wires. Replicas are unmodified copies, so each marked XOR at recursion j
// adds exactly 2^j channel uses.
struct AdrsNode {
    int t = 0;          // block size 2^t
    bool marked = false;
    int64_t use_index = -1;  // t == 0
    std::unique_ptr<AdrsNode> upper, lower;
    std::vector<std::unique_ptr<AdrsNode>> rep_noise;  // per pair: replica fed with the noise bit
    std::vector<std::unique_ptr<AdrsNode>> rep_lower;  // per pair: replica re-encoding the lower wires
    std::vector<int64_t> noise_id;                     // per pair when marked
};

struct AdrsGraph {
    int n = 0;
    int n_lub = 0;
    int64_t main_uses = 0;
    int64_t extra_uses = 0;
    int64_t noise_count = 0;
    std::unique_ptr<AdrsNode> root;

    int64_t total_uses() const { return main_uses + extra_uses; }
};

// Guard: refuses builds whose total use count exceeds max_uses.
std::shared_ptr<AdrsGraph> build_adrs_graph(int n, int n_lub, int64_t max_uses = int64_t{1} << 26);

std::vector<uint8_t> adrs_encode(const AdrsGraph& g, const std::vector<uint8_t>& sources,
                                 const std::vector<uint8_t>& noise);

// Designated-schedule erasure recursion: the per-source-bit erasure
// probability seen by the decoder below, walking the built structure.
std::vector<double> adrs_bec_profile(const AdrsGraph& g, double eps);

// Same walk with exact channel algebra; returns Z of each source bit-channel.
// Only feasible for tiny n / alphabets (product alphabets grow fast).
std::vector<double> adrs_bms_profile_z(const AdrsGraph& g, const Bms& w, size_t alphabet_cap = (1u << 24));

// Per-use channel LLRs -> hard source decisions with decision feedback.
// Returns false in *ok for any information bit with zero LLR (erasure).
struct AdrsDecodeOutcome {
    std::vector<uint8_t> estimates;
    bool failed = false;
    int64_t ops = 0;
};
AdrsDecodeOutcome adrs_sc_decode(const AdrsGraph& g, const std::vector<double>& use_llr,
                                 const std::vector<uint8_t>& frozen);

constexpr double kLlrClamp = 40.0;

}  // namespace sparsegen
