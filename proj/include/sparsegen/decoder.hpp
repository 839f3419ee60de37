#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sparsegen/channel.hpp"
#include "sparsegen/graph.hpp"

namespace sparsegen {

enum class ErasureSymbol : uint8_t { zero = 0, one = 1, erased = 2 };

inline ErasureSymbol xor_sym(ErasureSymbol a, ErasureSymbol b) {
    if (a == ErasureSymbol::erased || b == ErasureSymbol::erased) return ErasureSymbol::erased;
    return static_cast<ErasureSymbol>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}

struct DecodeResult {
    std::vector<uint8_t> estimates;  // length 2^n; frozen positions echo zero
    bool failed = false;             // some information bit was undecidable
    int64_t ops = 0;
    std::vector<uint8_t> decided;    // optional trace: 1 when the bit was read off a non-erased value
};

// classic successive cancellation over erasures on the plain polar graph
DecodeResult sc_polar_bec(const std::vector<ErasureSymbol>& received, const std::vector<uint8_t>& frozen);

// the four-case erasure decoder on a DRS graph (also accepts plain graphs)
DecodeResult sc_drs_bec(const std::vector<ErasureSymbol>& received, const std::vector<uint8_t>& frozen,
                        const EncoderGraph& g);

// LLR-based decoder over the A-DRS graph (or plain when markers were empty);
// accepts any Bec/Bms channel to map outputs to LLRs
DecodeResult sc_adrs(const std::vector<int64_t>& received_symbols, const std::vector<uint8_t>& frozen,
                     const EncoderGraph& g, const Channel& w);

// convenience: per-use LLR for received symbol y of a Bms
double bms_llr(const Bms& w, int64_t y);

// independent per-chunk decoding across the identity factor; parallel when
// threads > 1, results identical either way
std::vector<DecodeResult> chunked_decode(const std::function<DecodeResult(const std::vector<ErasureSymbol>&)>& decoder,
                                         const std::vector<std::vector<ErasureSymbol>>& chunks, int threads = 1);

// Reference SC over erasures for an arbitrary generator matrix: decides each
// source bit in index order by Gaussian elimination over the non-erased
// uses given past decisions. Exact but O(rows * cols * uses); test-sized
// inputs only. Used for the simple-split mode and as a comparison baseline.
DecodeResult sc_matrix_bec(const std::vector<ErasureSymbol>& received, const std::vector<uint8_t>& frozen,
                           const SparseGenerator& gm);

}  // namespace sparsegen
