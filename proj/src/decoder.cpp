#include "sparsegen/decoder.hpp"

#include <cmath>
#include <thread>

#include "sparsegen/adrs.hpp"
#include "sparsegen/errors.hpp"

namespace sparsegen {

namespace {

struct ScBecCtx {
    const std::vector<DrsLevel>* levels;
    const std::vector<uint8_t>* frozen;
    DecodeResult* result;

    // one designated look, three-valued consistency combine
    static ErasureSymbol combine(ErasureSymbol a, ErasureSymbol b, int64_t& ops) {
        ++ops;
        if (a == ErasureSymbol::erased) return b;
        if (b == ErasureSymbol::erased) return a;
        return a == b ? a : ErasureSymbol::erased;  // conflicting looks decay to an erasure
    }

    // decodes the block of size 2^m starting at source index base; returns
    // the re-encoded slot values of the block for upstream feedback
    std::vector<uint8_t> decode_block(int m, int64_t base, const std::vector<ErasureSymbol>& obs) {
        if (m == 0) {
            uint8_t bit = 0;
            if ((*frozen)[base]) {
                bit = 0;
            } else if (obs[0] == ErasureSymbol::erased) {
                result->failed = true;
                bit = 0;
            } else {
                bit = static_cast<uint8_t>(obs[0]);
                result->decided[base] = 1;
            }
            result->estimates[base] = bit;
            return {bit};
        }
        const DrsLevel& lv = (*levels)[m];
        std::vector<ErasureSymbol> e_obs(lv.child_slots);
        for (int64_t t = 0; t < lv.child_slots; ++t) {
            ++result->ops;
            if (lv.split[t]) {
                e_obs[t] = obs[lv.b_slot[t]];  // the P piece is transmitted on its own
            } else {
                e_obs[t] = xor_sym(obs[lv.left_slot[t]], obs[lv.left_total + t]);
            }
        }
        std::vector<uint8_t> p_hat = decode_block(m - 1, base, e_obs);

        std::vector<ErasureSymbol> l_obs(lv.child_slots);
        for (int64_t t = 0; t < lv.child_slots; ++t) {
            const ErasureSymbol c = obs[lv.left_total + t];
            if (lv.split[t]) {
                l_obs[t] = combine(obs[lv.left_slot[t]], c, result->ops);
            } else {
                ErasureSymbol via_a = obs[lv.left_slot[t]] == ErasureSymbol::erased
                                          ? ErasureSymbol::erased
                                          : static_cast<ErasureSymbol>(static_cast<uint8_t>(obs[lv.left_slot[t]]) ^ p_hat[t]);
                l_obs[t] = combine(via_a, c, result->ops);
            }
        }
        std::vector<uint8_t> q_hat = decode_block(m - 1, base + (int64_t{1} << (m - 1)), l_obs);

        std::vector<uint8_t> slot_values(lv.slots, 0);
        for (int64_t t = 0; t < lv.child_slots; ++t) {
            if (lv.split[t]) {
                slot_values[lv.left_slot[t]] = q_hat[t];
                slot_values[lv.b_slot[t]] = p_hat[t];
            } else {
                slot_values[lv.left_slot[t]] = static_cast<uint8_t>(p_hat[t] ^ q_hat[t]);
            }
            slot_values[lv.left_total + t] = q_hat[t];
        }
        return slot_values;
    }
};

}  // namespace

DecodeResult sc_polar_bec(const std::vector<ErasureSymbol>& received, const std::vector<uint8_t>& frozen) {
    int n = 0;
    while ((size_t{1} << n) < received.size()) ++n;
    if ((size_t{1} << n) != received.size()) throw argument_error("sc_polar_bec: received length must be 2^n");
    EncoderGraph g = build_graph(n, std::nullopt, false);
    return sc_drs_bec(received, frozen, g);
}

DecodeResult sc_drs_bec(const std::vector<ErasureSymbol>& received, const std::vector<uint8_t>& frozen,
                        const EncoderGraph& g) {
    if (g.mode != CodeMode::plain && g.mode != CodeMode::drs)
        throw argument_error("sc_drs_bec: graph must be plain or drs mode");
    if (static_cast<int64_t>(received.size()) != g.channel_slots)
        throw argument_error("sc_drs_bec: received length != channel slots");
    if (static_cast<int64_t>(frozen.size()) != g.source_bits())
        throw argument_error("sc_drs_bec: frozen mask length != 2^n");

    DecodeResult result;
    result.estimates.assign(g.source_bits(), 0);
    result.decided.assign(g.source_bits(), 0);
    ScBecCtx ctx{&g.levels, &frozen, &result};
    ctx.decode_block(g.n, 0, received);
    return result;
}

double bms_llr(const Bms& w, int64_t y) {
    if (y < 0 || static_cast<size_t>(y) >= w.alphabet_size()) throw argument_error("bms_llr: symbol out of range");
    const double p0 = w.w0(static_cast<size_t>(y));
    const double p1 = w.w1(static_cast<size_t>(y));
    if (p0 == 0.0 && p1 == 0.0) return 0.0;
    if (p1 == 0.0) return kLlrClamp;
    if (p0 == 0.0) return -kLlrClamp;
    return std::max(-kLlrClamp, std::min(kLlrClamp, std::log(p0 / p1)));
}

DecodeResult sc_adrs(const std::vector<int64_t>& received_symbols, const std::vector<uint8_t>& frozen,
                     const EncoderGraph& g, const Channel& w) {
    if (g.mode != CodeMode::adrs) throw argument_error("sc_adrs: graph must be adrs mode");
    if (static_cast<int64_t>(received_symbols.size()) != g.channel_slots)
        throw argument_error("sc_adrs: received length != channel slots");

    std::vector<double> llr(received_symbols.size());
    if (std::holds_alternative<Bec>(w)) {
        // symbols: 0, 1, or 2 = erased
        for (size_t i = 0; i < llr.size(); ++i) {
            switch (received_symbols[i]) {
                case 0: llr[i] = kLlrClamp; break;
                case 1: llr[i] = -kLlrClamp; break;
                case 2: llr[i] = 0.0; break;
                default: throw argument_error("sc_adrs: bad erasure symbol");
            }
        }
    } else {
        const Bms& ch = std::get<Bms>(w);
        for (size_t i = 0; i < llr.size(); ++i) llr[i] = bms_llr(ch, received_symbols[i]);
    }
    AdrsDecodeOutcome out = adrs_sc_decode(*g.adrs, llr, frozen);
    DecodeResult result;
    result.estimates = std::move(out.estimates);
    result.failed = out.failed;
    result.ops = out.ops;
    return result;
}

std::vector<DecodeResult> chunked_decode(const std::function<DecodeResult(const std::vector<ErasureSymbol>&)>& decoder,
                                         const std::vector<std::vector<ErasureSymbol>>& chunks, int threads) {
    if (chunks.empty()) return {};
    const size_t len = chunks[0].size();
    for (const auto& c : chunks)
        if (c.size() != len) throw argument_error("chunked_decode: ragged chunks");

    std::vector<DecodeResult> results(chunks.size());
    if (threads <= 1) {
        for (size_t i = 0; i < chunks.size(); ++i) results[i] = decoder(chunks[i]);
        return results;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= chunks.size()) break;
                results[i] = decoder(chunks[i]);
            }
        });
    for (auto& th : pool) th.join();
    return results;
}

DecodeResult sc_matrix_bec(const std::vector<ErasureSymbol>& received, const std::vector<uint8_t>& frozen,
                           const SparseGenerator& gm) {
    const int64_t n_rows = gm.n_rows;
    const int64_t n_cols = gm.n_cols();
    if (static_cast<int64_t>(received.size()) != n_cols) throw argument_error("sc_matrix_bec: length mismatch");
    if (static_cast<int64_t>(frozen.size()) != n_rows) throw argument_error("sc_matrix_bec: frozen mask size");
    if (n_rows > 4096) throw capability_error("sc_matrix_bec: reference decoder limited to 4096 rows");

    DecodeResult result;
    result.estimates.assign(n_rows, 0);
    result.decided.assign(n_rows, 0);

    // Bit i is SC-decidable given u_{<i} iff some combination of non-erased
    // use equations has support inside {0..i} and touches i, i.e. iff the
    // echelon form (eliminating high columns first) has a row leading at i.
    const int64_t words = (n_rows + 63) / 64;
    std::vector<std::vector<uint64_t>> eq;
    std::vector<uint8_t> val;
    for (int64_t c = 0; c < n_cols; ++c) {
        if (received[c] == ErasureSymbol::erased) continue;
        std::vector<uint64_t> row(words, 0);
        for (int64_t r : gm.columns[c].support) row[r / 64] |= uint64_t{1} << (r % 64);
        eq.push_back(std::move(row));
        val.push_back(static_cast<uint8_t>(received[c]));
        result.ops += gm.columns[c].weight();
    }

    std::vector<int64_t> leader(n_rows, -1);
    size_t rank_row = 0;
    for (int64_t col = n_rows - 1; col >= 0; --col) {
        size_t pivot = rank_row;
        while (pivot < eq.size() && !(eq[pivot][col / 64] >> (col % 64) & 1)) ++pivot;
        if (pivot == eq.size()) continue;
        std::swap(eq[pivot], eq[rank_row]);
        std::swap(val[pivot], val[rank_row]);
        for (size_t r = 0; r < eq.size(); ++r) {
            if (r != rank_row && (eq[r][col / 64] >> (col % 64) & 1)) {
                for (int64_t w = 0; w < words; ++w) eq[r][w] ^= eq[rank_row][w];
                val[r] ^= val[rank_row];
                result.ops += words;
            }
        }
        leader[col] = static_cast<int64_t>(rank_row);
        ++rank_row;
    }

    for (int64_t i = 0; i < n_rows; ++i) {
        uint8_t bit = 0;
        if (frozen[i]) {
            bit = 0;
        } else if (leader[i] < 0) {
            result.failed = true;
            bit = 0;
        } else {
            const auto& row = eq[leader[i]];
            bit = val[leader[i]];
            for (int64_t j = 0; j < i; ++j)
                if ((row[j / 64] >> (j % 64) & 1) && result.estimates[j]) bit ^= 1;
            result.decided[i] = 1;
        }
        result.estimates[i] = bit;
    }
    return result;
}

}  // namespace sparsegen
