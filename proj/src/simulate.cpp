#include "sparsegen/simulate.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "sparsegen/adrs.hpp"
#include "sparsegen/errors.hpp"
#include "sparsegen/rng.hpp"

namespace sparsegen {

void wilson_interval(int64_t failures, int64_t trials, double* lo, double* hi) {
    if (trials <= 0) {
        *lo = 0.0;
        *hi = 1.0;
        return;
    }
    const double z = 1.96;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    const double denom = 1.0 + z * z / n;
    const double center = p + z * z / (2.0 * n);
    const double spread = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    *lo = std::max(0.0, (center - spread) / denom);
    *hi = std::min(1.0, (center + spread) / denom);
}

namespace {

size_t sample_bms(const Bms& w, uint8_t x, TrialRng& rng) {
    double u = rng.next_double();
    double acc = 0.0;
    const size_t j = w.alphabet_size();
    for (size_t y = 0; y < j; ++y) {
        acc += x ? w.w1(y) : w.w0(y);
        if (u < acc) return y;
    }
    return j - 1;
}

struct TrialContext {
    const CodeSpec* spec;
    const EncoderGraph* graph;
    const SparseGenerator* matrix;  // simple-split only
    const Channel* channel;
    uint64_t seed;

    bool run_trial(int64_t trial) const {
        TrialRng rng(seed, static_cast<uint64_t>(trial));
        const int64_t nsrc = int64_t{1} << spec->n;
        const int64_t k = spec->dimension();
        std::vector<uint8_t> message(k);
        for (int64_t i = 0; i < k; ++i) message[i] = rng.next_bit();

        std::vector<uint8_t> u(nsrc, 0);
        {
            int64_t j = 0;
            for (int64_t i = 0; i < nsrc; ++i)
                if (!spec->frozen[i]) u[i] = message[j++];
        }

        if (std::holds_alternative<Bec>(*channel)) {
            const double eps = std::get<Bec>(*channel).erasure;
            if (spec->mode == CodeMode::adrs) {
                std::vector<uint8_t> noise(graph->noise_bits);
                for (auto& b : noise) b = rng.next_bit();
                std::vector<uint8_t> x = encode_source_word(*graph, u, noise);
                std::vector<int64_t> syms(x.size());
                for (size_t i = 0; i < x.size(); ++i) syms[i] = rng.bernoulli(eps) ? 2 : x[i];
                DecodeResult res = sc_adrs(syms, spec->frozen, *graph, *channel);
                return res.failed || res.estimates != u;
            }
            std::vector<uint8_t> x;
            if (spec->mode == CodeMode::simple_split) {
                x.assign(matrix->n_cols(), 0);
                for (int64_t c = 0; c < matrix->n_cols(); ++c) {
                    uint8_t v = 0;
                    for (int64_t r : matrix->columns[c].support) v ^= u[r];
                    x[c] = v;
                }
            } else {
                x = encode_source_word(*graph, u);
            }
            std::vector<ErasureSymbol> received(x.size());
            for (size_t i = 0; i < x.size(); ++i)
                received[i] = rng.bernoulli(eps) ? ErasureSymbol::erased : static_cast<ErasureSymbol>(x[i]);
            DecodeResult res = spec->mode == CodeMode::simple_split
                                   ? sc_matrix_bec(received, spec->frozen, *matrix)
                                   : sc_drs_bec(received, spec->frozen, *graph);
            return res.failed || res.estimates != u;
        }

        // general BMS path: plain or adrs graphs decoded by LLR SC
        const Bms& w = std::get<Bms>(*channel);
        if (spec->mode != CodeMode::adrs && spec->mode != CodeMode::plain)
            throw capability_error("simulate: BMS channels support plain and adrs modes only");
        std::vector<uint8_t> noise(graph->noise_bits);
        for (auto& b : noise) b = rng.next_bit();
        std::vector<uint8_t> x = encode_source_word(*graph, u, noise);
        std::vector<int64_t> syms(x.size());
        for (size_t i = 0; i < x.size(); ++i) syms[i] = static_cast<int64_t>(sample_bms(w, x[i], rng));
        std::vector<double> llr(syms.size());
        for (size_t i = 0; i < syms.size(); ++i) llr[i] = bms_llr(w, syms[i]);
        AdrsDecodeOutcome out = adrs_sc_decode(*graph->adrs, llr, spec->frozen);
        return out.failed || out.estimates != u;
    }
};

}  // namespace

SimResult simulate_block_errors(const CodeSpec& spec, const Channel& channel, int64_t trials, uint64_t seed,
                                int threads) {
    if (trials < 0) throw argument_error("simulate: trials >= 0 required");
    EncoderGraph graph;
    SparseGenerator matrix;
    const bool bms_channel = std::holds_alternative<Bms>(channel);
    switch (spec.mode) {
        case CodeMode::plain:
            // BMS decoding runs on the unmarked adrs structure
            graph = bms_channel ? build_graph(spec.n, split_markers(spec.n, spec.n + 1), true)
                                : build_graph(spec.n, std::nullopt, false);
            break;
        case CodeMode::drs: {
            int n_lub = 0;
            while ((int64_t{1} << (n_lub + 1)) <= spec.w_ub) ++n_lub;
            graph = build_graph(spec.n, split_markers(spec.n, n_lub), false);
            break;
        }
        case CodeMode::adrs: {
            int n_lub = 0;
            while ((int64_t{1} << (n_lub + 1)) <= spec.w_ub) ++n_lub;
            graph = build_graph(spec.n, split_markers(spec.n, n_lub), true);
            break;
        }
        case CodeMode::simple_split:
            if (bms_channel) throw capability_error("simulate: simple-split supports BEC only");
            matrix.n_rows = int64_t{1} << spec.n;
            for (uint32_t j = 0; j < (uint32_t{1} << spec.n); ++j) {
                auto pieces = simple_split_column(g2_column(spec.n, j), spec.w_ub);
                for (auto& p : pieces) {
                    matrix.columns.push_back(std::move(p));
                    matrix.provenance.push_back(j);
                }
            }
            break;
    }
    if (spec.mode != CodeMode::simple_split && graph.channel_slots != spec.channel_slots)
        throw internal_error("simulate: graph slot count disagrees with the code spec");

    TrialContext ctx{&spec, &graph, &matrix, &channel, seed};
    std::atomic<int64_t> failures{0};
    if (threads <= 1) {
        int64_t f = 0;
        for (int64_t t = 0; t < trials; ++t) f += ctx.run_trial(t) ? 1 : 0;
        failures = f;
    } else {
        std::atomic<int64_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&]() {
                int64_t local = 0;
                while (true) {
                    int64_t i = next.fetch_add(1);
                    if (i >= trials) break;
                    local += ctx.run_trial(i) ? 1 : 0;
                }
                failures.fetch_add(local);
            });
        for (auto& th : pool) th.join();
    }

    SimResult res;
    res.trials = trials;
    res.failures = failures.load();
    res.rate_estimate = trials > 0 ? static_cast<double>(res.failures) / trials : 0.0;
    wilson_interval(res.failures, res.trials, &res.wilson_lo, &res.wilson_hi);
    return res;
}

}  // namespace sparsegen
