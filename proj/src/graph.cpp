#include "sparsegen/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "sparsegen/adrs.hpp"
#include "sparsegen/errors.hpp"

namespace sparsegen {

std::string mode_name(CodeMode m) {
    switch (m) {
        case CodeMode::plain: return "plain";
        case CodeMode::simple_split: return "simple-split";
        case CodeMode::drs: return "drs";
        case CodeMode::adrs: return "adrs";
    }
    throw internal_error("unknown mode");
}

CodeMode mode_from_name(const std::string& name) {
    if (name == "plain") return CodeMode::plain;
    if (name == "simple-split") return CodeMode::simple_split;
    if (name == "drs") return CodeMode::drs;
    if (name == "adrs") return CodeMode::adrs;
    throw argument_error("unknown mode: " + name);
}

namespace {

// Builds the per-level layouts for the DRS (or plain, n_lub >= n) graph.
// out_cols tracks, per output slot of the current level, which column of
// G2^{kron m} the slot's piece belongs to.
std::vector<DrsLevel> build_levels(int n, int n_lub) {
    std::vector<DrsLevel> levels(n + 1);
    std::vector<int64_t> out_cols = {0};  // level 0: one slot, empty suffix
    for (int m = 1; m <= n; ++m) {
        DrsLevel lv;
        lv.m = m;
        lv.child_slots = static_cast<int64_t>(out_cols.size());
        lv.split.assign(lv.child_slots, 0);
        lv.left_slot.assign(lv.child_slots, -1);
        lv.b_slot.assign(lv.child_slots, -1);

        const int child_signs = m - 1;
        std::vector<int64_t> next_cols;
        int64_t pos = 0;
        // left part: child columns in ascending order, pieces contiguous
        for (int64_t t = 0; t < lv.child_slots;) {
            const int64_t col = out_cols[t];
            int64_t end = t;
            while (end < lv.child_slots && out_cols[end] == col) ++end;
            const int minus_count = child_signs - std::popcount(static_cast<uint64_t>(col));
            const bool split = minus_count >= n_lub;
            if (split) {
                for (int64_t i = t; i < end; ++i) lv.split[i] = 1;
                for (int64_t i = t; i < end; ++i) {  // Q-copy pieces first (tail halves)
                    lv.left_slot[i] = pos++;
                    next_cols.push_back(col);
                }
                for (int64_t i = t; i < end; ++i) {
                    lv.b_slot[i] = pos++;
                    next_cols.push_back(col);
                }
            } else {
                if (end - t != 1) throw internal_error("unsplit column with multiple pieces");
                lv.left_slot[t] = pos++;
                next_cols.push_back(col);
            }
            t = end;
        }
        lv.left_total = pos;
        for (int64_t t = 0; t < lv.child_slots; ++t)
            next_cols.push_back((int64_t{1} << child_signs) + out_cols[t]);
        lv.slots = lv.left_total + lv.child_slots;
        levels[m] = std::move(lv);
        out_cols = std::move(next_cols);
    }
    return levels;
}

template <typename T>
void de_rec(const std::vector<DrsLevel>& levels, int m, std::vector<T>& w, T* out) {
    if (m == 0) {
        out[0] = w[0];
        return;
    }
    const DrsLevel& lv = levels[m];
    std::vector<T> e_u(lv.child_slots), e_l(lv.child_slots);
    for (int64_t t = 0; t < lv.child_slots; ++t) {
        const T& c = w[lv.left_total + t];
        if (lv.split[t]) {
            const T& d = w[lv.left_slot[t]];
            const T& b = w[lv.b_slot[t]];
            e_u[t] = b;
            e_l[t] = d * c;
        } else {
            const T& a = w[lv.left_slot[t]];
            e_u[t] = a + c - a * c;
            e_l[t] = a * c;
        }
    }
    w.clear();
    w.shrink_to_fit();
    de_rec(levels, m - 1, e_u, out);
    de_rec(levels, m - 1, e_l, out + (int64_t{1} << (m - 1)));
}

void encode_rec(const std::vector<DrsLevel>& levels, int m, const uint8_t* u, std::vector<uint8_t>& out) {
    if (m == 0) {
        out.assign(1, u[0]);
        return;
    }
    const DrsLevel& lv = levels[m];
    std::vector<uint8_t> p, q;
    encode_rec(levels, m - 1, u, p);
    encode_rec(levels, m - 1, u + (int64_t{1} << (m - 1)), q);
    out.assign(lv.slots, 0);
    for (int64_t t = 0; t < lv.child_slots; ++t) {
        if (lv.split[t]) {
            out[lv.left_slot[t]] = q[t];
            out[lv.b_slot[t]] = p[t];
        } else {
            out[lv.left_slot[t]] = static_cast<uint8_t>(p[t] ^ q[t]);
        }
        out[lv.left_total + t] = q[t];
    }
}

}  // namespace

EncoderGraph build_graph(int n, const std::optional<SplitMarkerSet>& markers, bool adrs) {
    if (n < 1 || n > 20) throw capability_error("build_graph: 1 <= n <= 20 required");
    if (adrs && !markers) throw argument_error("build_graph: adrs requires split markers");
    if (markers && markers->n != n) throw argument_error("build_graph: marker set n mismatch");

    EncoderGraph g;
    g.n = n;
    if (!markers) {
        g.mode = CodeMode::plain;
        g.n_lub = n + 1;  // no column ever splits
        g.levels = build_levels(n, g.n_lub);
        g.channel_slots = g.levels[n].slots;
        if (g.channel_slots != (int64_t{1} << n)) throw internal_error("plain graph slot count");
        return g;
    }
    g.n_lub = markers->n_lub;
    if (!adrs) {
        g.mode = CodeMode::drs;
        g.levels = build_levels(n, g.n_lub);
        g.channel_slots = g.levels[n].slots;
        return g;
    }
    g.mode = CodeMode::adrs;
    g.adrs = build_adrs_graph(n, g.n_lub);
    g.noise_bits = g.adrs->noise_count;
    g.channel_slots = g.adrs->total_uses();
    return g;
}

std::vector<double> bec_density_evolution(const EncoderGraph& g, double eps) {
    if (eps < 0.0 || eps > 1.0) throw argument_error("bec_density_evolution: eps in [0,1] required");
    const int64_t nsrc = g.source_bits();
    std::vector<double> profile(nsrc);
    if (g.mode == CodeMode::adrs) {
        return adrs_bec_profile(*g.adrs, eps);
    }
    std::vector<double> w(g.channel_slots, eps);
    de_rec(g.levels, g.n, w, profile.data());
    return profile;
}

std::vector<mpq_class> bec_density_evolution_exact(const EncoderGraph& g, const mpq_class& eps) {
    if (g.mode == CodeMode::adrs)
        throw capability_error("exact DE over the A-DRS graph is not supported; use the double version");
    const int64_t nsrc = g.source_bits();
    std::vector<mpq_class> profile(nsrc);
    std::vector<mpq_class> w(g.channel_slots, eps);
    de_rec(g.levels, g.n, w, profile.data());
    return profile;
}

std::vector<uint8_t> select_frozen(const std::vector<double>& profile, int64_t k) {
    const int64_t nsrc = static_cast<int64_t>(profile.size());
    if (k < 0 || k > nsrc) throw argument_error("select_frozen: 0 <= k <= 2^n required");
    std::vector<int64_t> order(nsrc);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
        if (profile[a] != profile[b]) return profile[a] < profile[b];
        return a < b;
    });
    std::vector<uint8_t> frozen(nsrc, 1);
    for (int64_t i = 0; i < k; ++i) frozen[order[i]] = 0;
    return frozen;
}

int64_t CodeSpec::dimension() const {
    int64_t k = 0;
    for (uint8_t f : frozen) k += (f == 0);
    return k;
}

std::vector<uint8_t> encode_source_word(const EncoderGraph& g, const std::vector<uint8_t>& u,
                                        const std::vector<uint8_t>& noise) {
    if (static_cast<int64_t>(u.size()) != g.source_bits()) throw argument_error("encode: source length != 2^n");
    if (g.mode == CodeMode::adrs) {
        if (static_cast<int64_t>(noise.size()) != g.noise_bits)
            throw argument_error("encode: adrs graph needs one value per noise bit");
        return adrs_encode(*g.adrs, u, noise);
    }
    std::vector<uint8_t> out;
    encode_rec(g.levels, g.n, u.data(), out);
    return out;
}

std::vector<uint8_t> encode(const CodeSpec& spec, const EncoderGraph& g, const std::vector<uint8_t>& message,
                            const std::vector<uint8_t>& noise) {
    if (static_cast<int64_t>(message.size()) != spec.dimension())
        throw argument_error("encode: message length != code dimension");
    std::vector<uint8_t> u(g.source_bits(), 0);
    int64_t j = 0;
    for (int64_t i = 0; i < g.source_bits(); ++i)
        if (!spec.frozen[i]) u[i] = message[j++];
    return encode_source_word(g, u, noise);
}

double union_bound_pe(const std::vector<double>& profile, const std::vector<uint8_t>& frozen, double log2_n_prime) {
    double sum = 0.0;
    for (size_t i = 0; i < profile.size(); ++i)
        if (!frozen[i]) sum += profile[i];
    if (sum <= 0.0) return -std::numeric_limits<double>::infinity();
    return log2_n_prime + std::log2(sum);
}

double symbolic_log2_n_prime(int n, double rate_of_polarization, double delta) {
    return std::pow(std::exp2(static_cast<double>(n)), (1.0 - delta) * rate_of_polarization);
}

CodeSpec design_code(CodeMode mode, int n, int64_t w_ub, double eps, const mpq_class& rate, double delta) {
    if (n < 1 || n > 20) throw capability_error("design_code: 1 <= n <= 20 required");
    if (rate <= 0 || rate > 1) throw argument_error("design_code: rate in (0,1] required");
    CodeSpec spec;
    spec.mode = mode;
    spec.n = n;
    spec.w_ub = w_ub;
    spec.eps_design = eps;
    spec.log2_n_prime = symbolic_log2_n_prime(n, 0.5, delta);

    const int64_t nsrc = int64_t{1} << n;
    mpq_class kq = rate * nsrc;
    mpz_class kz;
    mpz_fdiv_q(kz.get_mpz_t(), kq.get_num().get_mpz_t(), kq.get_den().get_mpz_t());
    const int64_t k = static_cast<int64_t>(kz.get_si());
    if (k < 1) throw argument_error("design_code: rate too small, dimension would be zero");
    spec.rate = mpq_class(k, nsrc);
    spec.rate.canonicalize();

    int n_lub = 0;
    if (mode != CodeMode::plain) {
        if (w_ub < 1) throw argument_error("design_code: w_ub >= 1 required for split modes");
        n_lub = 63 - std::countl_zero(static_cast<uint64_t>(w_ub));
    }

    // Frozen selection always uses the plain-polar profile; the DRS profile
    // index-dominates it and the A-DRS profile equals it, so the same index
    // set serves every mode and comparisons stay paired.
    EncoderGraph plain = build_graph(n, std::nullopt, false);
    std::vector<double> profile = bec_density_evolution(plain, eps);
    spec.frozen = select_frozen(profile, k);

    switch (mode) {
        case CodeMode::plain:
            spec.channel_slots = nsrc;
            break;
        case CodeMode::simple_split: {
            RateLossLedger ledger = simple_split_gamma_census(n, w_ub);
            mpq_class slots = (ledger.gamma + 1) * nsrc;
            if (slots.get_den() != 1) throw internal_error("simple-split slot count not integral");
            spec.channel_slots = static_cast<int64_t>(mpz_class(slots.get_num()).get_si());
            break;
        }
        case CodeMode::drs: {
            EncoderGraph g = build_graph(n, split_markers(n, n_lub), false);
            spec.channel_slots = g.channel_slots;
            break;
        }
        case CodeMode::adrs: {
            mpz_class extra = adrs_extra_uses(n, n_lub);
            mpz_class total = extra + nsrc;
            if (!total.fits_slong_p()) throw capability_error("design_code: adrs slot count too large");
            spec.channel_slots = static_cast<int64_t>(total.get_si());
            break;
        }
    }
    spec.union_bound_log2 = union_bound_pe(profile, spec.frozen, 0.0);
    return spec;
}

std::string frozen_to_hex(const std::vector<uint8_t>& frozen) {
    static const char* digits = "0123456789abcdef";
    std::string hex;
    int nibble = 0, count = 0;
    for (size_t i = 0; i < frozen.size(); ++i) {
        nibble |= (frozen[i] & 1) << (count++);
        if (count == 4) {
            hex.push_back(digits[nibble]);
            nibble = count = 0;
        }
    }
    if (count) hex.push_back(digits[nibble]);
    return hex;
}

std::vector<uint8_t> frozen_from_hex(const std::string& hex, int64_t nbits) {
    std::vector<uint8_t> frozen(nbits, 0);
    for (int64_t i = 0; i < nbits; ++i) {
        size_t pos = static_cast<size_t>(i / 4);
        if (pos >= hex.size()) throw argument_error("frozen mask hex too short");
        char c = hex[pos];
        int v = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
        if (v < 0) throw argument_error("frozen mask hex: bad digit");
        frozen[i] = static_cast<uint8_t>((v >> (i % 4)) & 1);
    }
    return frozen;
}

void save_code_json(const CodeSpec& spec, const std::string& path) {
    nlohmann::json j;
    j["mode"] = mode_name(spec.mode);
    j["n"] = spec.n;
    j["w_ub"] = spec.w_ub;
    j["log2_n_prime"] = spec.log2_n_prime;
    j["n_prime_concrete"] = spec.n_prime_concrete;
    j["eps_design"] = spec.eps_design;
    j["rate_num"] = static_cast<int64_t>(spec.rate.get_num().get_si());
    j["rate_den"] = static_cast<int64_t>(spec.rate.get_den().get_si());
    j["channel_slots"] = spec.channel_slots;
    j["union_bound_log2"] = spec.union_bound_log2;
    j["frozen_hex"] = frozen_to_hex(spec.frozen);
    std::ofstream out(path);
    if (!out) throw argument_error("cannot write code file: " + path);
    out << j.dump(2) << "\n";
}

CodeSpec load_code_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open code file: " + path);
    nlohmann::json j;
    in >> j;
    CodeSpec spec;
    spec.mode = mode_from_name(j.at("mode").get<std::string>());
    spec.n = j.at("n").get<int>();
    spec.w_ub = j.at("w_ub").get<int64_t>();
    spec.log2_n_prime = j.at("log2_n_prime").get<double>();
    spec.n_prime_concrete = j.at("n_prime_concrete").get<int64_t>();
    spec.eps_design = j.at("eps_design").get<double>();
    spec.rate = mpq_class(j.at("rate_num").get<int64_t>(), j.at("rate_den").get<int64_t>());
    spec.rate.canonicalize();
    spec.channel_slots = j.at("channel_slots").get<int64_t>();
    spec.union_bound_log2 = j.at("union_bound_log2").get<double>();
    spec.frozen = frozen_from_hex(j.at("frozen_hex").get<std::string>(), int64_t{1} << spec.n);
    return spec;
}

}  // namespace sparsegen
