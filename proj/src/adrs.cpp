#include "sparsegen/adrs.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "sparsegen/errors.hpp"

namespace sparsegen {

namespace {

struct ExtraLeaf {
    int level;         // recursion index j of the marked XOR
    int64_t sign_key;  // Bi2De of the full sign sequence of the marked XOR
    int kind;          // 0 = noise replica, 1 = lower replica
    int64_t inner;     // use position inside the replica
    AdrsNode* leaf;
};

struct Builder {
    int n;
    int n_lub;
    int64_t noise_count = 0;
    int64_t use_budget;
    int64_t uses_made = 0;
    std::vector<ExtraLeaf> extras;

    void charge(int64_t k) {
        uses_made += k;
        if (uses_made > use_budget) throw capability_error("adrs graph exceeds the channel-use budget");
    }

    // plain subtree; leaves recorded for later slot assignment
    std::unique_ptr<AdrsNode> build_plain(int t, int level, int64_t sign_key, int kind, int64_t* inner) {
        auto node = std::make_unique<AdrsNode>();
        node->t = t;
        if (t == 0) {
            charge(1);
            extras.push_back({level, sign_key, kind, (*inner)++, node.get()});
            return node;
        }
        node->upper = build_plain(t - 1, level, sign_key, kind, inner);
        node->lower = build_plain(t - 1, level, sign_key, kind, inner);
        return node;
    }

    // main tree: q = number of minus signs on the path above this subtree,
    // base = the accumulated use-index bits of that path
    std::unique_ptr<AdrsNode> build_main(int t, int q, int64_t base) {
        auto node = std::make_unique<AdrsNode>();
        node->t = t;
        if (t == 0) {
            charge(1);
            node->use_index = base;
            return node;
        }
        node->marked = (q >= n_lub);
        node->upper = build_main(t - 1, q + 1, base);
        node->lower = build_main(t - 1, q, base | (int64_t{1} << (n - t)));
        if (node->marked) {
            const int64_t pairs = int64_t{1} << (t - 1);
            node->noise_id.resize(pairs);
            node->rep_noise.resize(pairs);
            node->rep_lower.resize(pairs);
            for (int64_t i = 0; i < pairs; ++i) {
                node->noise_id[i] = noise_count++;
                // full sign sequence of this XOR: prefix = pair bits, s_t = minus, suffix = path
                const int64_t key = (i << (n - t + 1)) | base;
                int64_t inner = 0;
                node->rep_noise[i] = build_plain(t - 1, t, key, 0, &inner);
                inner = 0;
                node->rep_lower[i] = build_plain(t - 1, t, key, 1, &inner);
            }
        }
        return node;
    }
};

// ---------- encode ----------

void encode_rec(const AdrsNode& node, const std::vector<uint8_t>& x, const std::vector<uint8_t>& noise,
                std::vector<uint8_t>& out) {
    if (node.t == 0) {
        out[node.use_index] = x[0];
        return;
    }
    const int64_t h = int64_t{1} << (node.t - 1);
    std::vector<uint8_t> a(h), b(h);
    for (int64_t i = 0; i < h; ++i) {
        b[i] = x[2 * i + 1];
        a[i] = node.marked ? static_cast<uint8_t>(x[2 * i] ^ noise[node.noise_id[i]])
                           : static_cast<uint8_t>(x[2 * i] ^ x[2 * i + 1]);
    }
    encode_rec(*node.upper, a, noise, out);
    encode_rec(*node.lower, b, noise, out);
    if (node.marked) {
        for (int64_t i = 0; i < h; ++i) {
            std::vector<uint8_t> ar = a;
            ar[i] = noise[node.noise_id[i]];
            encode_rec(*node.rep_noise[i], ar, noise, out);
            encode_rec(*node.rep_lower[i], b, noise, out);
        }
    }
}

// ---------- designated erasure recursion ----------

std::vector<double> eff_rec(const AdrsNode& node, double eps) {
    if (node.t == 0) return {eps};
    const int64_t h = int64_t{1} << (node.t - 1);
    std::vector<double> up = eff_rec(*node.upper, eps);
    std::vector<double> low = eff_rec(*node.lower, eps);
    std::vector<double> e(2 * h);
    for (int64_t i = 0; i < h; ++i) {
        if (node.marked) {
            double r1 = eff_rec(*node.rep_noise[i], eps)[i];
            double r2 = eff_rec(*node.rep_lower[i], eps)[i];
            e[2 * i] = up[i] + r1 - up[i] * r1;
            e[2 * i + 1] = low[i] * r2;
        } else {
            e[2 * i] = up[i] + low[i] - up[i] * low[i];
            e[2 * i + 1] = up[i] * low[i];
        }
    }
    return e;
}

// ---------- designated channel algebra ----------

std::vector<Bms> eff_bms_rec(const AdrsNode& node, const Bms& w, size_t cap) {
    if (node.t == 0) return {w};
    const int64_t h = int64_t{1} << (node.t - 1);
    std::vector<Bms> up = eff_bms_rec(*node.upper, w, cap);
    std::vector<Bms> low = eff_bms_rec(*node.lower, w, cap);
    std::vector<Bms> e(2 * h);
    for (int64_t i = 0; i < h; ++i) {
        if (node.marked) {
            Bms r1 = eff_bms_rec(*node.rep_noise[i], w, cap)[i];
            Bms r2 = eff_bms_rec(*node.rep_lower[i], w, cap)[i];
            e[2 * i] = bms_transform(up[i], r1, cap).minus;
            e[2 * i + 1] = bms_parallel(low[i], r2, cap);
        } else {
            BmsPair pair = bms_transform(up[i], low[i], cap);
            e[2 * i] = std::move(pair.minus);
            e[2 * i + 1] = std::move(pair.plus);
        }
    }
    return e;
}

// ---------- successive cancellation with designated looks ----------

constexpr uint8_t kHardUnknown = 2;

struct ScState {
    const std::vector<double>* use_llr;
    int64_t ops = 0;

    double clamp(double x) const { return std::max(-kLlrClamp, std::min(kLlrClamp, x)); }

    double f_op(double a, double b) {
        ++ops;
        return clamp(2.0 * std::atanh(std::tanh(0.5 * clamp(a)) * std::tanh(0.5 * clamp(b))));
    }
    // look through a combined use given the decided partner bit; dropped when
    // the partner estimate is unknown (erasure feedback)
    double g_op(double mu, double ml, uint8_t hard) {
        ++ops;
        if (hard == kHardUnknown) return clamp(ml);
        return clamp(ml + (hard ? -mu : mu));
    }
};

struct NodeSc {
    const AdrsNode* node;
    std::vector<uint8_t> hard;
    std::vector<double> mu_cache, aux_cache;
    std::vector<std::unique_ptr<NodeSc>> upper, lower;  // single element
    std::vector<std::unique_ptr<NodeSc>> rep_noise, rep_lower;

    explicit NodeSc(const AdrsNode* nd) : node(nd) {
        const int64_t size = int64_t{1} << nd->t;
        hard.assign(size, kHardUnknown);
        if (nd->t == 0) return;
        mu_cache.assign(size / 2, 0.0);
        aux_cache.assign(size / 2, 0.0);
        upper.push_back(std::make_unique<NodeSc>(nd->upper.get()));
        lower.push_back(std::make_unique<NodeSc>(nd->lower.get()));
        for (const auto& r : nd->rep_noise) rep_noise.push_back(std::make_unique<NodeSc>(r.get()));
        for (const auto& r : nd->rep_lower) rep_lower.push_back(std::make_unique<NodeSc>(r.get()));
    }

    // Message for input slot i given hard decisions on slots < i. Pure given
    // the hard states, so recomputation is always safe; replica subtrees are
    // queried at one slot only, which rules out caching across calls.
    double msg(ScState& st, int64_t i) {
        if (node->t == 0) return (*st.use_llr)[node->use_index];
        const int64_t pair = i >> 1;
        if ((i & 1) == 0) {
            double mu = upper[0]->msg(st, pair);
            mu_cache[pair] = mu;
            if (node->marked) {
                double r1 = rep_noise[pair]->msg(st, pair);
                aux_cache[pair] = r1;
                return st.f_op(mu, r1);
            }
            return st.f_op(mu, lower[0]->msg(st, pair));
        }
        if (node->marked) {
            double ml = lower[0]->msg(st, pair);
            double r2 = rep_lower[pair]->msg(st, pair);
            ++st.ops;
            return st.clamp(ml + r2);
        }
        uint8_t h = hard[i - 1];
        if (h == kHardUnknown) {
            // partner wire unresolved by decision feedback (possible below a
            // marked level); fall back to hardening its own channel message
            double even = msg(st, i - 1);
            if (even > 0.0) h = 0;
            else if (even < 0.0) h = 1;
        }
        return st.g_op(upper[0]->msg(st, pair), lower[0]->msg(st, pair), h);
    }

    void set_hard(ScState& st, int64_t i, uint8_t bit) {
        hard[i] = bit;
        if (node->t == 0 || (i & 1) == 0) return;
        const int64_t pair = i >> 1;
        const uint8_t p_hat = hard[i - 1];
        const uint8_t q_hat = bit;
        if (!node->marked) {
            uint8_t a = (p_hat == kHardUnknown || q_hat == kHardUnknown) ? kHardUnknown
                                                                         : static_cast<uint8_t>(p_hat ^ q_hat);
            upper[0]->set_hard(st, pair, a);
            lower[0]->set_hard(st, pair, q_hat);
            return;
        }
        // Resolve the modified wire A = P ^ noise for downstream feedback.
        // Its looks: the main-cone message, the noise replica's message
        // shifted by the decided P, and the later replicas that tap the wire.
        double a_llr = mu_cache[pair];
        if (p_hat != kHardUnknown)
            a_llr = st.clamp(a_llr + (p_hat ? -aux_cache[pair] : aux_cache[pair]));
        const int64_t pairs = static_cast<int64_t>(rep_noise.size());
        if (a_llr == 0.0) {
            for (int64_t j = pair + 1; j < pairs && a_llr == 0.0; ++j)
                a_llr = rep_noise[j]->msg(st, pair);
        }
        uint8_t a = kHardUnknown;
        if (a_llr > 0.0) a = 0;
        else if (a_llr < 0.0) a = 1;
        uint8_t nu_hat = (a == kHardUnknown || p_hat == kHardUnknown) ? kHardUnknown
                                                                      : static_cast<uint8_t>(a ^ p_hat);
        upper[0]->set_hard(st, pair, a);
        lower[0]->set_hard(st, pair, q_hat);
        rep_noise[pair]->set_hard(st, pair, nu_hat);
        rep_lower[pair]->set_hard(st, pair, q_hat);
        for (int64_t j = pair + 1; j < pairs; ++j) {
            rep_noise[j]->set_hard(st, pair, a);
            rep_lower[j]->set_hard(st, pair, q_hat);
        }
    }
};

void collect_stats(const AdrsNode& node, int64_t* main_uses, int64_t* extra_uses) {
    if (node.t == 0) {
        ++*main_uses;
        return;
    }
    collect_stats(*node.upper, main_uses, extra_uses);
    collect_stats(*node.lower, main_uses, extra_uses);
    for (const auto& r : node.rep_noise) {
        int64_t cnt = 0, dummy = 0;
        collect_stats(*r, &cnt, &dummy);
        *extra_uses += cnt;
    }
    for (const auto& r : node.rep_lower) {
        int64_t cnt = 0, dummy = 0;
        collect_stats(*r, &cnt, &dummy);
        *extra_uses += cnt;
    }
}

}  // namespace

std::shared_ptr<AdrsGraph> build_adrs_graph(int n, int n_lub, int64_t max_uses) {
    if (n < 1 || n > 20) throw capability_error("build_adrs_graph: 1 <= n <= 20 required");
    if (n_lub < 0) throw argument_error("build_adrs_graph: n_lub >= 0 required");
    auto g = std::make_shared<AdrsGraph>();
    g->n = n;
    g->n_lub = n_lub;
    Builder builder{n, n_lub, 0, max_uses, 0, {}};
    g->root = builder.build_main(n, 0, 0);
    g->noise_count = builder.noise_count;
    g->main_uses = int64_t{1} << n;

    // extra uses after the main block: modification order is by recursion
    // index, then the sign sequence of the XOR, noise replica before lower
    std::sort(builder.extras.begin(), builder.extras.end(), [](const ExtraLeaf& a, const ExtraLeaf& b) {
        return std::tie(a.level, a.sign_key, a.kind, a.inner) < std::tie(b.level, b.sign_key, b.kind, b.inner);
    });
    int64_t next = g->main_uses;
    for (auto& e : builder.extras) e.leaf->use_index = next++;
    g->extra_uses = static_cast<int64_t>(builder.extras.size());

    int64_t mains = 0, extras = 0;
    collect_stats(*g->root, &mains, &extras);
    if (mains != g->main_uses || extras != g->extra_uses) throw internal_error("adrs use accounting mismatch");
    return g;
}

std::vector<uint8_t> adrs_encode(const AdrsGraph& g, const std::vector<uint8_t>& sources,
                                 const std::vector<uint8_t>& noise) {
    if (static_cast<int64_t>(sources.size()) != (int64_t{1} << g.n))
        throw argument_error("adrs_encode: source length != 2^n");
    if (static_cast<int64_t>(noise.size()) != g.noise_count)
        throw argument_error("adrs_encode: need one value per noise bit");
    std::vector<uint8_t> out(g.total_uses(), 0);
    encode_rec(*g.root, sources, noise, out);
    return out;
}

std::vector<double> adrs_bec_profile(const AdrsGraph& g, double eps) {
    if (eps < 0.0 || eps > 1.0) throw argument_error("adrs_bec_profile: eps in [0,1] required");
    return eff_rec(*g.root, eps);
}

std::vector<double> adrs_bms_profile_z(const AdrsGraph& g, const Bms& w, size_t alphabet_cap) {
    w.validate();
    std::vector<Bms> chans = eff_bms_rec(*g.root, w, alphabet_cap);
    std::vector<double> z(chans.size());
    for (size_t i = 0; i < chans.size(); ++i) z[i] = bhattacharyya(chans[i]);
    return z;
}

AdrsDecodeOutcome adrs_sc_decode(const AdrsGraph& g, const std::vector<double>& use_llr,
                                 const std::vector<uint8_t>& frozen) {
    const int64_t nsrc = int64_t{1} << g.n;
    if (static_cast<int64_t>(use_llr.size()) != g.total_uses())
        throw argument_error("adrs_sc_decode: llr vector length != channel slots");
    if (static_cast<int64_t>(frozen.size()) != nsrc) throw argument_error("adrs_sc_decode: frozen mask size");

    ScState st;
    st.use_llr = &use_llr;
    NodeSc root(g.root.get());
    AdrsDecodeOutcome out;
    out.estimates.assign(nsrc, 0);
    for (int64_t i = 0; i < nsrc; ++i) {
        double llr = root.msg(st, i);
        uint8_t bit = 0;
        if (frozen[i]) {
            bit = 0;
        } else if (llr > 0.0) {
            bit = 0;
        } else if (llr < 0.0) {
            bit = 1;
        } else {
            out.failed = true;
            bit = 0;
        }
        out.estimates[i] = bit;
        root.set_hard(st, i, bit);
    }
    out.ops = st.ops;
    return out;
}

}  // namespace sparsegen
