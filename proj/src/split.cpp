#include "sparsegen/split.hpp"

#include <bit>
#include <fstream>

#include "sparsegen/errors.hpp"

namespace sparsegen {

mpz_class binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

mpq_class binom_tail_geq(int n, int k) {
    mpz_class num = 0;
    for (int i = std::max(k, 0); i <= n; ++i) num += binomial(n, i);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(n));
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

std::vector<SparseColumn> simple_split_column(const SparseColumn& v, int64_t w_ub) {
    if (w_ub < 1) throw argument_error("simple_split_column: w_ub >= 1 required");
    const int64_t w = v.weight();
    if (w <= w_ub) return {v};
    std::vector<SparseColumn> pieces;
    for (int64_t start = 0; start < w; start += w_ub) {
        SparseColumn piece;
        piece.length = v.length;
        int64_t end = std::min(start + w_ub, w);
        piece.support.assign(v.support.begin() + start, v.support.begin() + end);
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

namespace {

// DRS-Split on a support slice; offset/len give the vector window. Pieces
// keep absolute row indices, which is the same as zero-padding them back.
void drs_split_rec(const int64_t* support, int64_t count, int64_t offset, int64_t len, int64_t w_ub,
                   int64_t full_length, std::vector<SparseColumn>& out) {
    if (count > w_ub) {
        const int64_t mid = offset + len / 2;
        // support is sorted; find the head/tail boundary
        int64_t head = 0;
        while (head < count && support[head] < mid) ++head;
        const int64_t tail = count - head;
        if (head == 0) {
            drs_split_rec(support, count, mid, len / 2, w_ub, full_length, out);
        } else if (tail == 0) {
            drs_split_rec(support, count, offset, len / 2, w_ub, full_length, out);
        } else {
            drs_split_rec(support + head, tail, mid, len / 2, w_ub, full_length, out);
            drs_split_rec(support, head, offset, len / 2, w_ub, full_length, out);
        }
    } else if (count == 0) {
        // empty set
    } else {
        SparseColumn piece;
        piece.length = full_length;
        piece.support.assign(support, support + count);
        out.push_back(std::move(piece));
    }
}

}  // namespace

std::vector<SparseColumn> drs_split(const SparseColumn& v, int64_t w_ub) {
    if (w_ub < 1) throw argument_error("drs_split: w_ub >= 1 required");
    if (v.length < 1 || (v.length & (v.length - 1)) != 0)
        throw argument_error("drs_split: column length must be a power of two");
    std::vector<SparseColumn> out;
    drs_split_rec(v.support.data(), v.weight(), 0, v.length, w_ub, v.length, out);
    return out;
}

SparseColumn g2_column(int n, uint32_t sign_seq) {
    // support of column Bi2De(s) of G2^{kron n} is { v : v & j == j }
    SparseColumn col;
    col.length = int64_t{1} << n;
    const uint32_t j = sign_seq;
    const uint32_t free_mask = ~j & static_cast<uint32_t>((uint64_t{1} << n) - 1);
    // enumerate supersets of j in increasing order
    uint32_t sub = 0;
    while (true) {
        col.support.push_back(static_cast<int64_t>(j | sub));
        if (sub == free_mask) break;
        sub = (sub - free_mask) & free_mask;  // next subset of free_mask
    }
    return col;
}

SparseGenerator drs_matrix(int n, int64_t w_ub, bool* non_pow2_warning) {
    if (n < 1) throw argument_error("drs_matrix: n >= 1 required");
    if (n > 20) throw capability_error("drs_matrix: n > 20 would materialize over 2^20 columns");
    if (w_ub < 1) throw argument_error("drs_matrix: w_ub >= 1 required");
    if (non_pow2_warning) *non_pow2_warning = (w_ub & (w_ub - 1)) != 0;
    // total support mass is 3^n; refuse sizes that cannot fit in memory
    if (n > 16) throw capability_error("drs_matrix: support mass 3^n too large to materialize; use the encoder graph");

    SparseGenerator g;
    g.n_rows = int64_t{1} << n;
    const uint32_t ncols = uint32_t{1} << n;
    for (uint32_t j = 0; j < ncols; ++j) {
        auto pieces = drs_split(g2_column(n, j), w_ub);
        for (auto& p : pieces) {
            g.columns.push_back(std::move(p));
            g.provenance.push_back(j);
        }
    }
    return g;
}

mpz_class drs_piece_count(int n_minus, int n_plus, int n_lub) {
    if (n_minus < 0 || n_plus < 0 || n_lub < 0) throw argument_error("drs_piece_count: negative argument");
    int e = std::max(0, n_minus - n_lub);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return p;
}

mpq_class drs_gamma_closed(int n, int n_lub) {
    if (n_lub < 0 || n_lub > n) throw argument_error("drs_gamma_closed: 0 <= n_lub <= n required");
    mpz_class num = 0;
    for (int i = n_lub + 1; i <= n; ++i) {
        mpz_class pow2;
        mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(i - n_lub));
        num += binomial(n, i) * (pow2 - 1);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(n));
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

RateLossLedger simple_split_gamma_census(int n, int64_t w_ub) {
    if (n < 1) throw argument_error("gamma census: n >= 1 required");
    if (n > 62) throw capability_error("gamma census: n <= 62 required (2^n column weights)");
    if (w_ub < 1) throw argument_error("gamma census: w_ub >= 1 required");

    RateLossLedger ledger;
    ledger.n = n;
    ledger.w_ub = w_ub;
    ledger.n_lub = 63 - std::countl_zero(static_cast<uint64_t>(w_ub));
    ledger.k_max = (int64_t{1} << n) / w_ub;

    // column weights of G2^{kron n} are 2^k with multiplicity C(n,k)
    std::map<int64_t, mpz_class> bands;  // band index -> count
    mpz_class extra = 0;
    for (int k = 0; k <= n; ++k) {
        const int64_t w = int64_t{1} << k;
        const int64_t band = (w - 1) / w_ub;  // pieces = band + 1
        if (band == 0) continue;
        mpz_class cnt = binomial(n, k);
        bands[band] += cnt;
        extra += cnt * band;
    }
    for (const auto& [band, cnt] : bands) ledger.band_counts.emplace_back(band, cnt);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(n));
    ledger.gamma = mpq_class(extra, den);
    ledger.gamma.canonicalize();
    ledger.a_terms = a_term_decomposition(n, ledger.n_lub);
    return ledger;
}

mpq_class simple_split_gamma_tail(int n, int64_t w_ub) {
    if (n < 1) throw argument_error("gamma tail: n >= 1 required");
    if (n > 62) throw capability_error("gamma tail: n <= 62 required");
    if (w_ub < 1) throw argument_error("gamma tail: w_ub >= 1 required");
    const int64_t k_max = (int64_t{1} << n) / w_ub;
    // Pr(X(n) > log2(k w_ub)) depends on k only through floor(log2(k w_ub)),
    // so group the k_max terms by that value
    mpq_class gamma = 0;
    for (int t = 0; t <= n; ++t) {
        const int64_t lo_kw = int64_t{1} << t;
        const int64_t hi_kw = (int64_t{1} << (t + 1)) - 1;
        const int64_t k_lo = std::max<int64_t>(1, (lo_kw + w_ub - 1) / w_ub);
        const int64_t k_hi = std::min(k_max, hi_kw / w_ub);
        if (k_hi < k_lo) continue;
        gamma += mpq_class(k_hi - k_lo + 1, 1) * binom_tail_geq(n, t + 1);
    }
    return gamma;
}

std::vector<mpq_class> a_term_decomposition(int n, int n_lub) {
    if (n < 1 || n_lub < 0) throw argument_error("a_term_decomposition: n >= 1, n_lub >= 0 required");
    std::vector<mpq_class> terms;
    for (int i = 0; i <= n - n_lub - 1; ++i) {
        mpz_class pow2;
        mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(i));
        terms.push_back(mpq_class(pow2, 1) * binom_tail_geq(n, 1 + i + n_lub));
    }
    return terms;
}

bool SplitMarkerSet::marker(uint32_t sign_seq, int j) const {
    if (j < 1 || j > n) return false;
    const int bit = n - j;  // s_j lives at bit (n-j), minus = 0
    if ((sign_seq >> bit) & 1u) return false;
    const uint32_t suffix = sign_seq & ((uint32_t{1} << (bit + 1)) - 1);
    const int minus_count = (bit + 1) - std::popcount(suffix);
    return minus_count > n_lub;
}

mpz_class SplitMarkerSet::total_markers() const {
    // per column with i minus signs: max(0, i - n_lub) markers
    mpz_class total = 0;
    for (int i = n_lub + 1; i <= n; ++i) total += binomial(n, i) * (i - n_lub);
    return total;
}

SplitMarkerSet split_markers(int n, int n_lub) {
    if (n < 1 || n > 30) throw argument_error("split_markers: 1 <= n <= 30 required");
    if (n_lub < 0) throw argument_error("split_markers: n_lub >= 0 required");
    return SplitMarkerSet{n, n_lub};
}

mpz_class adrs_extra_uses(int n, int n_lub) {
    if (n < 1) throw argument_error("adrs_extra_uses: n >= 1 required");
    if (n_lub < 0) throw argument_error("adrs_extra_uses: n_lub >= 0 required");
    // markers at level j share the suffix condition: #minus(s_{j+1}..s_n) >= n_lub;
    // each adds 2^j channel uses, prefixes of s below j are free
    mpz_class total = 0;
    for (int j = 1; j <= n; ++j) {
        mpz_class suffix_count = 0;
        for (int t = n_lub; t <= n - j; ++t) suffix_count += binomial(n - j, t);
        mpz_class pref;
        mpz_ui_pow_ui(pref.get_mpz_t(), 2, static_cast<unsigned long>(j - 1));
        mpz_class uses;
        mpz_ui_pow_ui(uses.get_mpz_t(), 2, static_cast<unsigned long>(j));
        total += suffix_count * pref * uses;
    }
    return total;
}

void save_sparse_generator(const SparseGenerator& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw argument_error("cannot write sparse generator file: " + path);
    out << g.n_rows << " " << g.n_cols() << "\n";
    for (const auto& col : g.columns) {
        out << col.weight();
        for (int64_t r : col.support) out << " " << r;
        out << "\n";
    }
}

SparseGenerator load_sparse_generator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open sparse generator file: " + path);
    SparseGenerator g;
    int64_t ncols = 0;
    if (!(in >> g.n_rows >> ncols)) throw argument_error("sparse generator file: bad header");
    for (int64_t c = 0; c < ncols; ++c) {
        int64_t w = 0;
        if (!(in >> w)) throw argument_error("sparse generator file: truncated");
        SparseColumn col;
        col.length = g.n_rows;
        col.support.resize(w);
        for (int64_t i = 0; i < w; ++i)
            if (!(in >> col.support[i])) throw argument_error("sparse generator file: truncated support");
        g.columns.push_back(std::move(col));
        g.provenance.push_back(c);
    }
    return g;
}

}  // namespace sparsegen
