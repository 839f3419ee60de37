#include "sparsegen/kernel.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>

#include "sparsegen/errors.hpp"

namespace sparsegen {

mpz_class WeightCensus::total_mass() const {
    mpz_class total = 0;
    for (const auto& [w, mult] : entries) total += mult;
    return total;
}

double WeightCensus::log2_geometric_mean() const {
    // sum mult * log2(w) / total, with exact big-int weights
    double acc = 0.0;
    double total = 0.0;
    for (const auto& [w, mult] : entries) {
        signed long exp2 = 0;
        double d = mpz_get_d_2exp(&exp2, w.get_mpz_t());
        double lg = std::log2(d) + static_cast<double>(exp2);
        double m = mult.get_d();
        acc += m * lg;
        total += m;
    }
    return acc / total;
}

mpz_class WeightCensus::max_weight() const {
    if (entries.empty()) return 0;
    return entries.rbegin()->first;
}

bool is_polarizing(const BinaryMatrix& m) {
    if (!m.is_square()) throw argument_error("is_polarizing: matrix must be square");
    if (!m.invertible_gf2()) return false;
    return !m.column_permutable_to_upper_triangular();
}

std::vector<int> partial_distances(const BinaryMatrix& m) {
    if (!m.is_square()) throw argument_error("partial_distances: matrix must be square");
    const int l = m.rows();
    if (l > 24) throw capability_error("partial_distances: exhaustive span enumeration supports l <= 24");
    if (!m.invertible_gf2()) throw argument_error("partial_distances: matrix must be invertible over GF(2)");

    std::vector<uint64_t> rows(l);
    for (int r = 0; r < l; ++r) rows[r] = m.row_mask(r);

    std::vector<int> d(l);
    d[l - 1] = std::popcount(rows[l - 1]);
    for (int i = l - 2; i >= 0; --i) {
        const int k = l - 1 - i;  // rows below row i
        // Gray-code walk over the 2^k span elements
        uint64_t cur = rows[i];
        int best = std::popcount(cur);
        const uint64_t count = 1ull << k;
        for (uint64_t g = 1; g < count; ++g) {
            int flip = std::countr_zero(g);
            cur ^= rows[i + 1 + flip];
            best = std::min(best, std::popcount(cur));
        }
        d[i] = best;
    }
    return d;
}

double rate_of_polarization(const Kernel& k) {
    const int l = k.size();
    double sum = 0.0;
    for (int di : k.partial_distances) sum += std::log2(static_cast<double>(di));
    return sum / (l * std::log2(static_cast<double>(l)));
}

Kernel make_kernel(const BinaryMatrix& m, bool require_polarizing) {
    if (require_polarizing && !is_polarizing(m))
        throw argument_error("matrix is not a polarization kernel (singular or column-permutable to upper triangular)");
    Kernel k;
    k.matrix = m;
    k.partial_distances = partial_distances(m);
    k.rate_of_polarization = rate_of_polarization(k);
    return k;
}

WeightCensus kron_power_census(const Kernel& k, int n) {
    if (n < 1) throw argument_error("kron_power_census: n >= 1 required");
    const int l = k.size();
    std::map<mpz_class, mpz_class> base;
    for (int c = 0; c < l; ++c) base[k.matrix.col_weight(c)] += 1;

    // n-fold multiplicative convolution of the base column-weight multiset
    std::map<mpz_class, mpz_class> acc = {{1, 1}};
    for (int i = 0; i < n; ++i) {
        std::map<mpz_class, mpz_class> next;
        for (const auto& [w1, m1] : acc)
            for (const auto& [w2, m2] : base) next[w1 * w2] += m1 * m2;
        acc = std::move(next);
    }
    WeightCensus census;
    census.n = n;
    census.entries = std::move(acc);
    return census;
}

SparsityReport sparsity_orders(const Kernel& k, double delta) {
    if (delta < 0.0 || delta >= 1.0) throw argument_error("sparsity_orders: 0 <= delta < 1 required");
    const int l = k.size();
    double sum_log_w = 0.0;
    double prod_log_w = 0.0;
    int wmax = 0;
    for (int c = 0; c < l; ++c) {
        int w = k.matrix.col_weight(c);
        wmax = std::max(wmax, w);
        sum_log_w += std::log2(static_cast<double>(w)) / std::log2(static_cast<double>(l));
        prod_log_w += std::log2(static_cast<double>(w));
    }
    double sum_log_d = 0.0;
    for (int di : k.partial_distances) sum_log_d += std::log2(static_cast<double>(di)) / std::log2(static_cast<double>(l));

    SparsityReport rep;
    rep.e_of_g = k.rate_of_polarization;
    rep.w_gm = std::exp2(prod_log_w / l);
    rep.w_max = wmax;
    rep.delta = delta;
    rep.delta_prime = delta / (1.0 - delta);
    rep.lambda_gm_lo = sum_log_w / sum_log_d;
    rep.lambda_gm_hi = rep.lambda_gm_lo / (1.0 - delta);
    double num_max = l * std::log2(static_cast<double>(wmax)) / std::log2(static_cast<double>(l));
    rep.lambda_max_lo = num_max / sum_log_d;
    rep.lambda_max_hi = rep.lambda_max_lo / (1.0 - delta);
    return rep;
}

namespace {

// Both constructive families have closed-form partial distances, which keeps
// them usable beyond the exhaustive-enumeration cap; small sizes still go
// through the generic path so the closed forms stay cross-checked by tests.
Kernel kernel_with_known_distances(const BinaryMatrix& m, std::vector<int> distances) {
    if (m.rows() <= 24) {
        Kernel k = make_kernel(m);
        if (k.partial_distances != distances) throw internal_error("closed-form partial distances disagree");
        return k;
    }
    Kernel k;
    k.matrix = m;
    k.partial_distances = std::move(distances);
    k.rate_of_polarization = rate_of_polarization(k);
    return k;
}

}  // namespace

Kernel make_thm1_kernel(int l) {
    if (l < 2 || l % 2 != 0) throw argument_error("make_thm1_kernel: l must be even, l >= 2");
    BinaryMatrix m(l, l);
    const int h = l / 2;
    for (int i = 0; i < h; ++i) {
        m.set(i, i, 1);
        m.set(h + i, i, 1);
        m.set(h + i, h + i, 1);
    }
    std::vector<int> d(l, 2);
    for (int i = 0; i < h; ++i) d[i] = 1;
    return kernel_with_known_distances(m, std::move(d));
}

Kernel make_thm25_kernel(int l) {
    if (l < 2) throw argument_error("make_thm25_kernel: l >= 2 required");
    BinaryMatrix m(l, l);
    m.set(0, 0, 1);
    for (int i = 1; i < l; ++i) {
        m.set(i, 0, 1);
        m.set(i, i, 1);
    }
    std::vector<int> d(l, 2);
    d[0] = 1;
    return kernel_with_known_distances(m, std::move(d));
}

mpq_class heavy_column_fraction(int n, const mpz_class& weight_threshold) {
    if (n < 1) throw argument_error("heavy_column_fraction: n >= 1 required");
    mpz_class num = 0;
    mpz_class binom;
    for (int k = 0; k <= n; ++k) {
        mpz_class w;
        mpz_ui_pow_ui(w.get_mpz_t(), 2, k);
        if (w > weight_threshold) {
            mpz_bin_uiui(binom.get_mpz_t(), n, k);
            num += binom;
        }
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, n);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

Kernel kernel_g2() { return make_kernel(BinaryMatrix::from_rows({{1, 0}, {1, 1}})); }

Kernel kernel_g3_star() {
    return make_kernel(BinaryMatrix::from_rows({{0, 1, 0}, {1, 1, 0}, {1, 0, 1}}));
}

Kernel kernel_g4_star() {
    return make_kernel(BinaryMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}, {1, 1, 1, 1}}));
}

Kernel kernel_g3_prime() {
    return make_kernel(BinaryMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {1, 0, 1}}));
}

Kernel kernel_g4_prime() {
    return make_kernel(BinaryMatrix::from_rows({{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}}));
}

Kernel load_kernel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open kernel file: " + path);
    int l = 0;
    if (!(in >> l) || l < 2) throw argument_error("kernel file: bad size line");
    BinaryMatrix m(l, l);
    for (int r = 0; r < l; ++r)
        for (int c = 0; c < l; ++c) {
            int v;
            if (!(in >> v) || (v != 0 && v != 1)) throw argument_error("kernel file: expected 0/1 entries");
            m.set(r, c, static_cast<uint8_t>(v));
        }
    return make_kernel(m);
}

void save_kernel_file(const Kernel& k, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw argument_error("cannot write kernel file: " + path);
    out << k.size() << "\n" << k.matrix.to_string();
}

}  // namespace sparsegen
