#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sparsegen {

// Sparse column over GF(2): sorted list of set row indices.
struct SparseColumn {
    int64_t length = 0;
    std::vector<int64_t> support;

    int64_t weight() const { return static_cast<int64_t>(support.size()); }
};

// Column-sparse generator matrix; provenance[j] = index of the unsplit
// column that piece j came from.
struct SparseGenerator {
    int64_t n_rows = 0;
    std::vector<SparseColumn> columns;
    std::vector<int64_t> provenance;

    int64_t n_cols() const { return static_cast<int64_t>(columns.size()); }
};

// Exact rate-loss accounting for the naive split of G2^{kron n}.
struct RateLossLedger {
    int n = 0;
    int n_lub = 0;           // floor(log2 w_ub)
    int64_t w_ub = 0;
    mpq_class gamma;         // exact
    // band_counts[i] = (k, number of columns with weight in (k*w_ub, (k+1)*w_ub])
    std::vector<std::pair<int64_t, mpz_class>> band_counts;
    std::vector<mpq_class> a_terms;
    int64_t k_max = 0;
};

// Split markers for DRS(G2^{kron n}) with w_ub = 2^{n_lub}:
// marker(s, j) <=> s_j = '-' and #(minus signs in s_j..s_n) > n_lub.
struct SplitMarkerSet {
    int n = 0;
    int n_lub = 0;

    // sign sequence packed into an integer, s_1 = MSB, minus = 0 bit
    bool marker(uint32_t sign_seq, int j) const;
    mpz_class total_markers() const;
};

// --- naive splitting (runs of support in row order) ---
std::vector<SparseColumn> simple_split_column(const SparseColumn& v, int64_t w_ub);

RateLossLedger simple_split_gamma_census(int n, int64_t w_ub);
mpq_class simple_split_gamma_tail(int n, int64_t w_ub);
// a_i = 2^i Pr(X(n) >= 1 + i + n_lub); sums to the tail gamma for w_ub = 2^n_lub
std::vector<mpq_class> a_term_decomposition(int n, int n_lub);

// --- decoder-respecting splitting ---
std::vector<SparseColumn> drs_split(const SparseColumn& v, int64_t w_ub);

// Applies drs_split to every column of G2^{kron n}; pieces of column j stay
// contiguous in emission order. Warns via the returned flag when w_ub is not
// a power of two (outside the analyzed regime).
SparseGenerator drs_matrix(int n, int64_t w_ub, bool* non_pow2_warning = nullptr);

// piece count for a column built from n_minus kron-[1,1] and n_plus kron-[0,1]
// steps with w_ub = 2^n_lub
mpz_class drs_piece_count(int n_minus, int n_plus, int n_lub);

// sum_{i=n_lub+1..n} C(n,i) (2^{i-n_lub} - 1) / 2^n
mpq_class drs_gamma_closed(int n, int n_lub);

SplitMarkerSet split_markers(int n, int n_lub);

// sum of 2^j over all marked (s, j); exact
mpz_class adrs_extra_uses(int n, int n_lub);

// helpers shared with tests and the CLI
mpz_class binomial(int n, int k);
// Pr(X(n) >= k) and Pr(X(n) > t) for X ~ Binomial(n, 1/2), exact
mpq_class binom_tail_geq(int n, int k);

// column Bi2De(s) of G2^{kron n} as an explicit sparse column (s_1 = MSB)
SparseColumn g2_column(int n, uint32_t sign_seq);

// sparse generator file: header "n_rows n_cols", then per column:
// weight followed by the row indices
void save_sparse_generator(const SparseGenerator& g, const std::string& path);
SparseGenerator load_sparse_generator(const std::string& path);

}  // namespace sparsegen
