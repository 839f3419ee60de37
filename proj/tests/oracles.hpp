#pragma once

// Test-only brute-force oracles, kept independent of the library paths they
// check: materialized Kronecker powers, direct column-weight counts, and
// sparse matrix-vector encoding.

#include <gmpxx.h>

#include <map>
#include <vector>

#include "sparsegen/bitmatrix.hpp"
#include "sparsegen/rng.hpp"
#include "sparsegen/split.hpp"

namespace oracle {

inline mpq_class q(long num, long den) {
    mpq_class v(num, den);
    v.canonicalize();
    return v;
}

inline std::map<mpz_class, mpz_class> census_by_materializing(const sparsegen::BinaryMatrix& k, int n) {
    sparsegen::BinaryMatrix m = k.kron_power(n);
    std::map<mpz_class, mpz_class> counts;
    for (int c = 0; c < m.cols(); ++c) counts[m.col_weight(c)] += 1;
    return counts;
}

inline sparsegen::SparseColumn column_of(const sparsegen::BinaryMatrix& m, int c) {
    sparsegen::SparseColumn col;
    col.length = m.rows();
    for (int r = 0; r < m.rows(); ++r)
        if (m.at(r, c)) col.support.push_back(r);
    return col;
}

inline std::vector<uint8_t> encode_with_sparse(const sparsegen::SparseGenerator& g,
                                               const std::vector<uint8_t>& u) {
    std::vector<uint8_t> out(g.n_cols(), 0);
    for (int64_t c = 0; c < g.n_cols(); ++c) {
        uint8_t v = 0;
        for (int64_t r : g.columns[c].support) v ^= u[r];
        out[c] = v;
    }
    return out;
}

inline std::vector<uint8_t> random_bits(sparsegen::TrialRng& rng, int64_t n) {
    std::vector<uint8_t> bits(n);
    for (auto& b : bits) b = rng.next_bit();
    return bits;
}

// integer sum of piece supports must reproduce the original column exactly
inline bool pieces_partition_column(const sparsegen::SparseColumn& original,
                                    const std::vector<sparsegen::SparseColumn>& pieces) {
    std::vector<int> counts(original.length, 0);
    for (const auto& p : pieces) {
        if (p.length != original.length) return false;
        for (int64_t r : p.support) counts[r] += 1;
    }
    std::vector<int> expect(original.length, 0);
    for (int64_t r : original.support) expect[r] = 1;
    for (int64_t r = 0; r < original.length; ++r)
        if (counts[r] != expect[r]) return false;
    return true;
}

// sign sequence -> vector built by the kron recursion: v^(i) = v^(i-1) x f
// with f = [1,1] for minus (bit 0) and [0,1] for plus (bit 1)
inline sparsegen::SparseColumn column_from_signs(const std::vector<int>& signs) {
    std::vector<uint8_t> v = {1};
    for (int s : signs) {
        std::vector<uint8_t> next(v.size() * 2, 0);
        for (size_t i = 0; i < v.size(); ++i) {
            if (!v[i]) continue;
            if (s == 0) {
                next[2 * i] = next[2 * i + 1] = 1;  // x [1,1]
            } else {
                next[2 * i + 1] = 1;  // x [0,1]
            }
        }
        v = std::move(next);
    }
    sparsegen::SparseColumn col;
    col.length = static_cast<int64_t>(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i]) col.support.push_back(static_cast<int64_t>(i));
    return col;
}

}  // namespace oracle
