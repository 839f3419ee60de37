#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "sparsegen/bitmatrix.hpp"

namespace sparsegen {

// l x l binary polarization kernel with its polarization figures of merit.
struct Kernel {
    BinaryMatrix matrix;
    std::vector<int> partial_distances;  // D_1..D_l
    double rate_of_polarization = 0.0;   // E(G)

    int size() const { return matrix.rows(); }
};

// Exact multiset of column weights of kernel^{kron n}; weights can exceed any
// machine word, so both keys and multiplicities are arbitrary precision.
struct WeightCensus {
    int n = 0;
    std::map<mpz_class, mpz_class> entries;  // weight -> multiplicity

    mpz_class total_mass() const;
    // log2 of the geometric mean column weight
    double log2_geometric_mean() const;
    mpz_class max_weight() const;
};

struct SparsityReport {
    double e_of_g = 0.0;
    double w_gm = 0.0;  // geometric mean column weight of the base kernel
    int w_max = 0;      // max column weight of the base kernel
    double lambda_gm_lo = 0.0, lambda_gm_hi = 0.0;
    double lambda_max_lo = 0.0, lambda_max_hi = 0.0;
    double delta = 0.0, delta_prime = 0.0;
};

// invertible over GF(2) and no column permutation is upper triangular
bool is_polarizing(const BinaryMatrix& m);

// D_i = d_H(row i, span(rows i+1..l)); exhaustive span walk, l <= 24
std::vector<int> partial_distances(const BinaryMatrix& m);

double rate_of_polarization(const Kernel& k);

// Builds a Kernel, computing distances and E(G); throws if not polarizing
// (set require_polarizing = false to house e.g. identity for tests).
Kernel make_kernel(const BinaryMatrix& m, bool require_polarizing = true);

WeightCensus kron_power_census(const Kernel& k, int n);

SparsityReport sparsity_orders(const Kernel& k, double delta);

// [[I, 0], [I, I]] block kernel from the polynomial-column-weight theorem
Kernel make_thm1_kernel(int l);
// all-ones first column, e_1 first row, identity block; lambda_GM -> 0 family
Kernel make_thm25_kernel(int l);

// fraction of columns of G2^{kron n} with weight > threshold, exact
mpq_class heavy_column_fraction(int n, const mpz_class& weight_threshold);

// built-in kernels from the tables
Kernel kernel_g2();
Kernel kernel_g3_star();
Kernel kernel_g4_star();
Kernel kernel_g3_prime();
Kernel kernel_g4_prime();

// text format: first line l, then l rows of l 0/1 digits
Kernel load_kernel_file(const std::string& path);
void save_kernel_file(const Kernel& k, const std::string& path);

}  // namespace sparsegen
