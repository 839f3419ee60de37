#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace sparsegen {

struct Bec {
    double erasure = 0.0;
};

// Finite binary-input symmetric channel. Only W(.|0) is stored; W(y|1) is
// W(phi(y)|0), so symmetry holds by construction.
struct Bms {
    std::vector<double> prob_given_zero;
    std::vector<size_t> pairing;  // involution phi on output indices

    size_t alphabet_size() const { return prob_given_zero.size(); }
    double w0(size_t y) const { return prob_given_zero[y]; }
    double w1(size_t y) const { return prob_given_zero[pairing[y]]; }
    void validate() const;  // throws argument_error on a malformed channel
};

using Channel = std::variant<Bec, Bms>;

struct BecPair {
    Bec minus, plus;
};
struct BmsPair {
    Bms minus, plus;
};

double bhattacharyya(const Bec& w);
double bhattacharyya(const Bms& w);
double bhattacharyya(const Channel& w);

double capacity(const Bec& w);
double capacity(const Bms& w);
double capacity(const Channel& w);

BecPair bec_transform(const Bec& a, const Bec& b);

// Exact product-alphabet polar transform. Throws capability_error when the
// combined alphabet would exceed alphabet_cap symbols.
BmsPair bms_transform(const Bms& a, const Bms& b, size_t alphabet_cap = (1u << 20));

// Channel whose output is two independent looks (a, b) at the same input.
Bms bms_parallel(const Bms& a, const Bms& b, size_t alphabet_cap = (1u << 20));

Bms bms_from_bec(const Bec& w);              // 3-symbol embedding, erasure self-paired
Bms bms_bsc(double crossover);               // 2-symbol BSC
Bms bms_noiseless();

// Remark-3 channels: probabilities (6/9,1/9,1/9,1/9) and (5/11,4/11,1/11,1/11)
// with pairing 0<->3, 1<->2.
Bms bms_remark3_w1();
Bms bms_remark3_w2();

// file format: line 1 alphabet size J, line 2 J probabilities W(y|0),
// line 3 J indices giving phi
Bms load_bms_file(const std::string& path);
void save_bms_file(const Bms& w, const std::string& path);

// "bec:0.4", "bsc:0.05", or "file:w.txt"
Channel parse_channel_spec(const std::string& spec);

}  // namespace sparsegen
