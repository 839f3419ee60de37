#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sparsegen/split.hpp"

namespace sparsegen {

struct AdrsGraph;  // adrs.hpp

enum class CodeMode { plain, simple_split, drs, adrs };

std::string mode_name(CodeMode m);
CodeMode mode_from_name(const std::string& name);

// Per-recursion-level slot layout shared by every block of that size.
// A block on 2^m inputs encodes each half with a child block and combines
// child slots at the channel side: an unsplit child column contributes one
// slot carrying P^Q, a split one contributes its Q-copy pieces then its
// P pieces, and every child slot reappears on the right carrying Q.
struct DrsLevel {
    int m = 0;
    int64_t child_slots = 0;
    int64_t slots = 0;
    int64_t left_total = 0;               // right part starts here; c(t) = left_total + t
    std::vector<uint8_t> split;           // per child slot: column split at this level?
    std::vector<int64_t> left_slot;       // a(t) when unsplit, d(t) (Q piece) when split
    std::vector<int64_t> b_slot;          // P piece when split, -1 otherwise
};

struct EncoderGraph {
    CodeMode mode = CodeMode::plain;
    int n = 0;
    int n_lub = 0;  // meaningful for drs / adrs
    int64_t channel_slots = 0;
    int64_t noise_bits = 0;                       // adrs only
    std::vector<DrsLevel> levels;                 // plain / drs; levels[m] for m = 1..n
    std::shared_ptr<AdrsGraph> adrs;              // adrs only

    int64_t source_bits() const { return int64_t{1} << n; }
};

// markers == nullopt builds the plain polar graph; adrs requires markers.
EncoderGraph build_graph(int n, const std::optional<SplitMarkerSet>& markers, bool adrs);

// Erasure probability of each source bit-channel, indexed by the sign
// sequence integer (s_1 = most significant bit).
std::vector<double> bec_density_evolution(const EncoderGraph& g, double eps);
// Exact-rational variant used by the dominance checks.
std::vector<mpq_class> bec_density_evolution_exact(const EncoderGraph& g, const mpq_class& eps);

std::vector<uint8_t> select_frozen(const std::vector<double>& profile, int64_t k);

struct CodeSpec {
    CodeMode mode = CodeMode::plain;
    int n = 0;
    int64_t w_ub = 0;
    double log2_n_prime = 0.0;  // symbolic n' = 2^{N^{(1-delta)E}}; simulation overrides
    int64_t n_prime_concrete = 1;
    double eps_design = 0.5;
    mpq_class rate;
    std::vector<uint8_t> frozen;  // size 2^n, 1 = frozen (value 0)
    int64_t channel_slots = 0;
    double union_bound_log2 = 0.0;

    int64_t dimension() const;
};

// codeword over channel slots; message length = number of unfrozen bits.
// For adrs graphs the noise argument must have g.noise_bits entries.
std::vector<uint8_t> encode(const CodeSpec& spec, const EncoderGraph& g, const std::vector<uint8_t>& message,
                            const std::vector<uint8_t>& noise = {});

// source-word (length 2^n) -> channel slots, no frozen handling
std::vector<uint8_t> encode_source_word(const EncoderGraph& g, const std::vector<uint8_t>& u,
                                        const std::vector<uint8_t>& noise = {});

// log2( n' * sum_{unfrozen} Z_i ), -inf when everything is frozen
double union_bound_pe(const std::vector<double>& profile, const std::vector<uint8_t>& frozen, double log2_n_prime);

// Eq.-5 sizing: log2 n' = N^{(1-delta) E}
double symbolic_log2_n_prime(int n, double rate_of_polarization, double delta);

CodeSpec design_code(CodeMode mode, int n, int64_t w_ub, double eps, const mpq_class& rate, double delta = 0.1);

void save_code_json(const CodeSpec& spec, const std::string& path);
CodeSpec load_code_json(const std::string& path);

std::string frozen_to_hex(const std::vector<uint8_t>& frozen);
std::vector<uint8_t> frozen_from_hex(const std::string& hex, int64_t nbits);

}  // namespace sparsegen
