#pragma once

#include <cstdint>
#include <vector>

#include "sparsegen/channel.hpp"

namespace sparsegen {

double binary_entropy(double p);                      // bits
double binary_entropy_inv(double y);                  // inverse on [0, 1/2], bisection to 1e-12
double kl_bernoulli(double p1, double p2);            // bits

struct ThresholdConstants {
    double eps_star;       // log2(3) - 3/2
    double lambda_star;    // h_b(2/3) - 1/3 = log2(3) - 1
    double lambda_dagger;  // 1 / log2(3)
};
ThresholdConstants threshold_constants();

// -KL(1/2 + eps' + alpha || 1/2) + alpha; peaks at alpha = 1/6 - eps'
double lambda_xy(double eps_prime, double alpha);

// h_b(alpha) + alpha - lam - 1; sup over alpha at 2/3 equals lambda_star - lam
double f_alpha_lambda(double alpha, double lam);

struct ExponentProfile {
    double exp_gap = 0.0;
    double exp_comp = 0.0;
    double exp_wcol = 0.0;
    enum class Family { rle, polar } family = Family::rle;
    double alpha = 0.0;  // rle parameter
    double lam = 0.0;    // polar parameter
    double mu = 0.0;     // polar scaling exponent
};

ExponentProfile rle_exponents(double alpha);
ExponentProfile polar_exponents(double lam, double mu);

// alpha in (0, 1/2) with alpha/(1-2 alpha) = gap (unique)
double rle_alpha_for_gap(double gap);

struct RandomCodingResult {
    double exponent_nats = 0.0;
    double best_rho = 0.0;
    bool rate_at_or_above_capacity = false;
};
// Gallager E_r(R) in nats over a Bms with uniform inputs
RandomCodingResult random_coding_exponent(const Bms& w, double rate_nats);
double gallager_e0(const Bms& w, double rho);  // nats, uniform inputs

struct IneqCheckReport {
    int64_t points_tested = 0;
    int64_t violations = 0;   // above 1e-12
    double max_violation = 0.0;
    double worst_point[6] = {0, 0, 0, 0, 0, 0};
};
// LHS <= RHS of the four-min vs two-min inequality on quasi-random points
// plus every corner of the (P_a, P_b, B00, B01, B10, B11) box
IneqCheckReport min_split_inequality_check(int64_t samples, uint64_t seed);

// the two sides of the inequality, exposed for spot tests
double min_split_lhs(double pa, double pb, double b00, double b01, double b10, double b11);
double min_split_rhs(double pa, double pb, double b00, double b01, double b10, double b11);

// 6-dimensional Sobol-style quasi-random sequence with a seeded digital shift
class Sobol6 {
public:
    explicit Sobol6(uint64_t seed);
    void next(double out[6]);

private:
    uint32_t v_[6][32];
    uint32_t x_[6];
    uint32_t shift_[6];
    uint64_t index_ = 0;
};

}  // namespace sparsegen
