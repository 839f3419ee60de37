#include "sparsegen/exponents.hpp"

#include <bit>
#include <cmath>

#include "sparsegen/errors.hpp"
#include "sparsegen/rng.hpp"

namespace sparsegen {

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw argument_error("binary_entropy: p in [0,1] required");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double binary_entropy_inv(double y) {
    if (y < 0.0 || y > 1.0) throw argument_error("binary_entropy_inv: y in [0,1] required");
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double kl_bernoulli(double p1, double p2) {
    if (p1 < 0.0 || p1 > 1.0 || p2 <= 0.0 || p2 >= 1.0) throw argument_error("kl_bernoulli: bad arguments");
    double kl = 0.0;
    if (p1 > 0.0) kl += p1 * std::log2(p1 / p2);
    if (p1 < 1.0) kl += (1.0 - p1) * std::log2((1.0 - p1) / (1.0 - p2));
    return kl;
}

ThresholdConstants threshold_constants() {
    const double log2_3 = std::log2(3.0);
    return {log2_3 - 1.5, log2_3 - 1.0, 1.0 / log2_3};
}

double lambda_xy(double eps_prime, double alpha) {
    if (eps_prime < 0.0 || alpha < 0.0 || eps_prime + alpha > 0.5)
        throw argument_error("lambda_xy: need eps', alpha >= 0 and eps' + alpha <= 1/2");
    return -kl_bernoulli(0.5 + eps_prime + alpha, 0.5) + alpha;
}

double f_alpha_lambda(double alpha, double lam) {
    if (alpha < 0.0 || alpha > 1.0) throw argument_error("f_alpha_lambda: alpha in [0,1] required");
    return binary_entropy(alpha) + alpha - lam - 1.0;
}

ExponentProfile rle_exponents(double alpha) {
    if (alpha <= 0.0 || alpha >= 0.5) throw argument_error("rle_exponents: alpha in (0, 1/2) required");
    ExponentProfile p;
    p.family = ExponentProfile::Family::rle;
    p.alpha = alpha;
    p.exp_gap = alpha / (1.0 - 2.0 * alpha);
    p.exp_comp = 1.0 / (1.0 - 2.0 * alpha);
    p.exp_wcol = 1.0 / (1.0 - 2.0 * alpha);
    return p;
}

ExponentProfile polar_exponents(double lam, double mu) {
    if (mu <= 0.0) throw argument_error("polar_exponents: mu > 0 required");
    if (lam <= 0.0 || lam >= 1.0 / (1.0 + mu))
        throw argument_error("polar_exponents: lambda in (0, 1/(1+mu)) required");
    ExponentProfile p;
    p.family = ExponentProfile::Family::polar;
    p.lam = lam;
    p.mu = mu;
    const double denom = (1.0 - lam * mu) * binary_entropy_inv(1.0 - lam / (1.0 - lam * mu));
    p.exp_gap = lam / denom;
    p.exp_comp = 1.0;
    p.exp_wcol = (std::log2(3.0) - 1.0) / denom;
    return p;
}

double rle_alpha_for_gap(double gap) {
    if (gap <= 0.0) throw argument_error("rle_alpha_for_gap: gap > 0 required");
    return gap / (1.0 + 2.0 * gap);
}

double gallager_e0(const Bms& w, double rho) {
    // E0(rho, uniform) = -ln sum_y [ (W(y|0)^{1/(1+rho)} + W(y|1)^{1/(1+rho)}) / 2 ]^{1+rho}
    const double inv = 1.0 / (1.0 + rho);
    double sum = 0.0;
    for (size_t y = 0; y < w.alphabet_size(); ++y) {
        double t = 0.5 * (std::pow(w.w0(y), inv) + std::pow(w.w1(y), inv));
        sum += std::pow(t, 1.0 + rho);
    }
    return -std::log(sum);
}

RandomCodingResult random_coding_exponent(const Bms& w, double rate_nats) {
    w.validate();
    if (rate_nats < 0.0) throw argument_error("random_coding_exponent: rate >= 0 required");
    RandomCodingResult res;
    const double cap_nats = capacity(w) * std::log(2.0);
    if (rate_nats >= cap_nats) {
        res.rate_at_or_above_capacity = true;
        res.exponent_nats = 0.0;
        return res;
    }
    auto objective = [&](double rho) { return gallager_e0(w, rho) - rho * rate_nats; };
    // coarse grid, then golden-section refinement on the bracketing interval
    const int grid = 512;
    double best_rho = 0.0, best = objective(0.0);
    for (int i = 1; i <= grid; ++i) {
        double rho = static_cast<double>(i) / grid;
        double v = objective(rho);
        if (v > best) {
            best = v;
            best_rho = rho;
        }
    }
    double lo = std::max(0.0, best_rho - 1.0 / grid);
    double hi = std::min(1.0, best_rho + 1.0 / grid);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = objective(c), fd = objective(d);
    while (hi - lo > 1e-12) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = objective(d);
        }
    }
    res.best_rho = 0.5 * (lo + hi);
    res.exponent_nats = std::max(0.0, objective(res.best_rho));
    return res;
}

double min_split_lhs(double pa, double pb, double b00, double b01, double b10, double b11) {
    auto m = [](double x, double y) { return x < y ? x : y; };
    return m(pa * (pb * b00 + (1 - pb) * b01), (1 - pa) * (pb * b10 + (1 - pb) * b11)) +
           m(pa * (pb * b01 + (1 - pb) * b00), (1 - pa) * (pb * b11 + (1 - pb) * b10)) +
           m((1 - pa) * (pb * b00 + (1 - pb) * b01), pa * (pb * b10 + (1 - pb) * b11)) +
           m((1 - pa) * (pb * b01 + (1 - pb) * b00), pa * (pb * b11 + (1 - pb) * b10));
}

double min_split_rhs(double pa, double pb, double b00, double b01, double b10, double b11) {
    (void)pb;
    auto m = [](double x, double y) { return x < y ? x : y; };
    return m(pa * b00 + (1 - pa) * b01, (1 - pa) * b10 + pa * b11) +
           m((1 - pa) * b00 + pa * b01, pa * b10 + (1 - pa) * b11);
}

Sobol6::Sobol6(uint64_t seed) {
    // dimension 1: van der Corput; dimensions 2..6: standard primitive
    // polynomial parameters (s, a, m_i)
    struct Dim {
        int s;
        uint32_t a;
        uint32_t m[4];
    };
    static const Dim dims[5] = {
        {1, 0, {1, 0, 0, 0}},
        {2, 1, {1, 3, 0, 0}},
        {3, 1, {1, 3, 1, 0}},
        {3, 2, {1, 1, 1, 0}},
        {4, 1, {1, 1, 3, 3}},
    };
    for (int k = 0; k < 32; ++k) v_[0][k] = uint32_t{1} << (31 - k);
    for (int d = 1; d < 6; ++d) {
        const Dim& dim = dims[d - 1];
        for (int k = 0; k < dim.s; ++k) v_[d][k] = dim.m[k] << (31 - k);
        for (int k = dim.s; k < 32; ++k) {
            uint32_t v = v_[d][k - dim.s];
            v ^= v >> dim.s;
            for (int i = 1; i < dim.s; ++i)
                if ((dim.a >> (dim.s - 1 - i)) & 1) v ^= v_[d][k - i];
            v_[d][k] = v;
        }
    }
    TrialRng rng(seed, 0x536f626f6cull);
    for (int d = 0; d < 6; ++d) {
        shift_[d] = static_cast<uint32_t>(rng.next_u64() >> 32);
        x_[d] = 0;
    }
}

void Sobol6::next(double out[6]) {
    // Gray-code update; the first point is the pure digital shift
    if (index_ > 0) {
        const int bit = std::countr_zero(index_);
        for (int d = 0; d < 6; ++d) x_[d] ^= v_[d][bit];
    }
    ++index_;
    for (int d = 0; d < 6; ++d) out[d] = (x_[d] ^ shift_[d]) * 0x1.0p-32;
}

IneqCheckReport min_split_inequality_check(int64_t samples, uint64_t seed) {
    if (samples < 0) throw argument_error("min_split_inequality_check: samples >= 0 required");
    IneqCheckReport report;
    auto check = [&](const double p[6]) {
        const double lhs = min_split_lhs(p[0], p[1], p[2], p[3], p[4], p[5]);
        const double rhs = min_split_rhs(p[0], p[1], p[2], p[3], p[4], p[5]);
        const double viol = lhs - rhs;
        ++report.points_tested;
        if (viol > report.max_violation) {
            report.max_violation = viol;
            for (int i = 0; i < 6; ++i) report.worst_point[i] = p[i];
        }
        if (viol > 1e-12) ++report.violations;
    };
    // all corners of the box first
    for (int mask = 0; mask < 64; ++mask) {
        double p[6];
        for (int i = 0; i < 6; ++i) {
            const double hi_val = 1.0;
            const double lo_val = (i < 2) ? 0.5 : 0.0;  // P_a, P_b live in [1/2, 1]
            p[i] = (mask >> i & 1) ? hi_val : lo_val;
        }
        check(p);
    }
    Sobol6 sobol(seed);
    for (int64_t i = 0; i < samples; ++i) {
        double u[6];
        sobol.next(u);
        double p[6];
        p[0] = 0.5 + 0.5 * u[0];
        p[1] = 0.5 + 0.5 * u[1];
        for (int j = 2; j < 6; ++j) p[j] = u[j];
        check(p);
    }
    return report;
}

}  // namespace sparsegen
