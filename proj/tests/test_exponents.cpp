#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparsegen/channel.hpp"
#include "sparsegen/errors.hpp"
#include "sparsegen/exponents.hpp"
#include "sparsegen/split.hpp"

using namespace sparsegen;

namespace {
// 1-D golden-section maximizer in long double; the extra mantissa bits keep
// the argmax solid to ~1e-10 even where the objective is flat
double golden_max(double lo_in, double hi_in, const std::function<long double(long double)>& f, double* arg) {
    long double lo = lo_in, hi = hi_in;
    const long double gr = 0.5L * (std::sqrt(5.0L) - 1.0L);
    long double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    long double fc = f(c), fd = f(d);
    while (hi - lo > 1e-13L) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    *arg = static_cast<double>(0.5L * (lo + hi));
    return static_cast<double>(f(0.5L * (lo + hi)));
}

long double lambda_xy_ld(long double ep, long double a) {
    const long double p = 0.5L + ep + a;
    long double kl = 0.0L;
    if (p > 0.0L) kl += p * std::log2(2.0L * p);
    if (p < 1.0L) kl += (1.0L - p) * std::log2(2.0L * (1.0L - p));
    return -kl + a;
}

long double f_alpha_lambda_ld(long double a, long double lam) {
    long double h = 0.0L;
    if (a > 0.0L) h -= a * std::log2(a);
    if (a < 1.0L) h -= (1.0L - a) * std::log2(1.0L - a);
    return h + a - lam - 1.0L;
}
}  // namespace

TEST_CASE("threshold identities") {
    ThresholdConstants tc = threshold_constants();
    CHECK(std::fabs(tc.eps_star - (std::log2(3.0) - 1.5)) <= 1e-12);
    CHECK(std::fabs(tc.lambda_star - (binary_entropy(2.0 / 3.0) - 1.0 / 3.0)) <= 1e-12);
    CHECK(std::fabs(tc.lambda_star - (std::log2(3.0) - 1.0)) <= 1e-12);
    CHECK(std::fabs(tc.lambda_dagger - 1.0 / std::log2(3.0)) <= 1e-12);
    CHECK(std::fabs(tc.lambda_star - (0.5 + tc.eps_star)) <= 1e-12);
    CHECK(tc.eps_star == doctest::Approx(0.0849625).epsilon(1e-5));
    CHECK(tc.lambda_dagger == doctest::Approx(0.6309297).epsilon(1e-6));
}

TEST_CASE("lambda_xy: maximizer and worked values") {
    ThresholdConstants tc = threshold_constants();
    double arg = 0.0;
    double best = golden_max(0.0, 0.5, [](long double a) { return lambda_xy_ld(0.0L, a); }, &arg);
    CHECK(std::fabs(arg - 1.0 / 6.0) <= 1e-9);
    CHECK(std::fabs(best - tc.eps_star) <= 1e-9);

    // with eps' > 0 the peak shifts to 1/6 - eps' and drops by eps'
    for (double ep : {0.05, 0.1}) {
        double a2 = 0.0;
        double b2 = golden_max(0.0, 0.5 - ep, [&](long double a) { return lambda_xy_ld(ep, a); }, &a2);
        CHECK(std::fabs(a2 - (1.0 / 6.0 - ep)) <= 1e-9);
        CHECK(std::fabs(b2 - (tc.eps_star - ep)) <= 1e-9);
    }
    CHECK(lambda_xy(0.1, 1.0 / 6.0 - 0.1) == doctest::Approx(tc.eps_star - 0.1).epsilon(1e-9));

    for (double ep : {0.0, 0.1, 0.3}) CHECK(lambda_xy(ep, 0.0) <= 1e-15);  // -KL <= 0
    CHECK_THROWS_AS(lambda_xy(0.3, 0.3), argument_error);
    CHECK_THROWS_AS(lambda_xy(-0.1, 0.0), argument_error);
}

TEST_CASE("f_alpha_lambda: maximizer and boundary values") {
    ThresholdConstants tc = threshold_constants();
    double arg = 0.0;
    double best = golden_max(0.0, 1.0, [](long double a) { return f_alpha_lambda_ld(a, 0.5L); }, &arg);
    CHECK(std::fabs(arg - 2.0 / 3.0) <= 1e-9);
    CHECK(std::fabs(best - (tc.lambda_star - 0.5)) <= 1e-9);
    CHECK(best == doctest::Approx(0.08496).epsilon(1e-4));

    for (double lam : {0.2, 0.7}) {
        CHECK(f_alpha_lambda(0.0, lam) == doctest::Approx(-lam - 1.0).epsilon(1e-12));
        CHECK(f_alpha_lambda(1.0, lam) == doctest::Approx(-lam).epsilon(1e-12));
    }
    CHECK(std::fabs(f_alpha_lambda(2.0 / 3.0, tc.lambda_star)) <= 1e-12);
}

TEST_CASE("concavity on uniform grids") {
    for (double ep : {0.0, 0.05, 0.15}) {
        const int grid = 200;
        const double hi = 0.5 - ep;
        std::vector<double> v;
        for (int i = 0; i <= grid; ++i) v.push_back(lambda_xy(ep, hi * i / grid));
        for (size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] <= 1e-12);
    }
    std::vector<double> f;
    for (int i = 0; i <= 400; ++i) f.push_back(f_alpha_lambda(i / 400.0, 0.3));
    for (size_t i = 1; i + 1 < f.size(); ++i) CHECK(f[i + 1] - 2 * f[i] + f[i - 1] <= 1e-12);
}

TEST_CASE("a-term ledger decays geometrically above eps*") {
    // eps' = 1/8 > eps* + 0.02; n_lub = (1/2 + eps') n integral along n = 0 mod 8
    std::vector<double> maxima;
    for (int n = 24; n <= 56; n += 8) {
        auto terms = a_term_decomposition(n, n * 5 / 8);
        mpq_class best = 0;
        for (const auto& a : terms) best = std::max(best, a);
        maxima.push_back(best.get_d());
    }
    for (size_t i = 1; i < maxima.size(); ++i) CHECK(maxima[i] < maxima[i - 1]);
    CHECK(maxima.back() <= 0.6 * maxima.front());
}

TEST_CASE("rle exponents") {
    ExponentProfile p = rle_exponents(0.25);
    CHECK(p.exp_gap == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.exp_comp == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.exp_wcol == doctest::Approx(2.0).epsilon(1e-12));

    ExponentProfile tiny = rle_exponents(1e-9);
    CHECK(tiny.exp_gap == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(tiny.exp_comp == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(rle_exponents(0.4999999).exp_comp > 1e5);
    CHECK_THROWS_AS(rle_exponents(0.5), argument_error);
    CHECK_THROWS_AS(rle_exponents(0.0), argument_error);
}

TEST_CASE("polar exponents") {
    for (double mu : {3.579, 4.714}) {
        ExponentProfile p = polar_exponents(1e-8, mu);
        CHECK(p.exp_comp == 1.0);
        CHECK(p.exp_gap <= 1e-6);
        CHECK(p.exp_wcol == doctest::Approx((std::log2(3.0) - 1.0) / 0.5).epsilon(1e-3));
        CHECK(p.exp_wcol == doctest::Approx(1.17).epsilon(1e-3));
    }
    CHECK_THROWS_AS(polar_exponents(0.25, 3.579), argument_error);  // above 1/(1+mu)
    CHECK_THROWS_AS(polar_exponents(0.0, 3.579), argument_error);

    // h2 inverse accuracy underpins these curves
    for (double y : {0.01, 0.3, 0.77, 0.9999}) {
        double x = binary_entropy_inv(y);
        CHECK(binary_entropy(x) == doctest::Approx(y).epsilon(1e-10));
        CHECK(x <= 0.5);
    }
}

TEST_CASE("cross-family pairing: unique rle alpha for each polar gap") {
    double prev_gap = 0.0;
    for (double lam = 0.005; lam < 1.0 / (1.0 + 3.579); lam += 0.005) {
        ExponentProfile p = polar_exponents(lam, 3.579);
        CHECK(p.exp_gap > prev_gap);  // monotone in lambda
        prev_gap = p.exp_gap;
        double alpha = rle_alpha_for_gap(p.exp_gap);
        CHECK(alpha > 0.0);
        CHECK(alpha < 0.5);
        CHECK(rle_exponents(alpha).exp_gap == doctest::Approx(p.exp_gap).epsilon(1e-9));
    }
}

TEST_CASE("random coding exponent") {
    RandomCodingResult noiseless = random_coding_exponent(bms_noiseless(), 0.0);
    CHECK(noiseless.exponent_nats == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK_FALSE(noiseless.rate_at_or_above_capacity);

    const Bms bsc = bms_bsc(0.1);
    const double cap_nats = capacity(bsc) * std::log(2.0);
    RandomCodingResult at_cap = random_coding_exponent(bsc, cap_nats);
    CHECK(at_cap.rate_at_or_above_capacity);
    CHECK(at_cap.exponent_nats == 0.0);

    // dense rho-grid oracle at R = 0.2 nats
    RandomCodingResult r = random_coding_exponent(bsc, 0.2);
    double best = 0.0;
    for (int i = 0; i <= 1000000; ++i) {
        double rho = i * 1e-6;
        best = std::max(best, gallager_e0(bsc, rho) - rho * 0.2);
    }
    CHECK(r.exponent_nats == doctest::Approx(best).epsilon(1e-9));

    // decreasing in rate, hitting 0 at capacity
    double prev = 1e9;
    for (double rate = 0.0; rate < cap_nats; rate += cap_nats / 7) {
        double e = random_coding_exponent(bsc, rate).exponent_nats;
        CHECK(e < prev);
        CHECK(e >= 0.0);
        prev = e;
    }
}

TEST_CASE("min-split inequality: hand-checked points") {
    CHECK(min_split_lhs(0.7, 0.9, 0, 0, 0, 0) == 0.0);
    CHECK(min_split_rhs(0.7, 0.9, 0, 0, 0, 0) == 0.0);
    CHECK(min_split_lhs(1, 1, 1, 0, 0, 1) == 0.0);
    CHECK(min_split_rhs(1, 1, 1, 0, 0, 1) == 1.0);

    IneqCheckReport rep = min_split_inequality_check(20000, 7);
    CHECK(rep.points_tested == 20000 + 64);
    CHECK(rep.violations == 0);
    CHECK(rep.max_violation <= 1e-12);
}

TEST_CASE("sobol sequence: deterministic, in-box, low discrepancy-ish") {
    Sobol6 a(5), b(5), c(6);
    double pa[6], pb[6], pc[6];
    double mean[6] = {0};
    bool differs = false;
    for (int i = 0; i < 4096; ++i) {
        a.next(pa);
        b.next(pb);
        c.next(pc);
        for (int d = 0; d < 6; ++d) {
            CHECK(pa[d] >= 0.0);
            CHECK(pa[d] < 1.0);
            CHECK(pa[d] == pb[d]);
            mean[d] += pa[d];
            if (pa[d] != pc[d]) differs = true;
        }
    }
    CHECK(differs);
    for (int d = 0; d < 6; ++d) CHECK(mean[d] / 4096 == doctest::Approx(0.5).epsilon(0.02));
}
