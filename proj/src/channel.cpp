#include "sparsegen/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sparsegen/errors.hpp"

namespace sparsegen {

namespace {
constexpr double kProbTol = 1e-12;
}

void Bms::validate() const {
    const size_t j = alphabet_size();
    if (j == 0) throw argument_error("bms: empty alphabet");
    if (pairing.size() != j) throw argument_error("bms: pairing size mismatch");
    double sum = 0.0;
    for (size_t y = 0; y < j; ++y) {
        if (prob_given_zero[y] < -kProbTol) throw argument_error("bms: negative probability");
        if (pairing[y] >= j || pairing[pairing[y]] != y) throw argument_error("bms: pairing is not an involution");
        sum += prob_given_zero[y];
    }
    if (std::fabs(sum - 1.0) > kProbTol) throw argument_error("bms: probabilities do not sum to 1");
}

double bhattacharyya(const Bec& w) { return w.erasure; }

double bhattacharyya(const Bms& w) {
    double z = 0.0;
    for (size_t y = 0; y < w.alphabet_size(); ++y) z += std::sqrt(w.w0(y) * w.w1(y));
    return z;
}

double bhattacharyya(const Channel& w) {
    return std::visit([](const auto& c) { return bhattacharyya(c); }, w);
}

double capacity(const Bec& w) { return 1.0 - w.erasure; }

double capacity(const Bms& w) {
    double i = 0.0;
    for (size_t y = 0; y < w.alphabet_size(); ++y) {
        double p0 = w.w0(y), p1 = w.w1(y);
        double py = 0.5 * (p0 + p1);
        if (p0 > 0.0) i += 0.5 * p0 * std::log2(p0 / py);
        if (p1 > 0.0) i += 0.5 * p1 * std::log2(p1 / py);
    }
    return i;
}

double capacity(const Channel& w) {
    return std::visit([](const auto& c) { return capacity(c); }, w);
}

BecPair bec_transform(const Bec& a, const Bec& b) {
    double e1 = a.erasure, e2 = b.erasure;
    return {Bec{e1 + e2 - e1 * e2}, Bec{e1 * e2}};
}

BmsPair bms_transform(const Bms& a, const Bms& b, size_t alphabet_cap) {
    a.validate();
    b.validate();
    const size_t ja = a.alphabet_size(), jb = b.alphabet_size();
    if (ja * jb > alphabet_cap || ja * jb * 2 > alphabet_cap)
        throw capability_error("bms_transform: output alphabet exceeds cap; use BEC mode or merge outputs first");

    // minus: output (y1, y2), W-(y1,y2|x1) = 1/2 sum_x2 a(y1|x1^x2) b(y2|x2)
    Bms minus;
    minus.prob_given_zero.resize(ja * jb);
    minus.pairing.resize(ja * jb);
    for (size_t y1 = 0; y1 < ja; ++y1)
        for (size_t y2 = 0; y2 < jb; ++y2) {
            size_t idx = y1 * jb + y2;
            minus.prob_given_zero[idx] = 0.5 * (a.w0(y1) * b.w0(y2) + a.w1(y1) * b.w1(y2));
            minus.pairing[idx] = a.pairing[y1] * jb + y2;
        }

    // plus: output (y1, y2, x1), W+(y1,y2,x1|x2) = 1/2 a(y1|x1^x2) b(y2|x2);
    // phi flips the revealed bit and maps (y1,y2) -> (y1, phi_b(y2))
    Bms plus;
    plus.prob_given_zero.resize(ja * jb * 2);
    plus.pairing.resize(ja * jb * 2);
    for (size_t y1 = 0; y1 < ja; ++y1)
        for (size_t y2 = 0; y2 < jb; ++y2)
            for (size_t x1 = 0; x1 < 2; ++x1) {
                size_t idx = (y1 * jb + y2) * 2 + x1;
                double ay = (x1 == 0) ? a.w0(y1) : a.w1(y1);
                plus.prob_given_zero[idx] = 0.5 * ay * b.w0(y2);
                plus.pairing[idx] = (y1 * jb + b.pairing[y2]) * 2 + (x1 ^ 1);
            }
    return {std::move(minus), std::move(plus)};
}

Bms bms_parallel(const Bms& a, const Bms& b, size_t alphabet_cap) {
    const size_t ja = a.alphabet_size(), jb = b.alphabet_size();
    if (ja * jb > alphabet_cap)
        throw capability_error("bms_parallel: output alphabet exceeds cap");
    Bms out;
    out.prob_given_zero.resize(ja * jb);
    out.pairing.resize(ja * jb);
    for (size_t y1 = 0; y1 < ja; ++y1)
        for (size_t y2 = 0; y2 < jb; ++y2) {
            size_t idx = y1 * jb + y2;
            out.prob_given_zero[idx] = a.w0(y1) * b.w0(y2);
            out.pairing[idx] = a.pairing[y1] * jb + b.pairing[y2];
        }
    return out;
}

Bms bms_from_bec(const Bec& w) {
    Bms out;
    out.prob_given_zero = {1.0 - w.erasure, w.erasure, 0.0};
    out.pairing = {2, 1, 0};
    return out;
}

Bms bms_bsc(double crossover) {
    if (crossover < 0.0 || crossover > 1.0) throw argument_error("bsc: crossover in [0,1] required");
    Bms out;
    out.prob_given_zero = {1.0 - crossover, crossover};
    out.pairing = {1, 0};
    return out;
}

Bms bms_noiseless() {
    Bms out;
    out.prob_given_zero = {1.0, 0.0};
    out.pairing = {1, 0};
    return out;
}

Bms bms_remark3_w1() {
    Bms out;
    out.prob_given_zero = {6.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0};
    out.pairing = {3, 2, 1, 0};
    return out;
}

Bms bms_remark3_w2() {
    Bms out;
    out.prob_given_zero = {5.0 / 11.0, 4.0 / 11.0, 1.0 / 11.0, 1.0 / 11.0};
    out.pairing = {3, 2, 1, 0};
    return out;
}

Bms load_bms_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open channel file: " + path);
    size_t j = 0;
    if (!(in >> j) || j == 0) throw argument_error("channel file: bad alphabet size");
    Bms w;
    w.prob_given_zero.resize(j);
    w.pairing.resize(j);
    for (size_t y = 0; y < j; ++y)
        if (!(in >> w.prob_given_zero[y])) throw argument_error("channel file: bad probability row");
    for (size_t y = 0; y < j; ++y)
        if (!(in >> w.pairing[y])) throw argument_error("channel file: bad pairing row");
    w.validate();
    return w;
}

void save_bms_file(const Bms& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw argument_error("cannot write channel file: " + path);
    out.precision(17);
    out << w.alphabet_size() << "\n";
    for (size_t y = 0; y < w.alphabet_size(); ++y) out << w.prob_given_zero[y] << (y + 1 == w.alphabet_size() ? "\n" : " ");
    for (size_t y = 0; y < w.alphabet_size(); ++y) out << w.pairing[y] << (y + 1 == w.alphabet_size() ? "\n" : " ");
}

Channel parse_channel_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw argument_error("channel spec: expected kind:value, e.g. bec:0.4");
    std::string kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    if (kind == "bec") {
        double eps = std::stod(rest);
        if (eps < 0.0 || eps > 1.0) throw argument_error("bec erasure must be in [0,1]");
        return Bec{eps};
    }
    if (kind == "bsc") return bms_bsc(std::stod(rest));
    if (kind == "file") return load_bms_file(rest);
    throw argument_error("unknown channel kind: " + kind);
}

}  // namespace sparsegen
