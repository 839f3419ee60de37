#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsegen/adrs.hpp"
#include "sparsegen/channel.hpp"
#include "sparsegen/csvio.hpp"
#include "sparsegen/decoder.hpp"
#include "sparsegen/errors.hpp"
#include "sparsegen/exponents.hpp"
#include "sparsegen/graph.hpp"
#include "sparsegen/kernel.hpp"
#include "sparsegen/simulate.hpp"
#include "sparsegen/split.hpp"

using namespace sparsegen;

namespace {

int resolve_threads(int cli_threads) {
    if (const char* env = std::getenv("SPARSEGEN_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return cli_threads >= 1 ? cli_threads : 1;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw argument_error("cannot open output file: " + path);
    return file;
}

void stamp(CsvWriter& csv, const std::string& command, const std::string& config) {
    csv.meta("version", kLibraryVersion);
    csv.meta("command", command);
    csv.meta("config", config);
}

std::string rational_str(const mpq_class& q) {
    std::ostringstream os;
    os << q.get_num() << "/" << q.get_den();
    return os.str();
}

Kernel builtin_kernel(const std::string& name) {
    if (name == "g2") return kernel_g2();
    if (name == "g3*" || name == "g3star") return kernel_g3_star();
    if (name == "g4*" || name == "g4star") return kernel_g4_star();
    if (name == "g3'" || name == "g3prime") return kernel_g3_prime();
    if (name == "g4'" || name == "g4prime") return kernel_g4_prime();
    if (name.rfind("thm1:", 0) == 0) return make_thm1_kernel(std::stoi(name.substr(5)));
    if (name.rfind("thm25:", 0) == 0) return make_thm25_kernel(std::stoi(name.substr(6)));
    throw argument_error("unknown builtin kernel: " + name);
}

struct GridSpec {
    double lo = 0.0, hi = 0.0, step = 0.0;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || g.step <= 0.0)
        throw argument_error("grid spec must be lo:hi:step");
    return g;
}

void kernel_analyze_row(CsvWriter& csv, const std::string& label, const Kernel& k, double delta) {
    SparsityReport rep = sparsity_orders(k, delta);
    std::ostringstream dprof;
    for (size_t i = 0; i < k.partial_distances.size(); ++i)
        dprof << k.partial_distances[i] << (i + 1 == k.partial_distances.size() ? "" : " ");
    csv.row({label, std::to_string(k.size()), format_double(rep.e_of_g), dprof.str(),
             format_double(rep.lambda_gm_lo), format_double(rep.lambda_gm_hi), format_double(rep.lambda_max_lo),
             format_double(rep.lambda_max_hi), format_double(rep.w_gm), std::to_string(rep.w_max)});
}

int run(int argc, char** argv) {
    CLI::App app{"sparse generator matrix codes from polar kernels: construction, rate-loss accounting and SC decoding"};
    app.require_subcommand(1);
    app.fallthrough();
    int cli_threads = 1;
    app.add_option("--threads", cli_threads, "worker threads (env SPARSEGEN_THREADS overrides)");

    // ---- kernel analyze ----
    auto* kernel_cmd = app.add_subcommand("kernel", "kernel analysis");
    auto* analyze = kernel_cmd->add_subcommand("analyze", "print E(G), D-profile and sparsity orders as CSV");
    std::string kernel_file, kernel_builtin = "";
    double analyze_delta = 0.0;
    analyze->add_option("--file", kernel_file, "kernel text file (first line l, then l rows of 0/1)");
    analyze->add_option("--builtin", kernel_builtin, "g2, g3*, g4*, g3', g4', thm1:<l>, thm25:<l>");
    analyze->add_option("--delta", analyze_delta, "delta for the sparsity-order upper bounds");
    std::string analyze_out;
    analyze->add_option("--out", analyze_out, "output file (default stdout)");

    // ---- channel z ----
    auto* channel_cmd = app.add_subcommand("channel", "channel analysis");
    auto* zcmd = channel_cmd->add_subcommand("z", "Bhattacharyya parameter and capacity");
    std::string z_file, z_spec;
    zcmd->add_option("--file", z_file, "BMS channel file");
    zcmd->add_option("--spec", z_spec, "channel spec, e.g. bec:0.4 or bsc:0.05");

    // ---- split ----
    auto* split_cmd = app.add_subcommand("split", "split the columns of G2^n and write a sparse generator file");
    std::string split_algo = "drs", split_out;
    int split_n = 0;
    int64_t split_wub = 0;
    split_cmd->add_option("--algo", split_algo, "simple | drs")->check(CLI::IsMember({"simple", "drs"}));
    split_cmd->add_option("--n", split_n, "Kronecker power")->required();
    split_cmd->add_option("--wub", split_wub, "column weight threshold")->required();
    split_cmd->add_option("--out", split_out, "output .sgm path")->required();

    // ---- gamma ----
    auto* gamma_cmd = app.add_subcommand("gamma", "exact rate-loss gamma sweep");
    std::string gamma_algo = "drs";
    std::string gamma_nrange;
    std::string gamma_lambdas, gamma_wubs, gamma_out;
    gamma_cmd->add_option("--algo", gamma_algo, "simple | drs | adrs")
        ->check(CLI::IsMember({"simple", "drs", "adrs"}));
    gamma_cmd->add_option("--n", gamma_nrange, "n or lo:hi range")->required();
    gamma_cmd->add_option("--lambda", gamma_lambdas, "comma list; n_lub = ceil(n*lambda)");
    gamma_cmd->add_option("--wub", gamma_wubs, "comma list of explicit thresholds");
    gamma_cmd->add_option("--out", gamma_out, "output file (default stdout)");

    // ---- build ----
    auto* build_cmd = app.add_subcommand("build", "design a code and write code.json");
    std::string build_mode = "drs", build_out = "code.json";
    int build_n = 10;
    int64_t build_wub = 0;
    double build_eps = 0.5, build_rate = 0.45, build_delta = 0.1;
    build_cmd->add_option("--mode", build_mode, "plain | simple-split | drs | adrs");
    build_cmd->add_option("--n", build_n, "Kronecker power")->required();
    build_cmd->add_option("--wub", build_wub, "column weight threshold (split modes)");
    build_cmd->add_option("--eps", build_eps, "design erasure probability");
    build_cmd->add_option("--rate", build_rate, "code rate");
    build_cmd->add_option("--delta", build_delta, "delta in the symbolic n' sizing");
    build_cmd->add_option("--out", build_out, "output json path");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo block failure rate");
    std::string sim_code, sim_channel = "bec:0.5", sim_out;
    int64_t sim_trials = 10000;
    uint64_t sim_seed = 1;
    sim_cmd->add_option("--code", sim_code, "code.json from build")->required();
    sim_cmd->add_option("--channel", sim_channel, "bec:eps | bsc:p | file:w.txt");
    sim_cmd->add_option("--trials", sim_trials, "number of trials");
    sim_cmd->add_option("--seed", sim_seed, "seed");
    sim_cmd->add_option("--out", sim_out, "output file (default stdout)");

    // ---- exponents ----
    auto* exp_cmd = app.add_subcommand("exponents", "moderate-deviation exponent curves as CSV");
    std::string exp_family = "polar", exp_grid = "0.01:0.21:0.01", exp_out;
    double exp_mu = 3.579;
    exp_cmd->add_option("--family", exp_family, "polar | rle")->check(CLI::IsMember({"polar", "rle"}));
    exp_cmd->add_option("--mu", exp_mu, "scaling exponent (polar family)");
    exp_cmd->add_option("--lambda-grid", exp_grid, "lo:hi:step over lambda (polar) or alpha (rle)");
    exp_cmd->add_option("--csv", exp_out, "output file (default stdout)");

    // ---- thresholds ----
    auto* thr_cmd = app.add_subcommand("thresholds", "print the splitting threshold constants");

    // ---- verify-ineq ----
    auto* ineq_cmd = app.add_subcommand("verify-ineq", "numeric check of the min-split inequality");
    int64_t ineq_samples = 1000000;
    uint64_t ineq_seed = 1;
    ineq_cmd->add_option("--samples", ineq_samples, "quasi-random sample count");
    ineq_cmd->add_option("--seed", ineq_seed, "seed");

    // ---- tables ----
    auto* tables_cmd = app.add_subcommand("tables", "sparsity-order tables for the built-in kernels");
    std::string tables_which = "table2", tables_out;
    tables_cmd->add_option("--which", tables_which, "table2 | table3")
        ->check(CLI::IsMember({"table2", "table3"}));
    tables_cmd->add_option("--out", tables_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);
    const int threads = resolve_threads(cli_threads);

    if (analyze->parsed()) {
        std::ofstream f;
        std::ostream& os = open_output(f, analyze_out);
        CsvWriter csv(os);
        stamp(csv, "kernel analyze",
              "file=" + kernel_file + " builtin=" + kernel_builtin + " delta=" + format_double(analyze_delta));
        csv.header({"kernel", "l", "e_of_g", "d_profile", "lambda_gm_lo", "lambda_gm_hi", "lambda_max_lo",
                    "lambda_max_hi", "w_gm", "w_max"});
        if (!kernel_file.empty()) {
            kernel_analyze_row(csv, kernel_file, load_kernel_file(kernel_file), analyze_delta);
        } else if (!kernel_builtin.empty()) {
            kernel_analyze_row(csv, kernel_builtin, builtin_kernel(kernel_builtin), analyze_delta);
        } else {
            throw argument_error("kernel analyze: provide --file or --builtin");
        }
        return 0;
    }

    if (zcmd->parsed()) {
        Channel w = !z_file.empty() ? Channel{load_bms_file(z_file)} : parse_channel_spec(z_spec);
        CsvWriter csv(std::cout);
        stamp(csv, "channel z", "file=" + z_file + " spec=" + z_spec);
        csv.header({"z", "capacity"});
        csv.row({format_double(bhattacharyya(w)), format_double(capacity(w))});
        return 0;
    }

    if (split_cmd->parsed()) {
        SparseGenerator g;
        if (split_algo == "drs") {
            bool warn = false;
            g = drs_matrix(split_n, split_wub, &warn);
            if (warn) std::cerr << "warning: w_ub is not a power of two; outside the analyzed DRS regime\n";
        } else {
            g.n_rows = int64_t{1} << split_n;
            if (split_n > 16) throw capability_error("split: n <= 16 required to materialize the matrix");
            for (uint32_t j = 0; j < (uint32_t{1} << split_n); ++j) {
                auto pieces = simple_split_column(g2_column(split_n, j), split_wub);
                for (auto& p : pieces) {
                    g.columns.push_back(std::move(p));
                    g.provenance.push_back(j);
                }
            }
        }
        save_sparse_generator(g, split_out);
        std::cout << "# wrote " << g.n_cols() << " columns (" << g.n_rows << " rows) to " << split_out << "\n";
        return 0;
    }

    if (gamma_cmd->parsed()) {
        int n_lo, n_hi;
        if (auto pos = gamma_nrange.find(':'); pos != std::string::npos) {
            n_lo = std::stoi(gamma_nrange.substr(0, pos));
            n_hi = std::stoi(gamma_nrange.substr(pos + 1));
        } else {
            n_lo = n_hi = std::stoi(gamma_nrange);
        }
        std::vector<double> lambdas;
        std::vector<int64_t> wubs;
        {
            std::istringstream is(gamma_lambdas);
            std::string tok;
            while (std::getline(is, tok, ',')) if (!tok.empty()) lambdas.push_back(std::stod(tok));
            std::istringstream is2(gamma_wubs);
            while (std::getline(is2, tok, ',')) if (!tok.empty()) wubs.push_back(std::stoll(tok));
        }
        if (lambdas.empty() && wubs.empty()) throw argument_error("gamma: provide --lambda or --wub");
        std::ofstream f;
        std::ostream& os = open_output(f, gamma_out);
        CsvWriter csv(os);
        stamp(csv, "gamma", "algo=" + gamma_algo + " n=" + gamma_nrange + " lambda=" + gamma_lambdas +
                                " wub=" + gamma_wubs);
        csv.header({"algo", "n", "lambda", "w_ub", "gamma_exact", "gamma"});
        for (int n = n_lo; n <= n_hi; ++n) {
            if (n > 60) throw capability_error("gamma: n <= 60 required");
            auto emit = [&](double lambda, int n_lub, int64_t wub) {
                mpq_class gamma;
                if (gamma_algo == "simple") {
                    gamma = simple_split_gamma_census(n, wub).gamma;
                } else if (gamma_algo == "drs") {
                    gamma = drs_gamma_closed(n, n_lub);
                } else {
                    mpz_class den;
                    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(n));
                    gamma = mpq_class(adrs_extra_uses(n, n_lub), den);
                    gamma.canonicalize();
                }
                csv.row({gamma_algo, std::to_string(n), format_double(lambda), std::to_string(wub),
                         rational_str(gamma), format_double(gamma.get_d())});
            };
            for (double lambda : lambdas) {
                int n_lub = static_cast<int>(std::ceil(n * lambda - 1e-9));
                n_lub = std::max(0, std::min(n, n_lub));
                emit(lambda, n_lub, int64_t{1} << n_lub);
            }
            for (int64_t wub : wubs) {
                int n_lub = 0;
                while ((int64_t{1} << (n_lub + 1)) <= wub) ++n_lub;
                emit(static_cast<double>(n_lub) / n, n_lub, wub);
            }
        }
        return 0;
    }

    if (build_cmd->parsed()) {
        CodeMode mode = mode_from_name(build_mode);
        if (mode != CodeMode::plain && build_wub < 1)
            throw argument_error("build: --wub required for split modes");
        if (mode == CodeMode::drs || mode == CodeMode::adrs) {
            if (build_wub & (build_wub - 1))
                std::cerr << "warning: w_ub is not a power of two; using floor(log2 w_ub) for the markers\n";
        }
        mpq_class rate(build_rate * 1e9, 1e9);
        rate.canonicalize();
        CodeSpec spec = design_code(mode, build_n, build_wub, build_eps, rate, build_delta);
        save_code_json(spec, build_out);
        CsvWriter csv(std::cout);
        stamp(csv, "build", "mode=" + build_mode + " n=" + std::to_string(build_n) + " wub=" +
                                std::to_string(build_wub) + " eps=" + format_double(build_eps) +
                                " rate=" + format_double(build_rate) + " delta=" + format_double(build_delta));
        csv.header({"mode", "n", "w_ub", "dimension", "channel_slots", "log2_n_prime", "union_bound_log2", "out"});
        csv.row({mode_name(spec.mode), std::to_string(spec.n), std::to_string(spec.w_ub),
                 std::to_string(spec.dimension()), std::to_string(spec.channel_slots),
                 format_double(spec.log2_n_prime), format_double(spec.union_bound_log2), build_out});
        return 0;
    }

    if (sim_cmd->parsed()) {
        CodeSpec spec = load_code_json(sim_code);
        Channel channel = parse_channel_spec(sim_channel);
        SimResult res = simulate_block_errors(spec, channel, sim_trials, sim_seed, threads);
        std::ofstream f;
        std::ostream& os = open_output(f, sim_out);
        CsvWriter csv(os);
        stamp(csv, "simulate", "code=" + sim_code + " channel=" + sim_channel + " trials=" +
                                   std::to_string(sim_trials) + " seed=" + std::to_string(sim_seed));
        csv.header({"mode", "n", "wub", "rate", "eps", "trials", "failures", "rate_estimate", "wilson_lo",
                    "wilson_hi", "union_bound_log2"});
        double eps = std::holds_alternative<Bec>(channel) ? std::get<Bec>(channel).erasure : -1.0;
        csv.row({mode_name(spec.mode), std::to_string(spec.n), std::to_string(spec.w_ub),
                 format_double(spec.rate.get_d()), format_double(eps), std::to_string(res.trials),
                 std::to_string(res.failures), format_double(res.rate_estimate), format_double(res.wilson_lo),
                 format_double(res.wilson_hi), format_double(spec.union_bound_log2)});
        return 0;
    }

    if (exp_cmd->parsed()) {
        GridSpec grid = parse_grid(exp_grid);
        std::ofstream f;
        std::ostream& os = open_output(f, exp_out);
        CsvWriter csv(os);
        stamp(csv, "exponents", "family=" + exp_family + " mu=" + format_double(exp_mu) + " grid=" + exp_grid);
        csv.header({"family", "param", "mu", "exp_gap", "exp_comp", "exp_wcol", "matched_rle_alpha"});
        for (double x = grid.lo; x <= grid.hi + 1e-15; x += grid.step) {
            // grid endpoints may overrun the open parameter domain; skip those points
            try {
                ExponentProfile p = exp_family == "polar" ? polar_exponents(x, exp_mu) : rle_exponents(x);
                double matched = exp_family == "polar" ? rle_alpha_for_gap(p.exp_gap) : x;
                csv.row({exp_family, format_double(x), format_double(exp_mu), format_double(p.exp_gap),
                         format_double(p.exp_comp), format_double(p.exp_wcol), format_double(matched)});
            } catch (const argument_error&) {
                continue;
            }
        }
        return 0;
    }

    if (thr_cmd->parsed()) {
        ThresholdConstants tc = threshold_constants();
        CsvWriter csv(std::cout);
        stamp(csv, "thresholds", "");
        csv.header({"eps_star", "lambda_star", "lambda_dagger"});
        csv.row({format_double(tc.eps_star, 15), format_double(tc.lambda_star, 15),
                 format_double(tc.lambda_dagger, 15)});
        return 0;
    }

    if (ineq_cmd->parsed()) {
        IneqCheckReport rep = min_split_inequality_check(ineq_samples, ineq_seed);
        CsvWriter csv(std::cout);
        stamp(csv, "verify-ineq", "samples=" + std::to_string(ineq_samples) + " seed=" + std::to_string(ineq_seed));
        csv.header({"points_tested", "violations", "max_violation"});
        csv.row({std::to_string(rep.points_tested), std::to_string(rep.violations),
                 format_double(rep.max_violation, 6)});
        return rep.violations == 0 ? 0 : 4;
    }

    if (tables_cmd->parsed()) {
        std::ofstream f;
        std::ostream& os = open_output(f, tables_out);
        CsvWriter csv(os);
        stamp(csv, "tables", "which=" + tables_which);
        csv.header({"kernel", "e_of_g", "lambda_gm", "lambda_max"});
        auto emit = [&](const std::string& label, const Kernel& k) {
            SparsityReport rep = sparsity_orders(k, 0.0);
            csv.row({label, format_double(rep.e_of_g), format_double(rep.lambda_gm_lo),
                     format_double(rep.lambda_max_lo)});
        };
        if (tables_which == "table2") {
            emit("g2", kernel_g2());
            emit("g3*", kernel_g3_star());
            emit("g4*", kernel_g4_star());
            // lambda_max for G16* is omitted upstream, and its entries are not listed anywhere
        } else {
            emit("g3'", kernel_g3_prime());
            emit("g4'", kernel_g4_prime());
        }
        return 0;
    }

    throw argument_error("no subcommand selected");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const argument_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const capability_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
