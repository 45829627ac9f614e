// wickshift — command-line driver for the spectral toolbox.
//
// Subcommands:
//   wick-converge   norms + Cauchy certificates of the renormalized square
//   wick-diverge    divergence scans for the sharpness families
//   bilinear-probe  randomized pairing-constant probe
//   strichartz      randomized L^inf_x L^2_T ratio caps
//   observability   Gram spectra and observability constants per level
//   ergodic         shifted ergodic averages against the geometric bound
//
// Every run writes <out>/<command>.csv plus <out>/manifest.json echoing the
// effective configuration, seed, thread count, library version, wall time,
// and the list of produced files. Exit codes: 0 success, 1 usage error,
// 2 invalid configuration or parameters, 3 degenerate observability form.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wickshift/bilinear.hpp"
#include "wickshift/exponents.hpp"
#include "wickshift/fourier.hpp"
#include "wickshift/observability.hpp"
#include "wickshift/optimality.hpp"
#include "wickshift/parallel.hpp"
#include "wickshift/version.hpp"
#include "wickshift/wick.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using wickshift::cd;
using wickshift::FlowParams;
using wickshift::FourierCoeffs;
using wickshift::WickExponents;

namespace {

struct CommonOpts {
    std::string config;
    std::string out = ".";
    std::uint64_t seed = 0;
    int threads = 0;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::invalid_argument("cannot open config file: " + path);
    return json::parse(in);
}

void write_text(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out.good()) throw std::runtime_error("cannot write " + p.string());
    out << body;
}

FourierCoeffs coeffs_from_triples(const json& j) {
    FourierCoeffs a;
    from_json(j, a);
    return a;
}

FourierCoeffs make_initial_data(const json& idcfg, int max_level) {
    const std::string type = idcfg.value("type", "power_decay");
    if (type == "power_decay") {
        const double exponent = idcfg.value("exponent", 0.6);
        FourierCoeffs a;
        for (int n = -max_level; n <= max_level; ++n)
            a.set(n, cd{wickshift::bracket_pow(static_cast<double>(n), -exponent), 0.0});
        return a;
    }
    if (type == "modes") return coeffs_from_triples(idcfg.at("modes"));
    throw std::invalid_argument("initial_data: unknown type '" + type + "'");
}

wickshift::CounterexampleKind parse_kind(const std::string& s) {
    if (s == "time_regularity") return wickshift::CounterexampleKind::time_regularity;
    if (s == "space_regularity") return wickshift::CounterexampleKind::space_regularity;
    if (s == "borderline") return wickshift::CounterexampleKind::borderline;
    throw std::invalid_argument("unknown counterexample kind '" + s + "'");
}

int run_wick_converge(json& cfg, const CommonOpts& opts, const fs::path& outdir,
                      std::vector<std::string>& outputs, json& summary) {
    const FlowParams p(cfg.at("alpha").get<double>());
    const double sigma = cfg.at("sigma").get<double>();
    const auto levels = cfg.at("levels").get<std::vector<int>>();
    const int t_samples = cfg.value("t_samples", 512);
    cfg["t_samples"] = t_samples;

    WickExponents exps = WickExponents::for_theorem(sigma, p);
    if (cfg.contains("s1") || cfg.contains("s2"))
        exps = WickExponents{sigma, cfg.value("s1", exps.s1), cfg.value("s2", exps.s2)};
    cfg["s1"] = exps.s1;
    cfg["s2"] = exps.s2;

    json idcfg = cfg.value("initial_data", json{{"type", "power_decay"}, {"exponent", 0.6}});
    cfg["initial_data"] = idcfg;
    if (levels.empty()) throw std::invalid_argument("wick-converge: need levels");
    const FourierCoeffs a = make_initial_data(idcfg, *std::max_element(levels.begin(), levels.end()));

    const auto report = wickshift::convergence_scan(a, exps, p, levels, t_samples);
    write_text(outdir / "wick-converge.csv", report.to_csv());
    outputs.push_back("wick-converge.csv");
    write_text(outdir / "wick-converge.json", report.to_json().dump(2) + "\n");
    outputs.push_back("wick-converge.json");
    const auto& last = report.rows.back();
    if (last.has_gap) {
        summary["final_gap_upper"] = last.gap_upper;
        if (last.rhs > 0.0) summary["final_ratio"] = last.gap_upper / last.rhs;
    }
    summary["final_sup_upper"] = last.sup_upper;
    (void)opts;
    return 0;
}

int run_wick_diverge(json& cfg, const CommonOpts& opts, const fs::path& outdir,
                     std::vector<std::string>& outputs, json& summary) {
    const auto kind = parse_kind(cfg.at("kind").get<std::string>());
    const FlowParams p(cfg.at("alpha").get<double>());
    const double sigma = cfg.at("sigma").get<double>();
    const double epsilon = cfg.value("epsilon", 0.0);
    const double s2 = cfg.value("s2", 0.0);
    double s1_default = 2.0 * sigma / (p.alpha - 1.0);
    if (kind == wickshift::CounterexampleKind::time_regularity)
        s1_default = (2.0 * sigma - 2.0 * epsilon) / (p.alpha - 1.0);
    const double s1 = cfg.value("s1", s1_default);
    cfg["epsilon"] = epsilon;
    cfg["s1"] = s1;
    cfg["s2"] = s2;
    const auto levels = cfg.at("levels").get<std::vector<int>>();

    const wickshift::CounterexampleSpec spec{kind, sigma, epsilon, s2};
    const WickExponents exps{sigma, s1, s2};
    const auto points = wickshift::divergence_scan(spec, exps, p, levels);
    write_text(outdir / "wick-diverge.csv", wickshift::divergence_csv(kind, points));
    outputs.push_back("wick-diverge.csv");
    summary["first_value"] = points.front().value;
    summary["last_value"] = points.back().value;
    if (points.front().value > 0.0)
        summary["growth_factor"] = points.back().value / points.front().value;
    (void)opts;
    return 0;
}

int run_bilinear_probe(json& cfg, const CommonOpts& opts, const fs::path& outdir,
                       std::vector<std::string>& outputs, json& summary) {
    const FlowParams p(cfg.at("alpha").get<double>());
    const double sigma = cfg.at("sigma").get<double>();
    const int trials = cfg.value("trials", 200);
    cfg["trials"] = trials;

    const auto ratios = wickshift::probe_ratios(sigma, p, trials, opts.seed);
    std::string csv = "seed,trial,ratio\n";
    double max_ratio = 0.0;
    for (int i = 0; i < trials; ++i) {
        csv += std::to_string(opts.seed) + ',' + std::to_string(i) + ',' +
               fmt(ratios[static_cast<std::size_t>(i)]) + '\n';
        max_ratio = std::max(max_ratio, ratios[static_cast<std::size_t>(i)]);
    }
    write_text(outdir / "bilinear-probe.csv", csv);
    outputs.push_back("bilinear-probe.csv");
    summary["max_ratio"] = max_ratio;
    return 0;
}

int run_strichartz(json& cfg, const CommonOpts& opts, const fs::path& outdir,
                   std::vector<std::string>& outputs, json& summary) {
    const auto alphas = cfg.at("alphas").get<std::vector<double>>();
    const double T = cfg.at("T").get<double>();
    const auto max_modes = cfg.at("max_modes").get<std::vector<int>>();
    const int trials = cfg.value("trials", 50);
    cfg["trials"] = trials;

    std::string csv = "alpha,T,maxmode,ratio_cap\n";
    double max_cap = 0.0;
    for (double alpha : alphas) {
        const FlowParams p(alpha);
        for (int mode : max_modes) {
            const double cap = wickshift::strichartz_cap(p, T, mode, trials, opts.seed);
            csv += fmt(alpha) + ',' + fmt(T) + ',' + std::to_string(mode) + ',' +
                   fmt(cap) + '\n';
            max_cap = std::max(max_cap, cap);
        }
    }
    write_text(outdir / "strichartz.csv", csv);
    outputs.push_back("strichartz.csv");
    summary["max_cap"] = max_cap;
    return 0;
}

int run_observability(json& cfg, const CommonOpts& opts, const fs::path& outdir,
                      std::vector<std::string>& outputs, json& summary) {
    const FlowParams p(cfg.value("alpha", 2.0));
    const double T = cfg.value("T", 1.0);
    const auto levels = cfg.value("levels", std::vector<int>{4, 8, 16});
    cfg["alpha"] = p.alpha;
    cfg["T"] = T;
    cfg["levels"] = levels;
    json profile_cfg = cfg.value("profile", json{{"type", "uniform"}});
    cfg["profile"] = profile_cfg;

    const int max_level =
        levels.empty() ? 1 : *std::max_element(levels.begin(), levels.end());
    const std::string type = profile_cfg.value("type", "uniform");
    wickshift::ControlProfile profile = wickshift::ControlProfile::uniform();
    if (type == "uniform") {
        profile = wickshift::ControlProfile::uniform();
    } else if (type == "one_plus_cos") {
        profile = wickshift::ControlProfile::one_plus_cos();
    } else if (type == "arc") {
        profile = wickshift::ControlProfile::arc(profile_cfg.at("beta").get<double>(),
                                                 profile_cfg.at("gamma").get<double>(),
                                                 2 * max_level);
    } else if (type == "modes") {
        profile = wickshift::ControlProfile::from_coeffs(
            coeffs_from_triples(profile_cfg.at("modes")), "custom");
    } else {
        throw std::invalid_argument("observability: unknown profile type '" + type + "'");
    }

    std::string csv = "N,lambda_min,C\n";
    bool any_degenerate = false;
    double min_lambda = std::numeric_limits<double>::infinity();
    for (int N : levels) {
        const auto gram = wickshift::assemble_gram(profile, p, T, N);
        const auto res = wickshift::observability_constant(gram);
        csv += std::to_string(N) + ',' + fmt(res.lambda_min) + ',' + fmt(res.C) + '\n';
        any_degenerate = any_degenerate || res.degenerate;
        min_lambda = std::min(min_lambda, res.lambda_min);
    }
    write_text(outdir / "observability.csv", csv);
    outputs.push_back("observability.csv");
    summary["min_lambda_min"] = min_lambda;
    summary["degenerate"] = any_degenerate;
    (void)opts;
    return any_degenerate ? 3 : 0;
}

int run_ergodic(json& cfg, const CommonOpts& opts, const fs::path& outdir,
                std::vector<std::string>& outputs, json& summary) {
    const double shift = cfg.value("shift", 1.0);
    const int n_max = cfg.value("n_max", 16);
    cfg["shift"] = shift;
    cfg["n_max"] = n_max;
    if (n_max < 1) throw std::invalid_argument("ergodic: need n_max >= 1");
    FourierCoeffs f;
    if (cfg.contains("modes"))
        f = coeffs_from_triples(cfg.at("modes"));
    else {
        f = FourierCoeffs{{0, cd{1.0, 0.0}}, {1, cd{1.0, 0.0}}, {-1, cd{1.0, 0.0}}};
        json triples;
        to_json(triples, f);
        cfg["modes"] = triples;
    }

    std::string csv = "n,residual,bound\n";
    double last_residual = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const FourierCoeffs avg = wickshift::ergodic_average(f, shift, n);
        double resid_sq = 0.0;
        for (const auto& [m, a] : avg.entries())
            if (m != 0) resid_sq += std::norm(a);
        double bound = 0.0;
        for (const auto& [m, a] : f.entries())
            if (m != 0)
                bound += 2.0 / n * std::abs(a) /
                         std::abs(cd{1.0, 0.0} - std::polar(1.0, -m * shift));
        last_residual = std::sqrt(resid_sq);
        csv += std::to_string(n) + ',' + fmt(last_residual) + ',' + fmt(bound) + '\n';
    }
    write_text(outdir / "ergodic.csv", csv);
    outputs.push_back("ergodic.csv");
    summary["final_residual"] = last_residual;
    (void)opts;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wickshift: spectral toolbox for the fractional flow on the circle"};
    app.require_subcommand(1);

    CommonOpts opts;
    const char* descriptions[][2] = {
        {"wick-converge", "norms and Cauchy certificates of the renormalized square"},
        {"wick-diverge", "divergence scans for the sharpness families"},
        {"bilinear-probe", "randomized pairing-constant probe"},
        {"strichartz", "randomized space-time ratio caps"},
        {"observability", "Gram spectra and observability constants"},
        {"ergodic", "shifted ergodic averages against the geometric bound"},
    };
    for (const auto& d : descriptions) {
        CLI::App* sub = app.add_subcommand(d[0], d[1]);
        sub->add_option("--config", opts.config, "JSON configuration file");
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--seed", opts.seed, "base RNG seed");
        sub->add_option("--threads", opts.threads, "worker threads (0 = auto)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    if (opts.threads > 0) wickshift::set_thread_count(opts.threads);
    const std::string command = app.get_subcommands().front()->get_name();
    const auto started = std::chrono::steady_clock::now();

    int rc = 0;
    try {
        json cfg = load_config(opts.config);
        const fs::path outdir(opts.out);
        fs::create_directories(outdir);

        std::vector<std::string> outputs;
        json summary = json::object();
        if (command == "wick-converge")
            rc = run_wick_converge(cfg, opts, outdir, outputs, summary);
        else if (command == "wick-diverge")
            rc = run_wick_diverge(cfg, opts, outdir, outputs, summary);
        else if (command == "bilinear-probe")
            rc = run_bilinear_probe(cfg, opts, outdir, outputs, summary);
        else if (command == "strichartz")
            rc = run_strichartz(cfg, opts, outdir, outputs, summary);
        else if (command == "observability")
            rc = run_observability(cfg, opts, outdir, outputs, summary);
        else if (command == "ergodic")
            rc = run_ergodic(cfg, opts, outdir, outputs, summary);
        else
            return 1;

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        json manifest{{"command", command},       {"config", cfg},
                      {"version", wickshift::version}, {"seed", opts.seed},
                      {"threads", wickshift::thread_count()},
                      {"wall_time_seconds", wall}, {"outputs", outputs}};
        if (!summary.empty()) manifest["summary"] = summary;
        write_text(outdir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const json::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
