// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "peelwave/benchlab.hpp"
#include "peelwave/configfile.hpp"
#include "peelwave/detmap.hpp"
#include "peelwave/errors.hpp"
#include "peelwave/ggd.hpp"
#include "peelwave/peeling.hpp"
#include "peelwave/textio.hpp"
#include "peelwave/wavelet.hpp"

namespace peelwave::cli {

// Exit codes: 0 success, 2 validation/config, 3 solver non-convergence,
// 4 I/O. Help/version exit 0.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

namespace detail {

inline std::string out_path(const std::string& out_dir, const std::string& name) {
    if (out_dir.empty() || out_dir == ".") return name;
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / name).string();
}

inline void log_line(const std::string& s) { std::cerr << "[peelwave] " << s << '\n'; }

inline std::vector<double> parse_double_list(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& s : items) out.push_back(std::stod(s));
    return out;
}

// ---- fc-table -------------------------------------------------------------

struct FcTableOptions {
    std::vector<double> u_list = {0.1, 0.5, 1.0, 2.0, 3.0, 4.0};
    std::string out;
    std::string out_dir = ".";
};

inline int cmd_fc_table(const FcTableOptions& opt) {
    std::ostringstream os;
    os << "# peelwave fc-table\n# u_list = ";
    for (std::size_t i = 0; i < opt.u_list.size(); ++i)
        os << (i ? "," : "") << textio::format_double(opt.u_list[i]);
    os << "\nu,F_c,x_star_c,F_m,status\n";
    bool any_failed = false;
    for (double u : opt.u_list) {
        os << textio::format_double(u) << ',';
        try {
            const detmap::CriticalSolution c = detmap::critical_constant(u);
            os << textio::format_double(c.F_c) << ',' << textio::format_double(c.x_star_c) << ','
               << textio::format_double(detmap::fm_bound(u)) << ",ok\n";
        } catch (const std::exception& e) {
            any_failed = true;
            std::string msg = e.what();
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            os << ",,," << "error: " << msg << "\n";
        }
    }
    const std::string path = opt.out.empty() ? "" : out_path(opt.out_dir, opt.out);
    if (path.empty())
        std::cout << os.str();
    else
        textio::write_text_file(path, os.str());
    log_line("fc-table: " + std::to_string(opt.u_list.size()) + " rows" +
             (path.empty() ? "" : " -> " + path));
    return any_failed ? kExitSolver : kExitOk;
}

// ---- thresholds -----------------------------------------------------------

struct ThresholdsOptions {
    double sigma = 1.0;
    double u = 2.0;
    std::size_t n = 10000;
    std::size_t seeds = 1;
    std::uint64_t base_seed = 42;
    bool log2_iterations = false;
    std::string out;
    std::string out_dir = ".";
};

inline int cmd_thresholds(const ThresholdsOptions& opt) {
    const ggd::GgdParams params = ggd::make_params(opt.sigma, opt.u);
    std::ostringstream os;
    os << "# peelwave thresholds\n# sigma=" << textio::format_double(opt.sigma)
       << " u=" << textio::format_double(opt.u) << " n=" << opt.n << " seeds=" << opt.seeds
       << " base_seed=" << opt.base_seed
       << " log2_iterations=" << (opt.log2_iterations ? "true" : "false") << "\n";
    os << "seed,T_c05,T_c15,T_cm,That_c05,That_c15,That_cm,T_m\n";
    for (std::size_t s = 0; s < opt.seeds; ++s) {
        const std::uint64_t seed = opt.base_seed + s;
        const std::vector<double> coeffs = ggd::sample(params, seed, opt.n);
        const peeling::ThresholdCatalog cat = peeling::threshold_catalog(
            opt.sigma, opt.u, coeffs, opt.n, {opt.log2_iterations});
        os << seed << ',' << textio::format_double(cat.t_c05) << ','
           << textio::format_double(cat.t_c15) << ',' << textio::format_double(cat.t_cm) << ','
           << textio::format_double(*cat.that_c05) << ',' << textio::format_double(*cat.that_c15)
           << ',' << textio::format_double(*cat.that_cm) << ',' << textio::format_double(*cat.t_m)
           << '\n';
    }
    const std::string path = opt.out.empty() ? "" : out_path(opt.out_dir, opt.out);
    if (path.empty())
        std::cout << os.str();
    else
        textio::write_text_file(path, os.str());
    log_line("thresholds: sigma=" + textio::format_double(opt.sigma) +
             " u=" + textio::format_double(opt.u) + " n=" + std::to_string(opt.n) + " seeds=" +
             std::to_string(opt.seeds) + (path.empty() ? "" : " -> " + path));
    return kExitOk;
}

// ---- denoise ---------------------------------------------------------------

struct DenoiseOptions {
    std::string input;
    std::string output = "denoised.csv";
    std::string sidecar = "denoised.meta.json";
    std::string method = "c15";
    double fixed_threshold = 0.0;
    std::string mode = "soft";
    std::optional<double> sigma;
    std::optional<double> u;
    std::string filter = "sym8";
    int levels = -1;
    bool exclude_approx = false;
    std::string dump_coeffs;  // optional JSON dump of the noisy decomposition
    std::string out_dir = ".";
};

inline std::string canonical_method(std::string name) {
    if (name.rfind("peel-", 0) == 0) name = name.substr(5);
    if (name == "c05" || name == "T_c05") return "T_c05";
    if (name == "c15" || name == "T_c15") return "T_c15";
    if (name == "cm" || name == "T_cm") return "T_cm";
    if (name == "hat-c05" || name == "That_c05") return "That_c05";
    if (name == "hat-c15" || name == "That_c15") return "That_c15";
    if (name == "hat-cm" || name == "That_cm") return "That_cm";
    if (name == "m" || name == "T_m") return "T_m";
    if (name == "universal" || name == "sure" || name == "fixed") return name;
    throw std::invalid_argument("unknown method '" + name + "'");
}

inline int cmd_denoise(const DenoiseOptions& opt) {
    const std::string method = canonical_method(opt.method);
    const peeling::ThresholdMode mode = peeling::threshold_mode_from_name(opt.mode);
    const std::vector<double> signal = textio::read_signal(opt.input);
    if (signal.size() < 4 || (signal.size() & (signal.size() - 1)) != 0)
        throw std::invalid_argument("input length " + std::to_string(signal.size()) +
                                    " is not a power of two >= 4");

    const wavelet::FilterPair filter = wavelet::make_filter(opt.filter);
    const std::size_t levels = opt.levels > 0 ? static_cast<std::size_t>(opt.levels)
                                              : wavelet::default_levels(signal.size(), filter);
    const wavelet::WaveletCoeffs coeffs = wavelet::dwt(signal, filter, levels);
    const wavelet::FlatCoeffs flat = wavelet::flatten(coeffs, true);

    const std::size_t approx_size = coeffs.approx.size();
    const std::vector<double> work(
        opt.exclude_approx ? std::vector<double>(flat.values.begin() + approx_size, flat.values.end())
                           : flat.values);

    nlohmann::json meta;
    meta["input"] = opt.input;
    meta["n"] = signal.size();
    meta["filter"] = opt.filter;
    meta["levels"] = levels;
    meta["method"] = method;
    meta["mode"] = opt.mode;
    meta["exclude_approx"] = opt.exclude_approx;
    meta["mu_hat"] = kahan_mean(work);

    double sigma_z, u_z;
    if (opt.sigma && opt.u) {
        sigma_z = *opt.sigma;
        u_z = *opt.u;
        meta["params_source"] = "given";
    } else {
        const ggd::GgdParams fitted = ggd::estimate_params(work);
        sigma_z = fitted.sigma;
        u_z = fitted.u;
        meta["params_source"] = "estimated";
    }
    meta["sigma"] = sigma_z;
    meta["u"] = u_z;

    double threshold = 0.0;
    std::optional<std::size_t> iterations;
    if (method == "fixed") {
        if (!(opt.fixed_threshold >= 0.0))
            throw std::invalid_argument("--threshold must be >= 0 for method 'fixed'");
        threshold = opt.fixed_threshold;
    } else if (method == "universal") {
        threshold = bench::universal_threshold(work.size(), sigma_z);
    } else if (method == "sure") {
        threshold = bench::sure_threshold(work, sigma_z);
    } else {
        const detmap::CriticalSolution crit = detmap::critical_constant(u_z);
        const double f_m = detmap::fm_bound(u_z);
        const auto factor_of = [&](const std::string& name) {
            if (name == "T_c05" || name == "That_c05") return 1.05 * crit.F_c;
            if (name == "T_c15" || name == "That_c15") return 1.15 * crit.F_c;
            return f_m;  // T_cm, That_cm, T_m
        };
        const double F = factor_of(method);
        if (method[0] == 'T' && method.rfind("That", 0) != 0 && method != "T_m") {
            // deterministic catalog entry
            const detmap::ReducedMap m = detmap::make_reduced_map(F, u_z);
            const detmap::SupercriticalStructure s = detmap::supercritical_structure(m, crit);
            threshold = sigma_z * std::sqrt(s.x_star);
        } else if (method == "T_m") {
            peeling::PeelingConfig cfg{F, peeling::StopRule::exact(), work.size() + 2};
            const peeling::PeelingTrace tr = peeling::run_peeling(work, cfg);
            threshold = tr.t_final;
            iterations = tr.iterations_run;
        } else {
            const std::size_t budget = static_cast<std::size_t>(
                std::max(1.0, std::ceil(std::log(static_cast<double>(work.size())))));
            peeling::PeelingConfig cfg{F, peeling::StopRule::fixed(budget), budget};
            const peeling::PeelingTrace tr = peeling::run_peeling(work, cfg);
            threshold = tr.t_final;
            iterations = tr.iterations_run;
        }
        meta["F"] = F;
        meta["F_c"] = crit.F_c;
    }
    meta["threshold"] = threshold;
    if (iterations) meta["iterations"] = *iterations;

    std::vector<double> kept = peeling::apply_threshold(work, threshold, mode);
    std::vector<double> full;
    if (opt.exclude_approx) {
        full.assign(flat.values.begin(), flat.values.begin() + approx_size);
        full.insert(full.end(), kept.begin(), kept.end());
    } else {
        full = std::move(kept);
    }
    const std::vector<double> xhat = wavelet::idwt(wavelet::unflatten(full, flat.layout), filter);

    const std::string out_file = out_path(opt.out_dir, opt.output);
    textio::write_signal(out_file, xhat);
    const std::string meta_file = out_path(opt.out_dir, opt.sidecar);
    textio::write_text_file(meta_file, meta.dump(2) + "\n");

    if (!opt.dump_coeffs.empty()) {
        nlohmann::json dump;
        dump["approx"] = coeffs.approx;
        dump["details"] = coeffs.details;
        dump["layout"] = {{"original_length", flat.layout.original_length},
                          {"levels", flat.layout.levels},
                          {"filter", flat.layout.filter_name},
                          {"include_approx", flat.layout.include_approx},
                          {"block_sizes", flat.layout.block_sizes}};
        textio::write_text_file(out_path(opt.out_dir, opt.dump_coeffs), dump.dump(2) + "\n");
    }

    log_line("denoise: " + opt.input + " method=" + method + " threshold=" +
             textio::format_double(threshold) + " -> " + out_file);
    return kExitOk;
}

// ---- bench / converge -------------------------------------------------------

struct BenchOptions {
    std::string config;
    std::string out_dir = ".";
    std::optional<std::size_t> workers;
    std::string format = "both";  // csv|json|both
};

inline int cmd_bench(const BenchOptions& opt) {
    configfile::BenchConfigFile file = configfile::parse_bench_config_file(opt.config);
    std::string csv;
    nlohmann::json all = nlohmann::json::array();
    for (std::size_t i = 0; i < file.runs.size(); ++i) {
        bench::ExperimentConfig cfg = file.runs[i];
        if (opt.workers) cfg.workers = *opt.workers;
        const bench::DenoiseReport report = bench::run_denoise_experiment(cfg);
        const std::string one = bench::denoise_report_csv(report);
        if (i == 0) {
            csv = one;
        } else {
            // keep a single header; append data rows only
            const auto pos = one.find("\nsignal,");
            const auto data = one.find('\n', pos + 1);
            csv += one.substr(data + 1);
        }
        all.push_back(bench::denoise_report_json(report));
        log_line("bench: run " + std::to_string(i + 1) + "/" + std::to_string(file.runs.size()) +
                 " (" + cfg.signal_name + ", n=" + std::to_string(cfg.n) + ", u_n=" +
                 textio::format_double(cfg.noise_shape) + ") done");
    }
    if (opt.format == "csv" || opt.format == "both")
        textio::write_text_file(out_path(opt.out_dir, "report.csv"), csv);
    if (opt.format == "json" || opt.format == "both")
        textio::write_text_file(out_path(opt.out_dir, "report.json"), all.dump(2) + "\n");
    return kExitOk;
}

struct ConvergeOptions {
    std::string config;
    std::string out_dir = ".";
    std::optional<std::size_t> workers;
    std::string format = "both";
};

inline int cmd_converge(const ConvergeOptions& opt) {
    configfile::ConvergeConfig cfg = configfile::parse_converge_config_file(opt.config);
    if (opt.workers) cfg.workers = *opt.workers;
    const bench::ConvergenceTable table = bench::run_convergence_experiment(
        cfg.u, cfg.f_factor, cfg.n_grid, cfg.alpha, cfg.eta, cfg.replications, cfg.base_seed,
        cfg.workers);
    if (opt.format == "csv" || opt.format == "both")
        textio::write_text_file(out_path(opt.out_dir, "converge.csv"),
                                bench::convergence_table_csv(table));
    if (opt.format == "json" || opt.format == "both")
        textio::write_text_file(out_path(opt.out_dir, "converge.json"),
                                bench::convergence_table_json(table).dump(2) + "\n");
    log_line("converge: " + std::to_string(table.rows.size()) + " grid points done");
    return kExitOk;
}

// ---- sample -----------------------------------------------------------------

struct SampleOptions {
    double sigma = 1.0;
    double u = 2.0;
    std::size_t n = 10000;
    std::uint64_t seed = 42;
    std::string out = "sample.csv";
    std::string out_dir = ".";
};

inline int cmd_sample(const SampleOptions& opt) {
    const ggd::GgdParams params = ggd::make_params(opt.sigma, opt.u);
    const std::vector<double> xs = ggd::sample(params, opt.seed, opt.n);
    const std::string path = out_path(opt.out_dir, opt.out);
    textio::write_signal(path, xs);
    log_line("sample: sigma=" + textio::format_double(opt.sigma) + " u=" +
             textio::format_double(opt.u) + " n=" + std::to_string(opt.n) + " seed=" +
             std::to_string(opt.seed) + " -> " + path);
    return kExitOk;
}

}  // namespace detail

/// Entry point shared by the binary and the tests.
inline int run(std::vector<std::string> args) {
    CLI::App app{"peeling wavelet denoising toolkit"};
    app.require_subcommand(1);

    detail::FcTableOptions fc;
    CLI::App* fc_cmd = app.add_subcommand("fc-table", "critical constants table (CSV)");
    fc_cmd->add_option("--u", fc.u_list, "shape parameters")->delimiter(',');
    fc_cmd->add_option("--out", fc.out, "output file (default stdout)");
    fc_cmd->add_option("--out-dir", fc.out_dir, "output directory");

    detail::ThresholdsOptions th;
    CLI::App* th_cmd = app.add_subcommand("thresholds", "seven-threshold catalog per seed (CSV)");
    th_cmd->add_option("--sigma", th.sigma, "GGD sigma")->check(CLI::PositiveNumber);
    th_cmd->add_option("--u", th.u, "GGD shape")->check(CLI::PositiveNumber);
    th_cmd->add_option("--n", th.n, "coefficient count")->check(CLI::PositiveNumber);
    th_cmd->add_option("--seeds", th.seeds, "number of seeds")->check(CLI::PositiveNumber);
    th_cmd->add_option("--seed", th.base_seed, "base seed");
    th_cmd->add_flag("--log2-iterations", th.log2_iterations,
                     "use ceil(log2 N) peeling iterations instead of ceil(ln N)");
    th_cmd->add_option("--out", th.out, "output file (default stdout)");
    th_cmd->add_option("--out-dir", th.out_dir, "output directory");

    detail::DenoiseOptions dn;
    CLI::App* dn_cmd = app.add_subcommand("denoise", "denoise a signal file");
    dn_cmd->add_option("--input", dn.input, "input signal (.csv single column or .json array)")
        ->required();
    dn_cmd->add_option("--output", dn.output, "denoised signal file");
    dn_cmd->add_option("--sidecar", dn.sidecar, "metadata JSON file");
    dn_cmd->add_option("--method", dn.method,
                       "universal|sure|c05|c15|cm|hat-c05|hat-c15|hat-cm|m|fixed");
    dn_cmd->add_option("--threshold", dn.fixed_threshold, "threshold for method 'fixed'");
    dn_cmd->add_option("--mode", dn.mode, "hard|soft");
    double sigma_in = 0.0, u_in = 0.0;
    CLI::Option* sigma_opt = dn_cmd->add_option("--sigma", sigma_in, "known GGD sigma");
    CLI::Option* u_opt = dn_cmd->add_option("--u", u_in, "known GGD shape");
    dn_cmd->add_option("--filter", dn.filter, "haar|sym8");
    dn_cmd->add_option("--levels", dn.levels, "decomposition depth (default auto)");
    dn_cmd->add_flag("--exclude-approx", dn.exclude_approx,
                     "do not peel/threshold the approximation block");
    dn_cmd->add_option("--dump-coeffs", dn.dump_coeffs, "write the decomposition as JSON");
    dn_cmd->add_option("--out-dir", dn.out_dir, "output directory");

    detail::BenchOptions bn;
    CLI::App* bn_cmd = app.add_subcommand("bench", "denoising benchmark from a config file");
    bn_cmd->add_option("--config", bn.config, "experiment config file")->required();
    bn_cmd->add_option("--out-dir", bn.out_dir, "output directory");
    std::size_t bn_workers = 0;
    CLI::Option* bn_workers_opt = bn_cmd->add_option("--workers", bn_workers, "worker threads");
    bn_cmd->add_option("--format", bn.format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    detail::ConvergeOptions cv;
    CLI::App* cv_cmd = app.add_subcommand("converge", "convergence-rate experiment");
    cv_cmd->add_option("--config", cv.config, "experiment config file")->required();
    cv_cmd->add_option("--out-dir", cv.out_dir, "output directory");
    std::size_t cv_workers = 0;
    CLI::Option* cv_workers_opt = cv_cmd->add_option("--workers", cv_workers, "worker threads");
    cv_cmd->add_option("--format", cv.format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    detail::SampleOptions sm;
    CLI::App* sm_cmd = app.add_subcommand("sample", "draw a GGD sample to a file");
    sm_cmd->add_option("--sigma", sm.sigma, "GGD sigma")->check(CLI::PositiveNumber);
    sm_cmd->add_option("--u", sm.u, "GGD shape")->check(CLI::PositiveNumber);
    sm_cmd->add_option("--n", sm.n, "sample size")->check(CLI::PositiveNumber);
    sm_cmd->add_option("--seed", sm.seed, "seed");
    sm_cmd->add_option("--out", sm.out, "output file");
    sm_cmd->add_option("--out-dir", sm.out_dir, "output directory");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*fc_cmd) return detail::cmd_fc_table(fc);
        if (*th_cmd) return detail::cmd_thresholds(th);
        if (*dn_cmd) {
            if (sigma_opt->count() != u_opt->count())
                throw std::invalid_argument("--sigma and --u must be given together");
            if (sigma_opt->count()) {
                dn.sigma = sigma_in;
                dn.u = u_in;
            }
            return detail::cmd_denoise(dn);
        }
        if (*bn_cmd) {
            if (bn_workers_opt->count()) bn.workers = bn_workers;
            return detail::cmd_bench(bn);
        }
        if (*cv_cmd) {
            if (cv_workers_opt->count()) cv.workers = cv_workers;
            return detail::cmd_converge(cv);
        }
        if (*sm_cmd) return detail::cmd_sample(sm);
    } catch (const convergence_error& e) {
        std::cerr << "error (solver): " << e.what() << '\n';
        return kExitSolver;
    } catch (const estimation_error& e) {
        std::cerr << "error (estimation): " << e.what() << '\n';
        return kExitSolver;
    } catch (const regime_error& e) {
        std::cerr << "error (regime): " << e.what() << '\n';
        return kExitValidation;
    } catch (const config_error& e) {
        std::cerr << "error (config): " << e.what() << '\n';
        return kExitValidation;
    } catch (const io_error& e) {
        std::cerr << "error (io): " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (validation): " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error (validation): " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::overflow_error& e) {
        std::cerr << "error (validation): " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}

inline int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args));
}

}  // namespace peelwave::cli
