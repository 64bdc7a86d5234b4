// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors
//
// Acceptance suite: one criterion per function, one PASS/FAIL line each,
// nonzero exit if anything fails. Tolerances are pinned in the checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "peelwave/benchlab.hpp"
#include "peelwave/cli.hpp"
#include "peelwave/detmap.hpp"
#include "peelwave/ggd.hpp"
#include "peelwave/peeling.hpp"
#include "peelwave/rng.hpp"
#include "peelwave/wavelet.hpp"

using namespace peelwave;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome out;
    std::ostringstream os;

    void require(bool ok, const std::string& why) {
        if (!ok) {
            out.pass = false;
            if (!out.detail.empty()) out.detail += "; ";
            out.detail += why;
        }
    }
    void note(const std::string& s) {
        if (!os.str().empty()) os << ", ";
        os << s;
    }
    Outcome finish() {
        if (out.pass) out.detail = os.str();
        return out;
    }
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

// 1. Critical-constant table, absolute tolerance 1e-3, residuals <= 1e-9.
Outcome criterion_fc_table() {
    Check c;
    const double us[] = {0.1, 0.5, 1.0, 2.0, 3.0, 4.0};
    const double expected[] = {4.0215, 2.7830, 2.42537, 2.16169, 2.0472, 1.98181};
    for (int i = 0; i < 6; ++i) {
        const auto sol = detmap::critical_constant(us[i]);
        c.require(std::fabs(sol.F_c - expected[i]) <= 1e-3,
                  "F_c(" + fmt(us[i], 1) + ") = " + fmt(sol.F_c, 5) + " vs " + fmt(expected[i], 5));
        const auto m = detmap::make_reduced_map(sol.F_c, us[i]);
        c.require(std::fabs(detmap::g_value(m, sol.x_star_c) - sol.x_star_c) <= 1e-9,
                  "fixed-point residual too large at u = " + fmt(us[i], 1));
        c.require(std::fabs(detmap::g_derivative(m, sol.x_star_c) - 1.0) <= 1e-9,
                  "slope residual too large at u = " + fmt(us[i], 1));
    }
    c.note("all six F_c within 1e-3, residuals <= 1e-9");
    return c.finish();
}

// 2. F_m dominance over F_c on the grid u in [0.2, 4] step 0.1.
Outcome criterion_fm_dominance() {
    Check c;
    double min_gap = 1e9;
    for (int i = 2; i <= 40; ++i) {
        const double u = i / 10.0;
        const double gap = detmap::fm_bound(u) - detmap::critical_constant(u).F_c;
        min_gap = std::min(min_gap, gap);
        c.require(gap > 0.0, "F_m <= F_c at u = " + fmt(u, 1));
    }
    c.note("min(F_m - F_c) = " + fmt(min_gap, 4) + " over 39 grid points");
    return c.finish();
}

// 3. Universal threshold anchor.
Outcome criterion_universal_anchor() {
    Check c;
    const double t = bench::universal_threshold(10000, 1.0);
    c.require(std::fabs(t - 4.29) <= 0.005, "universal(10000, 1) = " + fmt(t, 5));
    c.note("universal(10000, 1) = " + fmt(t, 4));
    return c.finish();
}

// 4. Transform round-trip and Parseval on 100 random signals.
Outcome criterion_transform() {
    Check c;
    const std::size_t lengths[] = {256, 1024, 4096};
    const char* filters[] = {"haar", "sym8"};
    rng::Xoshiro256PlusPlus gen(20260808);
    double worst_rt = 0.0, worst_parseval = 0.0;
    int cases = 0;
    while (cases < 100) {
        const std::size_t n = lengths[cases % 3];
        const auto filter = wavelet::make_filter(filters[(cases / 3) % 2]);
        const std::size_t levels = 1 + (cases / 6) % 5;
        std::vector<double> x(n);
        for (auto& v : x) v = 2.0 * gen.uniform01() - 1.0;

        const auto coeffs = wavelet::dwt(x, filter, levels);
        const auto back = wavelet::idwt(coeffs, filter);
        double diff2 = 0.0, ref2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff2 += (x[i] - back[i]) * (x[i] - back[i]);
            ref2 += x[i] * x[i];
        }
        const double rt = std::sqrt(diff2 / ref2);
        const double coeff_energy = kahan_sum_squares(wavelet::flatten(coeffs).values);
        const double parseval = std::fabs(coeff_energy - ref2) / ref2;
        worst_rt = std::max(worst_rt, rt);
        worst_parseval = std::max(worst_parseval, parseval);
        ++cases;
    }
    c.require(worst_rt <= 1e-9, "worst round-trip relative error " + fmt(worst_rt, 12));
    c.require(worst_parseval <= 1e-9, "worst Parseval relative error " + fmt(worst_parseval, 12));
    c.note("100 signals, worst round-trip " + fmt(worst_rt * 1e12, 2) + "e-12, worst Parseval " +
           fmt(worst_parseval * 1e12, 2) + "e-12");
    return c.finish();
}

// 5. Supercritical concentration (u = 2, F = 1.15 F_c, alpha = 0.25, eta = 0.5).
Outcome criterion_supercritical() {
    Check c;
    const std::vector<std::size_t> grid = {1 << 10, 1 << 12, 1 << 14};
    const auto table =
        bench::run_convergence_experiment(2.0, 1.15, grid, 0.25, 0.5, 200, 20260808, 4);
    const double f0 = table.rows[0].exceed_frequency;
    const double f1 = table.rows[1].exceed_frequency;
    const double f2 = table.rows[2].exceed_frequency;

    int inversions = 0;
    double worst_inversion = 0.0;
    if (f1 > f0) {
        ++inversions;
        worst_inversion = std::max(worst_inversion, f1 - f0);
    }
    if (f2 > f1) {
        ++inversions;
        worst_inversion = std::max(worst_inversion, f2 - f1);
    }
    c.require(inversions <= 1 && worst_inversion <= 0.02,
              "exceedance not nonincreasing: " + fmt(f0, 3) + ", " + fmt(f1, 3) + ", " +
                  fmt(f2, 3));
    c.require(f2 <= 0.05, "exceedance at N = 2^14 is " + fmt(f2, 3) + " > 0.05");
    c.note("freq = {" + fmt(f0, 3) + ", " + fmt(f1, 3) + ", " + fmt(f2, 3) + "}, n = {" +
           std::to_string(table.rows[0].iterations) + ", " +
           std::to_string(table.rows[1].iterations) + ", " +
           std::to_string(table.rows[2].iterations) + "}");
    return c.finish();
}

// 6. Subcritical collapse (u = 2, F = 0.9 F_c, n = ceil(Q_N)).
Outcome criterion_subcritical() {
    Check c;
    const std::vector<std::size_t> grid = {1 << 14};
    const auto table =
        bench::run_convergence_experiment(2.0, 0.9, grid, 0.25, 0.5, 200, 20260809, 4);
    const double f = table.rows[0].exceed_frequency;
    c.require(f <= 0.05, "P(U_n >= N^-1/4) frequency " + fmt(f, 3) + " > 0.05");
    c.note("freq = " + fmt(f, 3) + " with n = " + std::to_string(table.rows[0].iterations) +
           ", kappa = " + fmt(table.kappa, 4));
    return c.finish();
}

// 7. Threshold consistency: data-driven catalog entries vs deterministic ones.
Outcome criterion_threshold_consistency() {
    Check c;
    std::ostringstream per_u;
    for (double u : {0.5, 1.0, 2.0, 3.0}) {
        const auto det = peeling::threshold_catalog(1.0, u, {}, 0);
        const auto params = ggd::make_params(1.0, u);
        double sum05 = 0.0, sum15 = 0.0, sumcm = 0.0, summ = 0.0;
        const int seeds = 100;
        for (int s = 0; s < seeds; ++s) {
            const auto coeffs =
                ggd::sample(params, 20260810 + static_cast<std::uint64_t>(1000 * u) + s, 10000);
            const auto cat = peeling::threshold_catalog(1.0, u, coeffs, 10000);
            sum05 += *cat.that_c05;
            sum15 += *cat.that_c15;
            sumcm += *cat.that_cm;
            summ += *cat.t_m;
        }
        const double m05 = sum05 / seeds, m15 = sum15 / seeds, mcm = sumcm / seeds,
                     mm = summ / seeds;
        const double d05 = std::fabs(m05 / det.t_c05 - 1.0);
        const double d15 = std::fabs(m15 / det.t_c15 - 1.0);
        const double dcm = std::fabs(mcm / det.t_cm - 1.0);
        const double dm = std::fabs(mm / mcm - 1.0);
        c.require(d05 <= 0.02, "u=" + fmt(u, 1) + ": mean That_c05 off by " + fmt(100 * d05, 2) + "%");
        c.require(d15 <= 0.02, "u=" + fmt(u, 1) + ": mean That_c15 off by " + fmt(100 * d15, 2) + "%");
        c.require(dcm <= 0.02, "u=" + fmt(u, 1) + ": mean That_cm off by " + fmt(100 * dcm, 2) + "%");
        c.require(dm <= 0.02, "u=" + fmt(u, 1) + ": T_m vs That_cm off by " + fmt(100 * dm, 2) + "%");
        per_u << (per_u.str().empty() ? "" : " | ") << "u=" << fmt(u, 1) << ": "
              << fmt(100 * d05, 2) << "/" << fmt(100 * d15, 2) << "/" << fmt(100 * dcm, 2)
              << "/" << fmt(100 * dm, 2) << "%";
    }
    c.note("deviations (c05/c15/cm/m): " + per_u.str());
    return c.finish();
}

// 8. Desk-scale reproduction of the published Blocks example.
Outcome criterion_blocks_example() {
    Check c;
    bench::ExperimentConfig cfg;
    cfg.signal_name = "Blocks";
    cfg.n = 2048;
    cfg.noise_shape = 1.0;
    cfg.snr_linear = bench::linear_from_db(10.0);
    cfg.snr_was_db = true;
    cfg.replications = 100;
    cfg.base_seed = 20260811;
    cfg.methods = {"universal", "T_c05"};
    cfg.mode = peeling::ThresholdMode::soft;
    cfg.workers = 4;
    const auto report = bench::run_denoise_experiment(cfg);
    const double uni = report.stats.at("universal").mean;
    const double c05 = report.stats.at("T_c05").mean;
    c.require(std::fabs(uni - 17.7) <= 2.0, "Universal mean " + fmt(uni, 2) + " dB vs 17.7 +- 2");
    c.require(std::fabs(c05 - 18.6) <= 2.0, "T_c05 mean " + fmt(c05, 2) + " dB vs 18.6 +- 2");
    c.require(c05 >= uni - 0.5, "T_c05 (" + fmt(c05, 2) + ") < Universal (" + fmt(uni, 2) +
                                    ") - 0.5 dB");
    c.note("Universal = " + fmt(uni, 2) + " dB, T_c05 = " + fmt(c05, 2) + " dB");
    return c.finish();
}

// 9. Model round-trip at n = 10^6.
Outcome criterion_model_roundtrip() {
    Check c;
    std::ostringstream seen;
    for (double u : {0.5, 1.0, 2.0, 3.0}) {
        const auto p = ggd::make_params(1.0, u);
        const auto fit = ggd::estimate_params(
            ggd::sample(p, 20260812 + static_cast<std::uint64_t>(100 * u), 1000000));
        c.require(std::fabs(fit.sigma - 1.0) <= 0.05,
                  "sigma_hat(" + fmt(u, 1) + ") = " + fmt(fit.sigma, 4));
        c.require(std::fabs(fit.u - u) <= 0.05 * u,
                  "u_hat(" + fmt(u, 1) + ") = " + fmt(fit.u, 4));
        seen << (seen.str().empty() ? "" : ", ") << "u_hat(" << fmt(u, 1) << ") = "
             << fmt(fit.u, 3);
    }
    c.note(seen.str());
    return c.finish();
}

// 10. Byte-identical outputs across reruns and worker counts.
Outcome criterion_reproducibility() {
    Check c;
    const fs::path dir = fs::temp_directory_path() / "peelwave_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "bench.cfg");
        cfg << "signal = Blocks\nn = 512\nnoise_shape = 1\nsnr_db = 10\nreplications = 8\n"
            << "base_seed = 77\nmethods = universal,sure,T_c05,That_c15,T_m\nfilter = sym8\n";
        std::ofstream ccfg(dir / "conv.cfg");
        ccfg << "u = 2\nf_factor = 1.15\nn_grid = 1024,4096\nalpha = 0.25\neta = 0.5\n"
             << "replications = 40\nbase_seed = 13\n";
    }
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };

    int rc = cli::run({"bench", "--config", (dir / "bench.cfg").string(), "--out-dir",
                       (dir / "a").string(), "--workers", "1"});
    rc |= cli::run({"bench", "--config", (dir / "bench.cfg").string(), "--out-dir",
                    (dir / "b").string(), "--workers", "3"});
    rc |= cli::run({"converge", "--config", (dir / "conv.cfg").string(), "--out-dir",
                    (dir / "ca").string(), "--workers", "1"});
    rc |= cli::run({"converge", "--config", (dir / "conv.cfg").string(), "--out-dir",
                    (dir / "cb").string(), "--workers", "4"});
    c.require(rc == 0, "a CLI run failed");
    if (rc == 0) {
        c.require(slurp(dir / "a" / "report.csv") == slurp(dir / "b" / "report.csv"),
                  "bench CSV differs across worker counts");
        c.require(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"),
                  "bench JSON differs across worker counts");
        c.require(slurp(dir / "ca" / "converge.csv") == slurp(dir / "cb" / "converge.csv"),
                  "converge CSV differs across worker counts");
        c.require(slurp(dir / "ca" / "converge.json") == slurp(dir / "cb" / "converge.json"),
                  "converge JSON differs across worker counts");
    }
    c.note("bench and converge outputs byte-identical for 1 vs 3/4 workers");
    return c.finish();
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"critical-constant table", 1.0, criterion_fc_table},
        {"F_m dominance grid", 2.0, criterion_fm_dominance},
        {"universal threshold anchor", 1.0, criterion_universal_anchor},
        {"transform round-trip + Parseval", 5.0, criterion_transform},
        {"supercritical concentration", 120.0, criterion_supercritical},
        {"subcritical collapse", 120.0, criterion_subcritical},
        {"threshold consistency", 120.0, criterion_threshold_consistency},
        {"Blocks denoising example", 60.0, criterion_blocks_example},
        {"model round-trip", 30.0, criterion_model_roundtrip},
        {"reproducibility", 120.0, criterion_reproducibility},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > criteria[i].budget_seconds) {
            out.pass = false;
            out.detail += (out.detail.empty() ? "" : "; ") + std::string("runtime ") +
                          fmt(secs, 1) + " s exceeds budget " +
                          fmt(criteria[i].budget_seconds, 0) + " s";
        }
        if (!out.pass) ++failures;
        std::printf("[%s] %2zu/10 %-34s (%6.2f s) %s\n", out.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, secs, out.detail.c_str());
        std::fflush(stdout);
    }
    if (failures)
        std::printf("%d of 10 acceptance criteria FAILED\n", failures);
    else
        std::printf("all 10 acceptance criteria passed\n");
    return failures == 0 ? 0 : 1;
}
