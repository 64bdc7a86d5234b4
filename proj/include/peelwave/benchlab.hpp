// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "peelwave/detmap.hpp"
#include "peelwave/errors.hpp"
#include "peelwave/ggd.hpp"
#include "peelwave/kahan.hpp"
#include "peelwave/peeling.hpp"
#include "peelwave/signals.hpp"
#include "peelwave/textio.hpp"
#include "peelwave/wavelet.hpp"

namespace peelwave::bench {

// ---------------------------------------------------------------------------
// Metrics and baseline thresholds
// ---------------------------------------------------------------------------

/// SNR_den = 10 log10( sum x^2 / sum (x - xhat)^2 ) in dB. A perfect
/// reconstruction returns +inf.
inline double snr_den(std::span<const double> x, std::span<const double> xhat) {
    if (x.size() != xhat.size())
        throw std::invalid_argument("bench::snr_den: length mismatch");
    KahanSum num, den;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num.add(x[i] * x[i]);
        const double d = x[i] - xhat[i];
        den.add(d * d);
    }
    if (den.value() == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(num.value() / den.value());
}

/// Donoho-Johnstone universal threshold sigma * sqrt(2 ln N).
inline double universal_threshold(std::size_t n, double sigma) {
    if (n < 2) throw std::domain_error("bench::universal_threshold: N must be >= 2");
    if (!(sigma > 0.0)) throw std::domain_error("bench::universal_threshold: sigma must be > 0");
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

/// Threshold minimizing Stein's unbiased risk estimate for soft thresholding,
///   SURE(t) = N - 2 #{|c_i| <= t} + sum min(c_i^2, t^2)
/// on standardized coefficients; candidates are {0} plus the |c_i|; smallest
/// argmin wins ties. Returns sigma * argmin.
inline double sure_threshold(std::span<const double> coeffs, double sigma) {
    if (coeffs.empty()) throw std::invalid_argument("bench::sure_threshold: empty input");
    if (!(sigma > 0.0)) throw std::domain_error("bench::sure_threshold: sigma must be > 0");

    const std::size_t n = coeffs.size();
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = std::fabs(coeffs[i] / sigma);
    std::sort(a.begin(), a.end());

    std::vector<double> prefix_sq(n + 1, 0.0);
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(a[i] * a[i]);
        prefix_sq[i + 1] = acc.value();
    }
    const auto risk_at = [&](double t, std::size_t count_le) {
        return static_cast<double>(n) - 2.0 * static_cast<double>(count_le) +
               prefix_sq[count_le] + static_cast<double>(n - count_le) * t * t;
    };

    std::size_t zeros = 0;
    while (zeros < n && a[zeros] == 0.0) ++zeros;
    double best_t = 0.0;
    double best_risk = risk_at(0.0, zeros);

    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n && a[i + 1] == a[i]) continue;  // evaluate each distinct value once
        const double t = a[i];
        const double risk = risk_at(t, i + 1);
        if (risk < best_risk) {
            best_risk = risk;
            best_t = t;
        }
    }
    return sigma * best_t;
}

// ---------------------------------------------------------------------------
// Noise protocol
// ---------------------------------------------------------------------------

struct NoiseInjection {
    std::vector<double> noisy;
    std::vector<double> noise;
    double scale = 0.0;  // multiplier applied to the unit-sigma GGD draw
};

/// Add GGD(sigma = 1, u_n) noise to a coefficient vector, rescaled so the
/// realized energy ratio sum(clean^2)/sum(noise^2) equals snr exactly.
inline NoiseInjection add_noise_to_coeffs(std::span<const double> clean, double u_n, double snr,
                                          std::uint64_t seed) {
    if (!(snr > 0.0)) throw std::domain_error("bench::add_noise_to_coeffs: snr must be > 0");
    const double clean_energy = kahan_sum_squares(clean);
    if (clean_energy == 0.0)
        throw std::invalid_argument("bench::add_noise_to_coeffs: clean vector has zero energy");

    const ggd::GgdParams p = ggd::make_params(1.0, u_n);
    NoiseInjection out;
    out.noise = ggd::sample(p, seed, clean.size());
    const double noise_energy = kahan_sum_squares(out.noise);
    out.scale = std::sqrt(clean_energy / (snr * noise_energy));
    out.noisy.resize(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
        out.noise[i] *= out.scale;
        out.noisy[i] = clean[i] + out.noise[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Denoising experiment
// ---------------------------------------------------------------------------

enum class SigmaSource { estimated, oracle };

struct ExperimentConfig {
    std::string signal_name = "Blocks";
    std::size_t n = 2048;
    double snr_linear = 10.0;      // energy ratio; 10 dB when snr_was_db
    bool snr_was_db = false;       // bookkeeping only: how the config spelled it
    double noise_shape = 1.0;      // u_n
    std::size_t replications = 100;
    std::uint64_t base_seed = 42;
    std::vector<std::string> methods = {"universal", "sure", "T_c05", "T_c15", "T_cm"};
    std::string filter = "sym8";
    int levels = -1;               // -1: wavelet::default_levels
    double alpha = 0.25;
    double eta = 0.5;
    peeling::ThresholdMode mode = peeling::ThresholdMode::soft;
    SigmaSource sigma_source = SigmaSource::estimated;
    bool center = false;           // subtract the empirical coefficient mean
    bool exclude_approx = false;   // peel and threshold detail blocks only
    std::size_t workers = 1;

    void validate() const {
        if (replications < 1)
            throw std::invalid_argument("experiment config: replications must be >= 1");
        if (n < 64 || (n & (n - 1)) != 0)
            throw std::invalid_argument("experiment config: n must be a power of two >= 64");
        if (!(noise_shape > 0.0))
            throw std::invalid_argument("experiment config: noise_shape must be > 0");
        if (!(snr_linear > 0.0))
            throw std::invalid_argument("experiment config: snr must be > 0");
        if (methods.empty())
            throw std::invalid_argument("experiment config: methods list is empty");
        if (workers < 1)
            throw std::invalid_argument("experiment config: workers must be >= 1");
    }
};

inline double db_from_linear(double snr) { return 10.0 * std::log10(snr); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

struct Replication {
    std::uint64_t seed = 0;
    double sigma_hat = 0.0;
    double u_hat = 0.0;
    double mu_hat = 0.0;
    double ks_fit = 0.0;  // KS distance of the coefficients to the fitted law; info only
    std::map<std::string, double> threshold;
    std::map<std::string, double> snr_den_db;
};

struct MethodStats {
    double mean = 0.0;
    double stddev = 0.0;
};

struct DenoiseReport {
    ExperimentConfig config;
    std::vector<Replication> replications;
    std::map<std::string, MethodStats> stats;  // per method, over replications
    double mean_sigma_hat = 0.0;
    double mean_u_hat = 0.0;
    double mean_ks_fit = 0.0;
};

/// Kolmogorov-Smirnov distance between the empirical law of xs and the
/// analytic CDF of params. Reported as goodness-of-fit information; no
/// accept/reject decision is attached to it.
inline double ks_distance(std::span<const double> xs, const ggd::GgdParams& params) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = ggd::cdf(params, sorted[i]);
        ks = std::max(ks, std::max(std::fabs(f - static_cast<double>(i) / n),
                                   std::fabs(f - static_cast<double>(i + 1) / n)));
    }
    return ks;
}

namespace detail {

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> m = {"universal", "sure",     "T_c05",
                                               "T_c15",     "T_cm",     "That_c05",
                                               "That_c15",  "That_cm",  "T_m"};
    return m;
}

/// Run fn(0..count) on `workers` threads; indices are claimed atomically and
/// results must be written to per-index slots, so the outcome is identical
/// for any worker count. The first exception (if any) is rethrown.
template <typename Fn>
void run_indexed(std::size_t count, std::size_t workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(workers, count);
    pool.reserve(spawn);
    for (std::size_t w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct PeelSetup {
    detmap::CriticalSolution crit;
    double f_m;
};

inline double method_threshold(const std::string& method, std::span<const double> coeffs,
                               double sigma_hat, double u_hat, double sigma_baseline,
                               std::optional<PeelSetup>& setup, std::size_t log_budget) {
    const auto peel_fixed = [&](double F) {
        peeling::PeelingConfig cfg{F, peeling::StopRule::fixed(log_budget), log_budget};
        return peeling::run_peeling(coeffs, cfg).t_final;
    };
    const auto structure_at = [&](double F) {
        const detmap::ReducedMap m = detmap::make_reduced_map(F, u_hat);
        return detmap::supercritical_structure(m, setup->crit);
    };
    const auto ensure_setup = [&] {
        if (!setup) setup = PeelSetup{detmap::critical_constant(u_hat), detmap::fm_bound(u_hat)};
    };

    if (method == "universal") return universal_threshold(coeffs.size(), sigma_baseline);
    if (method == "sure") return sure_threshold(coeffs, sigma_baseline);
    ensure_setup();
    if (method == "T_c05") return sigma_hat * std::sqrt(structure_at(1.05 * setup->crit.F_c).x_star);
    if (method == "T_c15") return sigma_hat * std::sqrt(structure_at(1.15 * setup->crit.F_c).x_star);
    if (method == "T_cm") return sigma_hat * std::sqrt(structure_at(setup->f_m).x_star);
    if (method == "That_c05") return peel_fixed(1.05 * setup->crit.F_c);
    if (method == "That_c15") return peel_fixed(1.15 * setup->crit.F_c);
    if (method == "That_cm") return peel_fixed(setup->f_m);
    if (method == "T_m") {
        peeling::PeelingConfig cfg{setup->f_m, peeling::StopRule::exact(), coeffs.size() + 2};
        return peeling::run_peeling(coeffs, cfg).t_final;
    }
    throw std::invalid_argument("bench: unknown method '" + method + "'");
}

}  // namespace detail

/// One full replication of the protocol: signal -> dwt -> noise on the
/// coefficients -> estimate (sigma_z, u_z) -> per-method threshold ->
/// threshold -> idwt -> SNR_den.
inline Replication run_denoise_replication(const ExperimentConfig& config,
                                           std::span<const double> clean_signal,
                                           const wavelet::FilterPair& filter,
                                           std::size_t levels, std::uint64_t seed) {
    const wavelet::WaveletCoeffs clean_coeffs = wavelet::dwt(clean_signal, filter, levels);
    const wavelet::FlatCoeffs flat = wavelet::flatten(clean_coeffs, true);
    const NoiseInjection inj =
        add_noise_to_coeffs(flat.values, config.noise_shape, config.snr_linear, seed);

    // Portion the methods operate on; by default everything including approx.
    const std::size_t approx_size = clean_coeffs.approx.size();
    std::vector<double> work(config.exclude_approx
                                 ? std::vector<double>(inj.noisy.begin() + approx_size,
                                                       inj.noisy.end())
                                 : inj.noisy);

    Replication rep;
    rep.seed = seed;
    rep.mu_hat = kahan_mean(work);
    if (config.center)
        for (double& v : work) v -= rep.mu_hat;

    const ggd::GgdParams fitted = ggd::estimate_params(work);
    rep.sigma_hat = fitted.sigma;
    rep.u_hat = fitted.u;
    rep.ks_fit = ks_distance(work, fitted);
    const double sigma_baseline =
        config.sigma_source == SigmaSource::oracle ? inj.scale : fitted.sigma;

    const std::size_t log_budget = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::log(static_cast<double>(work.size())))));

    std::optional<detail::PeelSetup> setup;
    for (const std::string& method : config.methods) {
        const double t = detail::method_threshold(method, work, rep.sigma_hat, rep.u_hat,
                                                  sigma_baseline, setup, log_budget);
        rep.threshold[method] = t;

        std::vector<double> kept = peeling::apply_threshold(work, t, config.mode);
        if (config.center)
            for (double& v : kept) v += rep.mu_hat;
        std::vector<double> full;
        if (config.exclude_approx) {
            full.assign(inj.noisy.begin(), inj.noisy.begin() + approx_size);
            full.insert(full.end(), kept.begin(), kept.end());
        } else {
            full = std::move(kept);
        }
        const wavelet::WaveletCoeffs denoised = wavelet::unflatten(full, flat.layout);
        const std::vector<double> xhat = wavelet::idwt(denoised, filter);
        rep.snr_den_db[method] = snr_den(clean_signal, xhat);
    }
    return rep;
}

inline DenoiseReport run_denoise_experiment(const ExperimentConfig& config) {
    config.validate();
    for (const auto& m : config.methods)
        if (std::find(detail::known_methods().begin(), detail::known_methods().end(), m) ==
            detail::known_methods().end())
            throw std::invalid_argument("bench: unknown method '" + m + "'");

    const std::vector<double> signal = signals::make_benchmark(config.signal_name, config.n);
    const wavelet::FilterPair filter = wavelet::make_filter(config.filter);
    const std::size_t levels = config.levels > 0 ? static_cast<std::size_t>(config.levels)
                                                 : wavelet::default_levels(config.n, filter);

    DenoiseReport report;
    report.config = config;
    report.replications.resize(config.replications);

    detail::run_indexed(config.replications, config.workers, [&](std::size_t r) {
        const std::uint64_t seed = config.base_seed + r;
        try {
            report.replications[r] =
                run_denoise_replication(config, signal, filter, levels, seed);
        } catch (const std::exception& e) {
            throw std::runtime_error("replication with seed " + std::to_string(seed) +
                                     " failed: " + e.what());
        }
    });

    KahanSum sig_acc, u_acc, ks_acc;
    for (const auto& rep : report.replications) {
        sig_acc.add(rep.sigma_hat);
        u_acc.add(rep.u_hat);
        ks_acc.add(rep.ks_fit);
    }
    const double reps = static_cast<double>(config.replications);
    report.mean_sigma_hat = sig_acc.value() / reps;
    report.mean_u_hat = u_acc.value() / reps;
    report.mean_ks_fit = ks_acc.value() / reps;

    for (const auto& method : config.methods) {
        KahanSum sum;
        for (const auto& rep : report.replications) sum.add(rep.snr_den_db.at(method));
        const double mean = sum.value() / reps;
        double stddev = 0.0;
        if (config.replications > 1) {
            KahanSum sq;
            for (const auto& rep : report.replications) {
                const double d = rep.snr_den_db.at(method) - mean;
                sq.add(d * d);
            }
            stddev = std::sqrt(sq.value() / (reps - 1.0));
        }
        report.stats[method] = {mean, stddev};
    }
    return report;
}

// ---------------------------------------------------------------------------
// Convergence-rate experiment
// ---------------------------------------------------------------------------

/// kappa = sup_x g(x)/x for a subcritical map, located on a 10^4-point log
/// grid and refined by golden-section search.
inline double kappa_bound(const detmap::ReducedMap& map) {
    const double x_infl = detmap::inflection_point(map);
    const double lo = std::log(x_infl * 1e-6);
    const double hi = std::log(std::fmax(map.F * map.F, x_infl) * 1e4);
    const auto ratio = [&](double x) { return detmap::g_value(map, x) / x; };

    constexpr int kGrid = 10000;
    double best_log_x = lo;
    double best = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double lx = lo + (hi - lo) * i / kGrid;
        const double v = ratio(std::exp(lx));
        if (v > best) {
            best = v;
            best_log_x = lx;
        }
    }
    const double step = (hi - lo) / kGrid;
    double a = best_log_x - step;
    double b = best_log_x + step;
    constexpr double kInvPhi = 0.61803398874989485;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = ratio(std::exp(c));
    double fd = ratio(std::exp(d));
    for (int i = 0; i < 200 && (b - a) > 1e-13; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = ratio(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = ratio(std::exp(d));
        }
    }
    return std::fmax(best, std::fmax(fc, fd));
}

struct ConvergenceRow {
    std::size_t n_coeffs = 0;
    std::size_t iterations = 0;
    double exceed_frequency = 0.0;  // |U_n - x*| >= N^-alpha (supercritical)
                                    // or U_n >= N^-alpha (subcritical)
    double mean_deviation = 0.0;    // mean |U_n - x*|, or mean U_n
};

struct ConvergenceTable {
    double u = 0.0;
    double f_factor = 0.0;
    double F = 0.0;
    double alpha = 0.0;
    double eta = 0.0;
    std::size_t replications = 0;
    std::uint64_t base_seed = 0;
    detmap::Regime regime = detmap::Regime::supercritical;
    double x_star = 0.0;       // supercritical only
    double contraction = 0.0;  // supercritical only
    double kappa = 0.0;        // subcritical only
    std::vector<ConvergenceRow> rows;
};

/// Monte Carlo check of the geometric-convergence picture: supercritical
/// runs use n = iteration_count(N) and measure |U_n - x*| >= N^-alpha;
/// subcritical runs use n = ceil(Q_N) and measure U_n >= N^-alpha.
inline ConvergenceTable run_convergence_experiment(double u, double f_factor,
                                                   std::span<const std::size_t> n_grid,
                                                   double alpha, double eta,
                                                   std::size_t replications,
                                                   std::uint64_t base_seed,
                                                   std::size_t workers = 1) {
    if (f_factor == 1.0)
        throw regime_error("bench::run_convergence_experiment: the critical case F = F_c "
                           "is out of scope");
    if (!(f_factor > 0.0))
        throw std::domain_error("bench::run_convergence_experiment: F factor must be > 0");
    if (replications < 1 || n_grid.empty())
        throw std::invalid_argument("bench::run_convergence_experiment: empty grid or no "
                                    "replications");

    const detmap::CriticalSolution crit = detmap::critical_constant(u);
    const double F = f_factor * crit.F_c;
    const detmap::ReducedMap map = detmap::make_reduced_map(F, u);
    const ggd::GgdParams params = ggd::make_params(1.0, u);

    ConvergenceTable table;
    table.u = u;
    table.f_factor = f_factor;
    table.F = F;
    table.alpha = alpha;
    table.eta = eta;
    table.replications = replications;
    table.base_seed = base_seed;

    double kappa = 0.0;
    std::optional<detmap::SupercriticalStructure> structure;
    if (f_factor > 1.0) {
        table.regime = detmap::Regime::supercritical;
        structure = detmap::supercritical_structure(map, crit);
        table.x_star = structure->x_star;
        table.contraction = structure->contraction;
    } else {
        table.regime = detmap::Regime::subcritical;
        kappa = kappa_bound(map);
        if (!(kappa > 0.0 && kappa < 1.0))
            throw regime_error("bench::run_convergence_experiment: kappa >= 1, map is not "
                               "subcritical");
        table.kappa = kappa;
    }

    for (std::size_t grid_index = 0; grid_index < n_grid.size(); ++grid_index) {
        const std::size_t n_coeffs = n_grid[grid_index];
        std::size_t iterations;
        if (f_factor > 1.0) {
            iterations = detmap::iteration_count(n_coeffs, structure->contraction, alpha, eta);
        } else {
            const double g_inf = F * F;
            const double q_n = std::fmax(
                1.0 + (alpha * std::log(static_cast<double>(n_coeffs)) + std::log(2.0 * g_inf)) /
                          std::log(1.0 / kappa),
                1.0);
            iterations = static_cast<std::size_t>(std::ceil(q_n));
        }

        const double deviation_gate = std::pow(static_cast<double>(n_coeffs), -alpha);
        std::vector<double> deviations(replications);
        detail::run_indexed(replications, workers, [&](std::size_t r) {
            const std::uint64_t seed = base_seed + grid_index * replications + r;
            const std::vector<double> coeffs = ggd::sample(params, seed, n_coeffs);
            peeling::PeelingConfig cfg{F, peeling::StopRule::fixed(iterations), iterations};
            const peeling::PeelingTrace trace = peeling::run_peeling(coeffs, cfg);
            const double u_n = trace.u_sequence.back();
            deviations[r] = (f_factor > 1.0) ? std::fabs(u_n - table.x_star) : u_n;
        });

        ConvergenceRow row;
        row.n_coeffs = n_coeffs;
        row.iterations = iterations;
        KahanSum dev_sum;
        std::size_t exceed = 0;
        for (double d : deviations) {
            dev_sum.add(d);
            if (d >= deviation_gate) ++exceed;
        }
        row.exceed_frequency = static_cast<double>(exceed) / static_cast<double>(replications);
        row.mean_deviation = dev_sum.value() / static_cast<double>(replications);
        table.rows.push_back(row);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline std::string denoise_report_csv(const DenoiseReport& report) {
    std::ostringstream os;
    const auto& c = report.config;
    os << "# peelwave bench\n";
    os << "# signal=" << c.signal_name << " n=" << c.n
       << " noise_shape=" << textio::format_double(c.noise_shape)
       << " snr_db=" << textio::format_double(db_from_linear(c.snr_linear))
       << " replications=" << c.replications << " base_seed=" << c.base_seed
       << " filter=" << c.filter << " mode=" << (c.mode == peeling::ThresholdMode::soft ? "soft" : "hard")
       << " sigma_source=" << (c.sigma_source == SigmaSource::oracle ? "oracle" : "estimated")
       << " center=" << (c.center ? "true" : "false")
       << " exclude_approx=" << (c.exclude_approx ? "true" : "false") << "\n";
    os << "signal,n,noise_shape,snr_in_db,method,mean_snr_den_db,std_snr_den_db,replications,"
          "mean_sigma_hat,mean_u_hat,mean_ks_fit\n";
    for (const auto& method : c.methods) {
        const auto& s = report.stats.at(method);
        os << c.signal_name << ',' << c.n << ',' << textio::format_double(c.noise_shape) << ','
           << textio::format_double(db_from_linear(c.snr_linear)) << ',' << method << ','
           << textio::format_double(s.mean) << ',' << textio::format_double(s.stddev) << ','
           << c.replications << ',' << textio::format_double(report.mean_sigma_hat) << ','
           << textio::format_double(report.mean_u_hat) << ','
           << textio::format_double(report.mean_ks_fit) << '\n';
    }
    return os.str();
}

inline nlohmann::json denoise_report_json(const DenoiseReport& report) {
    const auto& c = report.config;
    nlohmann::json j;
    j["config"] = {
        {"signal", c.signal_name},
        {"n", c.n},
        {"noise_shape", c.noise_shape},
        {"snr_linear", c.snr_linear},
        {"snr_db", db_from_linear(c.snr_linear)},
        {"replications", c.replications},
        {"base_seed", c.base_seed},
        {"methods", c.methods},
        {"filter", c.filter},
        {"levels", c.levels},
        {"mode", c.mode == peeling::ThresholdMode::soft ? "soft" : "hard"},
        {"sigma_source", c.sigma_source == SigmaSource::oracle ? "oracle" : "estimated"},
        {"center", c.center},
        {"exclude_approx", c.exclude_approx},
    };
    j["mean_sigma_hat"] = report.mean_sigma_hat;
    j["mean_u_hat"] = report.mean_u_hat;
    j["mean_ks_fit"] = report.mean_ks_fit;
    nlohmann::json stats = nlohmann::json::object();
    for (const auto& [method, s] : report.stats)
        stats[method] = {{"mean_snr_den_db", s.mean}, {"std_snr_den_db", s.stddev}};
    j["stats"] = std::move(stats);
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : report.replications) {
        reps.push_back({{"seed", rep.seed},
                        {"sigma_hat", rep.sigma_hat},
                        {"u_hat", rep.u_hat},
                        {"mu_hat", rep.mu_hat},
                        {"ks_fit", rep.ks_fit},
                        {"threshold", rep.threshold},
                        {"snr_den_db", rep.snr_den_db}});
    }
    j["replications"] = std::move(reps);
    return j;
}

inline std::string convergence_table_csv(const ConvergenceTable& t) {
    std::ostringstream os;
    os << "# peelwave converge\n";
    os << "# u=" << textio::format_double(t.u) << " f_factor=" << textio::format_double(t.f_factor)
       << " F=" << textio::format_double(t.F) << " alpha=" << textio::format_double(t.alpha)
       << " eta=" << textio::format_double(t.eta) << " replications=" << t.replications
       << " base_seed=" << t.base_seed << " regime=" << detmap::to_string(t.regime);
    if (t.regime == detmap::Regime::supercritical)
        os << " x_star=" << textio::format_double(t.x_star)
           << " contraction=" << textio::format_double(t.contraction);
    else
        os << " kappa=" << textio::format_double(t.kappa);
    os << "\n";
    os << "n,iterations,exceed_frequency,mean_deviation\n";
    for (const auto& row : t.rows)
        os << row.n_coeffs << ',' << row.iterations << ','
           << textio::format_double(row.exceed_frequency) << ','
           << textio::format_double(row.mean_deviation) << '\n';
    return os.str();
}

inline nlohmann::json convergence_table_json(const ConvergenceTable& t) {
    nlohmann::json j;
    j["config"] = {{"u", t.u},
                   {"f_factor", t.f_factor},
                   {"F", t.F},
                   {"alpha", t.alpha},
                   {"eta", t.eta},
                   {"replications", t.replications},
                   {"base_seed", t.base_seed},
                   {"regime", detmap::to_string(t.regime)}};
    if (t.regime == detmap::Regime::supercritical) {
        j["x_star"] = t.x_star;
        j["contraction"] = t.contraction;
    } else {
        j["kappa"] = t.kappa;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"n", row.n_coeffs},
                        {"iterations", row.iterations},
                        {"exceed_frequency", row.exceed_frequency},
                        {"mean_deviation", row.mean_deviation}});
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace peelwave::bench
