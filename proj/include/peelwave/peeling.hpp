// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "peelwave/detmap.hpp"
#include "peelwave/errors.hpp"
#include "peelwave/kahan.hpp"

namespace peelwave::peeling {

/// When to stop the fixed-point iteration U_{k+1} = g_N(U_k).
struct StopRule {
    enum class Kind { fixed_iterations, energy_drop, exact_fixed_point };

    Kind kind = Kind::exact_fixed_point;
    std::size_t iterations = 0;  // fixed_iterations only
    double epsilon = 0.0;        // energy_drop only

    static StopRule fixed(std::size_t n) { return {Kind::fixed_iterations, n, 0.0}; }
    static StopRule energy_drop(double eps) { return {Kind::energy_drop, 0, eps}; }
    static StopRule exact() { return {Kind::exact_fixed_point, 0, 0.0}; }
};

struct PeelingConfig {
    double F = 1.0;
    StopRule stop = StopRule::exact();
    std::size_t max_iterations = 100000;
};

enum class StopReason { fixed_iterations, energy_drop, exact_fixed_point, max_iterations };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::fixed_iterations: return "fixed_iterations";
        case StopReason::energy_drop: return "energy_drop";
        case StopReason::exact_fixed_point: return "exact_fixed_point";
        case StopReason::max_iterations: return "max_iterations";
    }
    return "?";
}

/// Full record of one peeling run. u_sequence starts at U_0 = +inf and is
/// nonincreasing afterwards; t_final = sqrt(u_sequence.back()).
struct PeelingTrace {
    std::vector<double> u_sequence;
    double t_final = 0.0;
    std::optional<std::vector<double>> fluctuations;
    std::size_t iterations_run = 0;
    StopReason stop_reason = StopReason::exact_fixed_point;
};

/// Deterministic reference (sigma and reduced map) against which per-step
/// fluctuations eps_{k,N} = g_N(U_k) - g_{sigma,u}(U_k) are recorded.
struct Reference {
    double sigma;
    detmap::ReducedMap map;
};

namespace detail {

/// g_N as a reusable object: squared coefficients sorted once, prefix sums
/// built with compensated summation in that fixed order. Every evaluation
/// (and hence every run) is bitwise independent of caller-side ordering.
class EmpiricalMap {
 public:
    EmpiricalMap(std::span<const double> coeffs, double F) : f2_(F * F) {
        if (coeffs.empty())
            throw std::invalid_argument("peeling: coefficient vector must be nonempty");
        if (!(F > 0.0) || !std::isfinite(F))
            throw std::invalid_argument("peeling: F must be finite and > 0");
        sorted_squares_.reserve(coeffs.size());
        for (double c : coeffs) sorted_squares_.push_back(c * c);
        std::sort(sorted_squares_.begin(), sorted_squares_.end());
        prefix_.resize(sorted_squares_.size() + 1);
        KahanSum acc;
        prefix_[0] = 0.0;
        for (std::size_t i = 0; i < sorted_squares_.size(); ++i) {
            acc.add(sorted_squares_[i]);
            prefix_[i + 1] = acc.value();
        }
    }

    /// (F^2 / N) * sum of squares strictly below x.
    double operator()(double x) const {
        if (std::isnan(x) || x < 0.0)
            throw std::domain_error("peeling: empirical map argument must be >= 0");
        const std::size_t below =
            std::lower_bound(sorted_squares_.begin(), sorted_squares_.end(), x) -
            sorted_squares_.begin();
        return f2_ * prefix_[below] / static_cast<double>(sorted_squares_.size());
    }

    std::size_t size() const { return sorted_squares_.size(); }

 private:
    std::vector<double> sorted_squares_;
    std::vector<double> prefix_;
    double f2_;
};

}  // namespace detail

/// One evaluation of the empirical map
///   g_N(x) = (F^2/N) * sum_q Y(q) 1{Y(q) < x},   Y(q) = coeffs(q)^2,
/// with a strict inequality in the indicator. x may be +inf (full sum).
inline double empirical_g(std::span<const double> coeffs, double F, double x) {
    return detail::EmpiricalMap(coeffs, F)(x);
}

/// Run the peeling iteration U_0 = +inf, U_{k+1} = g_N(U_k) until the
/// configured stop rule fires (or the safeguard trips, which is recorded in
/// stop_reason rather than thrown).
inline PeelingTrace run_peeling(std::span<const double> coeffs, const PeelingConfig& config,
                                const std::optional<Reference>& reference = std::nullopt) {
    if (config.max_iterations < 1)
        throw std::invalid_argument("peeling: max_iterations must be >= 1");
    if (config.stop.kind == StopRule::Kind::fixed_iterations) {
        if (config.stop.iterations < 1)
            throw std::invalid_argument("peeling: fixed iteration count must be >= 1");
        if (config.stop.iterations > config.max_iterations)
            throw std::invalid_argument("peeling: fixed iteration count exceeds max_iterations");
    }
    if (config.stop.kind == StopRule::Kind::energy_drop && !(config.stop.epsilon >= 0.0))
        throw std::invalid_argument("peeling: energy-drop epsilon must be >= 0");
    if (reference &&
        std::fabs(reference->map.F - config.F) > 1e-12 * std::fmax(1.0, config.F))
        throw std::invalid_argument("peeling: reference map must use the same F as the run");

    const detail::EmpiricalMap g_n(coeffs, config.F);
    const double n = static_cast<double>(g_n.size());

    PeelingTrace trace;
    trace.u_sequence.push_back(std::numeric_limits<double>::infinity());
    if (reference) trace.fluctuations.emplace();

    double u = trace.u_sequence.front();
    for (std::size_t k = 0; k < config.max_iterations; ++k) {
        const double next = g_n(u);
        if (reference)
            trace.fluctuations->push_back(
                next - detmap::g_value_scaled(reference->sigma, reference->map, u));
        trace.u_sequence.push_back(next);
        trace.iterations_run = k + 1;

        bool stop = false;
        switch (config.stop.kind) {
            case StopRule::Kind::fixed_iterations:
                stop = (k + 1 == config.stop.iterations);
                if (stop) trace.stop_reason = StopReason::fixed_iterations;
                break;
            case StopRule::Kind::energy_drop:
                // ||n_k||^2 - ||n_{k+1}||^2 <= eps, written in U-coordinates.
                stop = std::isfinite(u) && n * (u - next) / (config.F * config.F) <=
                                               config.stop.epsilon;
                if (stop) trace.stop_reason = StopReason::energy_drop;
                break;
            case StopRule::Kind::exact_fixed_point:
                stop = (next == u);
                if (stop) trace.stop_reason = StopReason::exact_fixed_point;
                break;
        }
        u = next;
        if (stop) break;
        if (k + 1 == config.max_iterations) trace.stop_reason = StopReason::max_iterations;
    }
    trace.t_final = std::sqrt(trace.u_sequence.back());
    return trace;
}

/// Threshold application rules of the reconstruction step.
enum class ThresholdMode { hard, soft };

inline ThresholdMode threshold_mode_from_name(const std::string& name) {
    if (name == "hard") return ThresholdMode::hard;
    if (name == "soft") return ThresholdMode::soft;
    throw std::invalid_argument("peeling: unknown threshold mode '" + name + "'");
}

/// hard: keep |z| >= T (boundary kept), zero otherwise.
/// soft: sign(z) * max(|z| - T, 0).
inline std::vector<double> apply_threshold(std::span<const double> coeffs, double T,
                                           ThresholdMode mode) {
    if (!(T >= 0.0))
        throw std::domain_error("peeling::apply_threshold: T must be >= 0");
    std::vector<double> out(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double z = coeffs[i];
        if (mode == ThresholdMode::hard) {
            out[i] = std::fabs(z) >= T ? z : 0.0;
        } else {
            const double mag = std::fabs(z) - T;
            out[i] = mag > 0.0 ? (z > 0.0 ? mag : -mag) : 0.0;
        }
    }
    return out;
}

/// The seven thresholds compared in the experiments, for one (sigma, u).
///
/// Deterministic: T = sigma * sqrt(x*) at F in {1.05 F_c, 1.15 F_c, F_m}.
/// Data-driven (require coeffs): the hatted variants run ceil(ln N) peeling
/// iterations at the same three F values; T_m runs the exact fixed-point
/// descent at F = F_m.
struct ThresholdCatalog {
    double f_c = 0.0;
    double f_m = 0.0;
    double t_c05 = 0.0;
    double t_c15 = 0.0;
    double t_cm = 0.0;
    std::optional<double> that_c05;
    std::optional<double> that_c15;
    std::optional<double> that_cm;
    std::optional<double> t_m;

    std::map<std::string, double> as_map() const {
        std::map<std::string, double> m{
            {"T_c05", t_c05}, {"T_c15", t_c15}, {"T_cm", t_cm}};
        if (that_c05) m["That_c05"] = *that_c05;
        if (that_c15) m["That_c15"] = *that_c15;
        if (that_cm) m["That_cm"] = *that_cm;
        if (t_m) m["T_m"] = *t_m;
        return m;
    }
};

struct CatalogOptions {
    bool log2_iterations = false;  // iteration budget ceil(log2 N) instead of ceil(ln N)
};

inline ThresholdCatalog threshold_catalog(double sigma, double u,
                                          std::span<const double> coeffs, std::size_t n,
                                          CatalogOptions options = {}) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::domain_error("peeling::threshold_catalog: sigma must be > 0");

    const detmap::CriticalSolution crit = detmap::critical_constant(u);
    const double f_m = detmap::fm_bound(u);
    if (!(f_m > crit.F_c))
        throw std::logic_error("peeling::threshold_catalog: F_m <= F_c cannot happen");

    ThresholdCatalog cat;
    cat.f_c = crit.F_c;
    cat.f_m = f_m;

    const double factors[3] = {1.05 * crit.F_c, 1.15 * crit.F_c, f_m};
    double* deterministic[3] = {&cat.t_c05, &cat.t_c15, &cat.t_cm};
    for (int i = 0; i < 3; ++i) {
        const detmap::ReducedMap m = detmap::make_reduced_map(factors[i], u);
        const detmap::SupercriticalStructure s = detmap::supercritical_structure(m, crit);
        *deterministic[i] = sigma * std::sqrt(s.x_star);
    }

    if (!coeffs.empty()) {
        if (n != coeffs.size())
            throw std::invalid_argument("peeling::threshold_catalog: N does not match the "
                                        "coefficient count");
        const double logn = options.log2_iterations
                                ? std::log2(static_cast<double>(n))
                                : std::log(static_cast<double>(n));
        const std::size_t budget = static_cast<std::size_t>(std::ceil(logn));
        std::optional<double>* hatted[3] = {&cat.that_c05, &cat.that_c15, &cat.that_cm};
        for (int i = 0; i < 3; ++i) {
            PeelingConfig cfg{factors[i], StopRule::fixed(std::max<std::size_t>(budget, 1)),
                              std::max<std::size_t>(budget, 1)};
            *hatted[i] = run_peeling(coeffs, cfg).t_final;
        }
        // N+1 distinct partial-sum values plus the repeat that confirms the stop.
        PeelingConfig exact_cfg{f_m, StopRule::exact(), coeffs.size() + 2};
        cat.t_m = run_peeling(coeffs, exact_cfg).t_final;
    }
    return cat;
}

inline void to_json(nlohmann::json& j, const PeelingTrace& trace) {
    nlohmann::json u = nlohmann::json::array();
    for (double v : trace.u_sequence) {
        if (std::isinf(v))
            u.push_back(nullptr);  // JSON has no inf; U_0 round-trips as null
        else
            u.push_back(v);
    }
    j = nlohmann::json{{"u", std::move(u)},
                       {"t_final", trace.t_final},
                       {"iterations", trace.iterations_run},
                       {"stop_reason", to_string(trace.stop_reason)}};
    if (trace.fluctuations) j["fluctuations"] = *trace.fluctuations;
}

}  // namespace peelwave::peeling
