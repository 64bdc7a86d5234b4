// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "peelwave/errors.hpp"
#include "peelwave/ggd.hpp"
#include "peelwave/rootfind.hpp"
#include "peelwave/specfun.hpp"

namespace peelwave::detmap {

/// The reduced (sigma = 1) peeling map
///   g(x) = F^2 * P((beta sqrt(x))^u, 3/u)
/// with P the regularized lower incomplete gamma function. g is increasing,
/// g(0) = 0 and g(inf) = F^2.
struct ReducedMap {
    double F;
    double u;
    double beta;   // sigma = 1 scale
    double alpha;  // sigma = 1 normalizer
};

inline ReducedMap make_reduced_map(double F, double u) {
    if (!std::isfinite(F) || F <= 0.0)
        throw std::domain_error("detmap: F must be finite and > 0");
    const ggd::GgdParams p = ggd::make_params(1.0, u);
    return {F, u, p.beta, p.alpha};
}

/// Tangency solution of {g'(r) = 1, g(r) = r}: the smallest F with a
/// nonzero fixed point, and where that fixed point sits.
struct CriticalSolution {
    double u;
    double F_c;
    double x_star_c;
};

/// Fixed-point pair of a supercritical map: unstable l1, stable x_star,
/// and the contraction rate M = g'(x_star) in (0, 1).
struct SupercriticalStructure {
    double l1;
    double x_star;
    double contraction;
};

enum class Regime { subcritical, critical, supercritical };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::subcritical: return "subcritical";
        case Regime::critical: return "critical";
        case Regime::supercritical: return "supercritical";
    }
    return "?";
}

namespace detail {

// (beta sqrt(x))^u in log space; overflow collapses into +inf harmlessly.
inline double gamma_argument(const ReducedMap& m, double x) {
    return std::exp(m.u * (std::log(m.beta) + 0.5 * std::log(x)));
}

}  // namespace detail

/// g(x) for x in [0, +inf]; x = +inf returns the sup F^2.
inline double g_value(const ReducedMap& m, double x) {
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("detmap::g_value: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return m.F * m.F;
    return m.F * m.F * specfun::reg_lower_inc_gamma(detail::gamma_argument(m, x), 3.0 / m.u);
}

/// g_{sigma,u}(x) = sigma^2 * g(x / sigma^2): sigma only rescales the problem.
inline double g_value_scaled(double sigma, const ReducedMap& m, double x) {
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw std::domain_error("detmap::g_value_scaled: sigma must be > 0");
    return sigma * sigma * g_value(m, x / (sigma * sigma));
}

/// g'(x) = F^2 * alpha * sqrt(x) * exp(-(beta sqrt(x))^u), closed form.
inline double g_derivative(const ReducedMap& m, double x) {
    if (std::isnan(x) || x <= 0.0)
        throw std::domain_error("detmap::g_derivative: x must be > 0");
    if (std::isinf(x)) return 0.0;
    return m.F * m.F * m.alpha * std::sqrt(x) * std::exp(-detail::gamma_argument(m, x));
}

/// Inflection point beta^-2 u^-2/u: g is convex before it, concave after.
inline double inflection_point(const ReducedMap& m) {
    return std::exp(-2.0 * std::log(m.beta) - (2.0 / m.u) * std::log(m.u));
}

/// Earlier sufficient-condition bound F_m = sqrt((3 Gamma(1/u)/u) (u e)^(1/u)),
/// always above F_c.
inline double fm_bound(double u) {
    if (!std::isfinite(u) || u <= 0.0)
        throw std::domain_error("detmap::fm_bound: u must be finite and > 0");
    const double log_fm_sq = std::log(3.0) + specfun::ln_gamma(1.0 / u) - std::log(u) +
                             (std::log(u) + 1.0) / u;
    return std::exp(0.5 * log_fm_sq);
}

/// Solve the critical system {g'(r) = 1, g(r) = r} for a given shape.
///
/// Eliminating F^2 = e^z / (alpha sqrt(r)) (z = (beta sqrt(r))^u) from the
/// tangency condition turns the system into one scalar equation
///   phi(r) = P(z, 3/u) * e^z / (alpha sqrt(r)) - r = 0
/// which is bracketed from the inflection point by geometric expansion and
/// then bisected. Both residuals are verified to 1e-9.
inline CriticalSolution critical_constant(double u) {
    if (!std::isfinite(u) || u < 0.05 || u > 20.0)
        throw std::domain_error("detmap::critical_constant: u must lie in [0.05, 20]");

    const ggd::GgdParams p = ggd::make_params(1.0, u);
    const double log_beta = std::log(p.beta);
    const double log_alpha = std::log(p.alpha);
    const double a = 3.0 / u;

    const auto phi = [&](double r) {
        const double z = std::exp(u * (log_beta + 0.5 * std::log(r)));
        if (std::isinf(z)) return std::numeric_limits<double>::infinity();
        const double P = specfun::reg_lower_inc_gamma(z, a);
        if (P <= 0.0) return -r;
        const double lg = z + std::log(P) - log_alpha - 0.5 * std::log(r);
        if (lg > 700.0) return std::numeric_limits<double>::infinity();
        return std::exp(lg) - r;
    };

    const double inflection = std::exp(-2.0 * log_beta - (2.0 / u) * std::log(u));
    double lo = inflection;
    double f_lo = phi(lo);
    if (f_lo == 0.0) {
        // degenerate landing exactly on the root; nudge the bracket open
        lo = inflection * (1.0 - 1e-12);
        f_lo = phi(lo);
    }
    if (f_lo > 0.0) {
        std::ostringstream os;
        os << "detmap::critical_constant: no bracket, phi(" << lo << ") = " << f_lo
           << " is already positive at the inflection point (u = " << u << ")";
        throw convergence_error(os.str());
    }
    double hi = 2.0 * lo;
    double f_hi = phi(hi);
    const double hi_max = std::ldexp(inflection, 40);
    while (!(f_hi > 0.0)) {
        if (hi > hi_max) {
            std::ostringstream os;
            os << "detmap::critical_constant: no sign change of the reduced critical "
               << "equation on (" << inflection << ", " << hi << "] for u = " << u;
            throw convergence_error(os.str());
        }
        hi *= 2.0;
        f_hi = phi(hi);
    }

    const double r = rootfind::bisect(phi, lo, hi, {1e-13, 300});
    const double z = std::exp(u * (log_beta + 0.5 * std::log(r)));
    const double F_c = std::exp(0.5 * (z - log_alpha - 0.5 * std::log(r)));

    const ReducedMap m = {F_c, u, p.beta, p.alpha};
    const double res_fixed = std::fabs(g_value(m, r) - r);
    const double res_slope = std::fabs(g_derivative(m, r) - 1.0);
    if (res_fixed > 1e-9 || res_slope > 1e-9) {
        std::ostringstream os;
        os << "detmap::critical_constant: residuals too large for u = " << u
           << " (|g(r)-r| = " << res_fixed << ", |g'(r)-1| = " << res_slope << ")";
        throw convergence_error(os.str());
    }
    return {u, F_c, r};
}

/// Locate the fixed-point pair of a supercritical map (F >= 1.001 F_c).
/// l1 is bracketed on (0, x*_c], x* on [x*_c, F^2]; both are polished by
/// safeguarded Newton on d(x) = g(x) - x and verified to 1e-9.
inline SupercriticalStructure supercritical_structure(const ReducedMap& m,
                                                      const CriticalSolution& crit) {
    if (std::fabs(m.u - crit.u) > 1e-9 * std::fmax(1.0, std::fabs(crit.u)))
        throw std::invalid_argument("detmap::supercritical_structure: map and critical solution "
                                    "have different shapes");
    if (m.F <= crit.F_c)
        throw regime_error("detmap::supercritical_structure: map is not supercritical "
                           "(F <= F_c)");
    if (m.F < 1.001 * crit.F_c)
        throw regime_error("detmap::supercritical_structure: F is within 0.1% of F_c; "
                           "fixed points are too ill-conditioned near tangency");

    const auto d = [&](double x) { return g_value(m, x) - x; };
    const auto dd = [&](double x) { return g_derivative(m, x) - 1.0; };

    const double xc = crit.x_star_c;
    if (!(d(xc) > 0.0))
        throw convergence_error("detmap::supercritical_structure: g(x*_c) <= x*_c, "
                                "trichotomy bracket invalid");

    double lo = xc;
    for (int i = 0; i < 1200 && !(d(lo) < 0.0); ++i) lo *= 0.5;
    if (!(d(lo) < 0.0))
        throw convergence_error("detmap::supercritical_structure: could not bracket l1");
    const double l1 = rootfind::newton_bracketed(d, dd, lo, xc, {1e-13, 300});

    const double g_inf = m.F * m.F;
    const double x_star = rootfind::newton_bracketed(d, dd, xc, g_inf, {1e-13, 300});

    const double contraction = g_derivative(m, x_star);
    if (std::fabs(d(l1)) > 1e-9 || std::fabs(d(x_star)) > 1e-9 ||
        !(contraction > 0.0 && contraction < 1.0)) {
        std::ostringstream os;
        os << "detmap::supercritical_structure: residual check failed "
           << "(|d(l1)| = " << std::fabs(d(l1)) << ", |d(x*)| = " << std::fabs(d(x_star))
           << ", g'(x*) = " << contraction << ")";
        throw convergence_error(os.str());
    }
    return {l1, x_star, contraction};
}

/// Compare F against the critical constant; the critical band is a relative
/// 1e-6 corridor around F_c.
inline Regime classify_regime(double F, double u) {
    if (!std::isfinite(F) || F <= 0.0)
        throw std::domain_error("detmap::classify_regime: F must be finite and > 0");
    const CriticalSolution crit = critical_constant(u);
    const double rel = (F - crit.F_c) / crit.F_c;
    if (std::fabs(rel) <= 1e-6) return Regime::critical;
    return rel < 0.0 ? Regime::subcritical : Regime::supercritical;
}

/// Iteration budget n(N) = floor(C * alpha * ln N) + 1 with
/// C = -1/ln(contraction) + eta.
inline std::size_t iteration_count(std::size_t n_coeffs, double contraction, double alpha,
                                   double eta) {
    if (n_coeffs < 2)
        throw std::domain_error("detmap::iteration_count: N must be >= 2");
    if (!(contraction > 0.0 && contraction < 1.0))
        throw std::domain_error("detmap::iteration_count: contraction must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha <= 0.5))
        throw std::domain_error("detmap::iteration_count: alpha must lie in (0, 1/2]");
    if (!(eta >= 0.0))
        throw std::domain_error("detmap::iteration_count: eta must be >= 0");
    const double C = -1.0 / std::log(contraction) + eta;
    const double n = std::floor(C * alpha * std::log(static_cast<double>(n_coeffs))) + 1.0;
    return static_cast<std::size_t>(n);
}

/// Deterministic orbit x_{k+1} = g(x_k) from x_0 = g(inf) = F^2, run until
/// |x_{k+1} - x_k| <= tol. Used to pin golden fixed-point values in tests
/// independently of the root finder.
inline double orbit_fixed_point(const ReducedMap& m, double tol = 1e-12,
                                std::size_t max_steps = 100000) {
    double x = m.F * m.F;
    for (std::size_t i = 0; i < max_steps; ++i) {
        const double next = g_value(m, x);
        if (std::fabs(next - x) <= tol) return next;
        x = next;
    }
    throw convergence_error("detmap::orbit_fixed_point: no convergence (map may be "
                            "subcritical or too close to tangency)");
}

}  // namespace peelwave::detmap
