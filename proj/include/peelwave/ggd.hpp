// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "peelwave/errors.hpp"
#include "peelwave/kahan.hpp"
#include "peelwave/rng.hpp"
#include "peelwave/rootfind.hpp"
#include "peelwave/specfun.hpp"

namespace peelwave::ggd {

/// Generalized Gaussian law with density  alpha * exp(-|beta x|^u).
///
/// sigma is the standard deviation, u the shape (u = 2 Gaussian, u = 1
/// Laplace). beta and alpha are the derived scale and normalizer:
///   beta  = (1/sigma) * sqrt(Gamma(3/u) / Gamma(1/u))
///   alpha = beta * u / (2 Gamma(1/u))
struct GgdParams {
    double sigma;
    double u;
    double beta;
    double alpha;
};

inline GgdParams make_params(double sigma, double u) {
    if (!std::isfinite(sigma) || sigma <= 0.0 || !std::isfinite(u) || u <= 0.0)
        throw std::domain_error("ggd::make_params: sigma and u must be finite and > 0");
    if (u < 1e-3)
        throw std::overflow_error("ggd::make_params: u < 1e-3 overflows the gamma factors");
    const double lg1 = specfun::ln_gamma(1.0 / u);
    const double lg3 = specfun::ln_gamma(3.0 / u);
    const double beta = std::exp(0.5 * (lg3 - lg1)) / sigma;
    const double alpha = std::exp(std::log(beta * u / 2.0) - lg1);
    if (!std::isfinite(beta) || !std::isfinite(alpha))
        throw std::overflow_error("ggd::make_params: derived constants overflow for this u");
    return {sigma, u, beta, alpha};
}

/// Density p_{sigma,u}(x) = alpha * exp(-|beta x|^u).
inline double pdf(const GgdParams& p, double x) {
    return p.alpha * std::exp(-std::pow(std::fabs(p.beta * x), p.u));
}

/// Density of W = X^2 when X ~ p_{sigma,u}:
///   alpha * w^{-1/2} * exp(-(beta sqrt(w))^u)  for w > 0, else 0.
inline double squared_pdf(const GgdParams& p, double w) {
    if (w <= 0.0) return 0.0;
    const double r = std::sqrt(w);
    return p.alpha / r * std::exp(-std::pow(p.beta * r, p.u));
}

/// CDF via the regularized incomplete gamma function.
inline double cdf(const GgdParams& p, double x) {
    const double tail = 0.5 * specfun::reg_lower_inc_gamma(std::pow(std::fabs(p.beta * x), p.u), 1.0 / p.u);
    return x >= 0.0 ? 0.5 + tail : 0.5 - tail;
}

namespace detail {

/// Draws gamma and normal variates off one xoshiro stream. All state lives
/// here, so a fixed seed fixes the whole sample path.
class VariateStream {
 public:
    explicit VariateStream(std::uint64_t seed) : rng_(seed) {}

    double uniform01() { return rng_.uniform01(); }
    double uniform_pos() { return rng_.uniform_pos(); }

    double standard_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        for (;;) {
            const double a = 2.0 * rng_.uniform01() - 1.0;
            const double b = 2.0 * rng_.uniform01() - 1.0;
            const double s = a * a + b * b;
            if (s > 0.0 && s < 1.0) {
                const double m = std::sqrt(-2.0 * std::log(s) / s);
                spare_ = b * m;
                have_spare_ = true;
                return a * m;
            }
        }
    }

    /// Gamma(shape, scale 1). Marsaglia-Tsang squeeze/rejection for
    /// shape >= 1; shape < 1 boosted via Gamma(shape+1) * U^(1/shape).
    double gamma_variate(double shape) {
        if (shape >= 1.0) return gamma_ge1(shape);
        const double g = gamma_ge1(shape + 1.0);
        return g * std::pow(uniform_pos(), 1.0 / shape);
    }

 private:
    double gamma_ge1(double shape) {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = standard_normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double uu = uniform_pos();
            if (uu < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
            if (std::log(uu) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    rng::Xoshiro256PlusPlus rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace detail

/// n i.i.d. draws from p_{sigma,u}, deterministic per seed.
///
/// Transform: X = S * G^(1/u) / beta with G ~ Gamma(1/u, 1) and S a uniform
/// sign; the change of variables reproduces the density exactly.
inline std::vector<double> sample(const GgdParams& p, std::uint64_t seed, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    detail::VariateStream vs(seed);
    const double inv_u = 1.0 / p.u;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = vs.gamma_variate(inv_u);
        const double mag = std::pow(g, inv_u) / p.beta;
        out.push_back(vs.uniform01() < 0.5 ? -mag : mag);
    }
    return out;
}

/// Moment ratio R(u) = E|X| / sqrt(E X^2) = Gamma(2/u) / sqrt(Gamma(1/u) Gamma(3/u)),
/// strictly increasing in u. Inverted by estimate_params.
inline double moment_ratio(double u) {
    return std::exp(specfun::ln_gamma(2.0 / u) -
                    0.5 * (specfun::ln_gamma(1.0 / u) + specfun::ln_gamma(3.0 / u)));
}

/// Fit (sigma, u) from data: sigma from the empirical standard deviation,
/// u by inverting the absolute-moment ratio m1/sqrt(m2) over u in [0.05, 20]
/// (bisection, tolerance 1e-8 on the ratio).
inline GgdParams estimate_params(std::span<const double> samples) {
    constexpr double kULo = 0.05;
    constexpr double kUHi = 20.0;
    constexpr double kRatioTol = 1e-8;

    if (samples.size() < 100)
        throw std::invalid_argument("ggd::estimate_params: need at least 100 samples");

    KahanSum sum, sum_abs, sum_sq;
    for (double v : samples) {
        sum.add(v);
        sum_abs.add(std::fabs(v));
        sum_sq.add(v * v);
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum.value() / n;
    const double m1 = sum_abs.value() / n;
    const double m2 = sum_sq.value() / n;
    const double var = m2 - mean * mean;
    if (!(var > 0.0))
        throw std::invalid_argument("ggd::estimate_params: samples are constant");
    const double sigma_hat = std::sqrt(var);
    const double ratio = m1 / std::sqrt(m2);

    const double r_lo = moment_ratio(kULo);
    const double r_hi = moment_ratio(kUHi);
    if (!(r_lo < r_hi))
        throw std::logic_error("ggd::estimate_params: moment ratio is not increasing");
    if (ratio < r_lo || ratio > r_hi)
        throw estimation_error("ggd::estimate_params: moment ratio " + std::to_string(ratio) +
                               " is outside the invertible range");

    double lo = kULo, hi = kUHi;
    double flo = r_lo - ratio;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double rm = moment_ratio(mid);
        if (rm < r_lo - 1e-12 || rm > r_hi + 1e-12)
            throw std::logic_error("ggd::estimate_params: moment ratio is not increasing");
        const double fm = rm - ratio;
        if (std::fabs(fm) <= kRatioTol) return make_params(sigma_hat, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return make_params(sigma_hat, 0.5 * (lo + hi));
}

}  // namespace peelwave::ggd
