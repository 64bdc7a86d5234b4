// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "peelwave/errors.hpp"

namespace peelwave::rootfind {

struct Options {
    double x_tol = 1e-12;      // relative to max(1, |x|)
    int max_iterations = 200;
};

namespace detail {

inline void require_sign_change(double lo, double hi, double flo, double fhi) {
    if ((flo < 0.0) == (fhi < 0.0)) {
        std::ostringstream os;
        os << "root bracket has no sign change: f(" << lo << ") = " << flo
           << ", f(" << hi << ") = " << fhi;
        throw convergence_error(os.str());
    }
}

inline bool tight(double lo, double hi, double x_tol) {
    return (hi - lo) <= x_tol * std::fmax(1.0, std::fabs(lo) + std::fabs(hi));
}

}  // namespace detail

/// Plain bisection on a sign-changing bracket [lo, hi].
template <typename F>
double bisect(F&& f, double lo, double hi, Options opt = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    detail::require_sign_change(lo, hi, flo, fhi);
    for (int i = 0; i < opt.max_iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return mid;  // ran out of doubles
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if (detail::tight(lo, hi, opt.x_tol)) return 0.5 * (lo + hi);
    }
    throw convergence_error("bisect: iteration budget exhausted");
}

/// Newton iteration safeguarded by a maintained sign-change bracket.
/// Whenever a Newton step leaves the bracket (or the derivative degenerates)
/// the step falls back to bisection, so convergence is guaranteed.
template <typename F, typename DF>
double newton_bracketed(F&& f, DF&& df, double lo, double hi, Options opt = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    detail::require_sign_change(lo, hi, flo, fhi);

    double x = 0.5 * (lo + hi);
    double fx = f(x);
    for (int i = 0; i < opt.max_iterations; ++i) {
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (detail::tight(lo, hi, opt.x_tol)) return 0.5 * (lo + hi);

        const double d = df(x);
        double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d
                                                     : std::numeric_limits<double>::quiet_NaN();
        if (!(next > lo && next < hi))  // overshoot: bisect instead
            next = 0.5 * (lo + hi);
        x = next;
        fx = f(x);
    }
    throw convergence_error("newton_bracketed: iteration budget exhausted");
}

}  // namespace peelwave::rootfind
