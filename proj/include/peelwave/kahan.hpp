// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <cstddef>
#include <span>

namespace peelwave {

/// Compensated (Kahan) accumulator. Used wherever a result must not depend
/// on how a reduction is chunked beyond 1e-12.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline double kahan_total(std::span<const double> xs) {
    KahanSum s;
    for (double v : xs) s.add(v);
    return s.value();
}

inline double kahan_mean(std::span<const double> xs) {
    return xs.empty() ? 0.0 : kahan_total(xs) / static_cast<double>(xs.size());
}

inline double kahan_sum_squares(std::span<const double> xs) {
    KahanSum s;
    for (double v : xs) s.add(v * v);
    return s.value();
}

}  // namespace peelwave
