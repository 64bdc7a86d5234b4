// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "peelwave/errors.hpp"
#include "peelwave/kahan.hpp"

namespace peelwave::signals {

enum class Benchmark { blocks, bumps, heavisine, doppler };

inline Benchmark benchmark_from_name(const std::string& name) {
    if (name == "Blocks" || name == "blocks") return Benchmark::blocks;
    if (name == "Bumps" || name == "bumps") return Benchmark::bumps;
    if (name == "HeaviSine" || name == "heavisine") return Benchmark::heavisine;
    if (name == "Doppler" || name == "doppler") return Benchmark::doppler;
    throw std::invalid_argument("signals: unknown benchmark '" + name + "'");
}

inline const char* to_string(Benchmark b) {
    switch (b) {
        case Benchmark::blocks: return "Blocks";
        case Benchmark::bumps: return "Bumps";
        case Benchmark::heavisine: return "HeaviSine";
        case Benchmark::doppler: return "Doppler";
    }
    return "?";
}

namespace detail {

// Donoho-Johnstone breakpoints and weights.
constexpr double kT[11] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81};
constexpr double kBlocksH[11] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
constexpr double kBumpsH[11] = {4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
constexpr double kBumpsW[11] = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                0.01,  0.01,  0.005, 0.008, 0.005};

constexpr double kPi = 3.14159265358979323846;

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline double raw_value(Benchmark b, double t) {
    switch (b) {
        case Benchmark::blocks: {
            double s = 0.0;
            for (int j = 0; j < 11; ++j) s += kBlocksH[j] * 0.5 * (1.0 + sgn(t - kT[j]));
            return s;
        }
        case Benchmark::bumps: {
            double s = 0.0;
            for (int j = 0; j < 11; ++j) {
                const double r = (t - kT[j]) / kBumpsW[j];
                const double base = 1.0 + std::fabs(r);
                s += kBumpsH[j] / (base * base * base * base);
            }
            return s;
        }
        case Benchmark::heavisine:
            return 4.0 * std::sin(4.0 * kPi * t) - sgn(t - 0.3) - sgn(0.72 - t);
        case Benchmark::doppler:
            return std::sqrt(t * (1.0 - t)) * std::sin(2.0 * kPi * 1.05 / (t + 0.05));
    }
    return 0.0;
}

}  // namespace detail

/// Benchmark signal sampled at t_i = (i+1)/N and normalized to unit power
/// (mean square exactly 1).
inline std::vector<double> make_benchmark(Benchmark b, std::size_t n) {
    if (n < 64 || (n & (n - 1)) != 0)
        throw std::invalid_argument("signals::make_benchmark: N must be a power of two >= 64");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = detail::raw_value(b, static_cast<double>(i + 1) / static_cast<double>(n));
    const double rms = std::sqrt(kahan_sum_squares(x) / static_cast<double>(n));
    for (double& v : x) v /= rms;
    return x;
}

inline std::vector<double> make_benchmark(const std::string& name, std::size_t n) {
    return make_benchmark(benchmark_from_name(name), n);
}

}  // namespace peelwave::signals
