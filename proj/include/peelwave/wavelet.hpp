// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "peelwave/errors.hpp"

namespace peelwave::wavelet {

/// Orthogonal analysis filter bank: a published scaling (lowpass) filter and
/// its quadrature-mirror highpass  g[k] = (-1)^k h[L-1-k].
struct FilterPair {
    std::string name;
    std::vector<double> lowpass;
    std::vector<double> highpass;
};

inline FilterPair make_filter(const std::string& name) {
    std::vector<double> h;
    if (name == "haar") {
        h = {0.70710678118654752440, 0.70710678118654752440};
    } else if (name == "sym8") {
        h = {
            -0.0033824159510061256,  -0.00054213233179114812, 0.031695087811492981,
            0.0076074873249176054,   -0.14329423835080971,    -0.061273359067658524,
            0.48135965125837221,     0.77718575170052351,     0.36444189483533893,
            -0.051945838107709037,   -0.027219029917056003,   0.049137179673607506,
            0.0038087520138906151,   -0.014952258337048231,   -0.0003029205147213668,
            0.0018899503327594609,
        };
    } else {
        throw std::invalid_argument("wavelet::make_filter: unknown filter '" + name + "'");
    }
    const std::size_t L = h.size();
    std::vector<double> g(L);
    for (std::size_t k = 0; k < L; ++k)
        g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * h[L - 1 - k];
    return {name, std::move(h), std::move(g)};
}

/// Multi-level periodized DWT coefficients. details[0] is the coarsest
/// detail block (same scale as approx), details.back() the finest.
struct WaveletCoeffs {
    std::vector<double> approx;
    std::vector<std::vector<double>> details;
    std::size_t original_length = 0;
    std::size_t levels = 0;
    std::string filter_name;
};

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

inline void check_transform_args(std::size_t n, const FilterPair& f, std::size_t levels) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("wavelet: signal length must be a power of two >= 2");
    if (levels < 1)
        throw std::invalid_argument("wavelet: levels must be >= 1");
    // Exact orthogonality of the periodized bank needs the deepest slice to
    // still cover the filter.
    if ((n >> (levels - 1)) < f.lowpass.size())
        throw std::invalid_argument("wavelet: too many levels for this length/filter "
                                    "(deepest slice shorter than the filter)");
}

}  // namespace detail

/// Mallat pyramid with circular (periodized) convolution:
///   a_out[k] = sum_j h[j] a[(2k+j) mod m],  d_out[k] = sum_j g[j] a[(2k+j) mod m].
inline WaveletCoeffs dwt(std::span<const double> signal, const FilterPair& filter,
                         std::size_t levels) {
    detail::check_transform_args(signal.size(), filter, levels);

    std::vector<double> a(signal.begin(), signal.end());
    std::vector<std::vector<double>> details_fine_first;
    const std::size_t L = filter.lowpass.size();

    for (std::size_t lev = 0; lev < levels; ++lev) {
        const std::size_t m = a.size();
        const std::size_t half = m / 2;
        std::vector<double> a_next(half), d(half);
        for (std::size_t k = 0; k < half; ++k) {
            double sa = 0.0, sd = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                const double v = a[(2 * k + j) % m];
                sa += filter.lowpass[j] * v;
                sd += filter.highpass[j] * v;
            }
            a_next[k] = sa;
            d[k] = sd;
        }
        details_fine_first.push_back(std::move(d));
        a = std::move(a_next);
    }

    WaveletCoeffs out;
    out.approx = std::move(a);
    out.details.assign(details_fine_first.rbegin(), details_fine_first.rend());
    out.original_length = signal.size();
    out.levels = levels;
    out.filter_name = filter.name;
    return out;
}

/// Inverse pyramid (transpose of the orthogonal analysis stage); exact up to
/// rounding for any filter passing the orthogonality invariants.
inline std::vector<double> idwt(const WaveletCoeffs& coeffs, const FilterPair& filter) {
    if (coeffs.filter_name != filter.name)
        throw std::invalid_argument("wavelet::idwt: coefficients were built with filter '" +
                                    coeffs.filter_name + "', not '" + filter.name + "'");
    if (coeffs.levels == 0 || coeffs.details.size() != coeffs.levels)
        throw std::invalid_argument("wavelet::idwt: level structure is inconsistent");
    if (coeffs.approx.size() != (coeffs.original_length >> coeffs.levels))
        throw std::invalid_argument("wavelet::idwt: approx block has the wrong length");

    const std::size_t L = filter.lowpass.size();
    std::vector<double> a = coeffs.approx;
    for (const auto& d : coeffs.details) {
        if (d.size() != a.size())
            throw std::invalid_argument("wavelet::idwt: detail block has the wrong length");
        const std::size_t m = 2 * a.size();
        std::vector<double> out(m, 0.0);
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t j = 0; j < L; ++j) {
                out[(2 * k + j) % m] += filter.lowpass[j] * a[k] + filter.highpass[j] * d[k];
            }
        }
        a = std::move(out);
    }
    if (a.size() != coeffs.original_length)
        throw std::invalid_argument("wavelet::idwt: reconstructed length mismatch");
    return a;
}

/// Block boundaries of a flattened coefficient vector. Order is approx
/// (when included), then details coarsest to finest.
struct CoeffLayout {
    std::size_t original_length = 0;
    std::size_t levels = 0;
    std::string filter_name;
    bool include_approx = true;
    std::vector<std::size_t> block_sizes;
};

struct FlatCoeffs {
    std::vector<double> values;
    CoeffLayout layout;
};

inline FlatCoeffs flatten(const WaveletCoeffs& coeffs, bool include_approx = true) {
    FlatCoeffs out;
    out.layout.original_length = coeffs.original_length;
    out.layout.levels = coeffs.levels;
    out.layout.filter_name = coeffs.filter_name;
    out.layout.include_approx = include_approx;
    if (include_approx) {
        out.layout.block_sizes.push_back(coeffs.approx.size());
        out.values.insert(out.values.end(), coeffs.approx.begin(), coeffs.approx.end());
    }
    for (const auto& d : coeffs.details) {
        out.layout.block_sizes.push_back(d.size());
        out.values.insert(out.values.end(), d.begin(), d.end());
    }
    return out;
}

/// Rebuild structured coefficients from a flat vector. When the layout
/// excludes the approx block, it must be supplied separately.
inline WaveletCoeffs unflatten(std::span<const double> values, const CoeffLayout& layout,
                               std::span<const double> approx_if_excluded = {}) {
    std::size_t expected = 0;
    for (std::size_t b : layout.block_sizes) expected += b;
    if (values.size() != expected)
        throw std::invalid_argument("wavelet::unflatten: flat vector length does not match "
                                    "the layout");

    WaveletCoeffs out;
    out.original_length = layout.original_length;
    out.levels = layout.levels;
    out.filter_name = layout.filter_name;

    std::size_t pos = 0;
    std::size_t block = 0;
    if (layout.include_approx) {
        const std::size_t b = layout.block_sizes.at(block++);
        out.approx.assign(values.begin() + pos, values.begin() + pos + b);
        pos += b;
    } else {
        const std::size_t expected_approx = layout.original_length >> layout.levels;
        if (approx_if_excluded.size() != expected_approx)
            throw std::invalid_argument("wavelet::unflatten: layout excludes the approx block; "
                                        "pass it explicitly");
        out.approx.assign(approx_if_excluded.begin(), approx_if_excluded.end());
    }
    for (; block < layout.block_sizes.size(); ++block) {
        const std::size_t b = layout.block_sizes[block];
        out.details.emplace_back(values.begin() + pos, values.begin() + pos + b);
        pos += b;
    }
    if (out.details.size() != out.levels)
        throw std::invalid_argument("wavelet::unflatten: layout level count mismatch");
    return out;
}

/// Default decomposition depth: log2(N) - 4, i.e. an approx block of 16,
/// clamped to the filter's validity limit.
inline std::size_t default_levels(std::size_t n, const FilterPair& filter) {
    if (!detail::is_power_of_two(n))
        throw std::invalid_argument("wavelet::default_levels: length must be a power of two");
    std::size_t log2n = 0;
    for (std::size_t v = n; v > 1; v >>= 1) ++log2n;
    std::size_t levels = log2n > 4 ? log2n - 4 : 1;
    while (levels > 1 && (n >> (levels - 1)) < filter.lowpass.size()) --levels;
    return levels;
}

}  // namespace peelwave::wavelet
