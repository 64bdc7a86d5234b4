// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "peelwave/errors.hpp"

namespace peelwave::textio {

/// Shortest round-trip decimal form of a double; locale-independent, so
/// output files are byte-stable across runs and machines.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string join(std::span<const std::string> parts, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Single-column CSV (blank lines and '#' comments skipped) or JSON array,
/// chosen by file extension.
inline std::vector<double> read_signal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::vector<double> out;
    if (has_suffix(path, ".json")) {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
        }
        if (!j.is_array())
            throw std::invalid_argument("'" + path + "' must hold a JSON array of numbers");
        for (const auto& v : j) {
            if (!v.is_number())
                throw std::invalid_argument("'" + path + "' contains a non-numeric entry");
            out.push_back(v.get<double>());
        }
        return out;
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str() + start, &end);
        if (end == line.c_str() + start)
            throw std::invalid_argument("'" + path + "' line " + std::to_string(lineno) +
                                        ": not a number");
        out.push_back(v);
    }
    return out;
}

inline void write_signal(const std::string& path, std::span<const double> values) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    if (has_suffix(path, ".json")) {
        nlohmann::json j = nlohmann::json::array();
        for (double v : values) j.push_back(v);
        out << j.dump() << '\n';
    } else {
        for (double v : values) out << format_double(v) << '\n';
    }
    if (!out) throw io_error("failed while writing '" + path + "'");
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw io_error("failed while writing '" + path + "'");
}

}  // namespace peelwave::textio
