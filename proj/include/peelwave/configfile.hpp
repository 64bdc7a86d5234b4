// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "peelwave/benchlab.hpp"
#include "peelwave/errors.hpp"

namespace peelwave::configfile {

/// One parsed `key = value` entry with its source line (for error messages).
struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

using KeyValues = std::map<std::string, Entry>;

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw config_error("'" + v + "' is not a number", line);
    }
}

inline std::uint64_t parse_unsigned(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return n;
    } catch (const std::exception&) {
        throw config_error("'" + v + "' is not a nonnegative integer", line);
    }
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("'" + v + "' is not a boolean", line);
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

/// Parse flat `key = value` lines; '#' starts a comment, blank lines are
/// skipped. Unknown syntax raises config_error with its line number.
inline KeyValues parse_key_values(std::istream& in) {
    KeyValues out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected 'key = value'", lineno);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("empty key", lineno);
        if (value.empty()) throw config_error("empty value for key '" + key + "'", lineno);
        if (out.count(key)) throw config_error("duplicate key '" + key + "'", lineno);
        out[key] = Entry{value, lineno, false};
    }
    return out;
}

inline KeyValues parse_key_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    return parse_key_values(in);
}

inline void reject_unused(const KeyValues& kv) {
    for (const auto& [key, entry] : kv)
        if (!entry.used) throw config_error("unknown key '" + key + "'", entry.line);
}

/// Denoising bench runs. n / noise_shape / snr accept comma lists; the cross
/// product expands into one ExperimentConfig per combination.
struct BenchConfigFile {
    std::vector<bench::ExperimentConfig> runs;
};

inline BenchConfigFile parse_bench_config(std::istream& in) {
    const KeyValues kv = parse_key_values(in);
    const auto get = [&](const char* key) -> const Entry* {
        const auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };

    bench::ExperimentConfig base;
    std::vector<std::size_t> n_list = {base.n};
    std::vector<double> shape_list = {base.noise_shape};
    std::vector<double> snr_list = {base.snr_linear};

    if (const Entry* e = get("signal")) base.signal_name = e->value;
    if (const Entry* e = get("n")) {
        n_list.clear();
        for (const auto& item : detail::split_list(e->value))
            n_list.push_back(static_cast<std::size_t>(detail::parse_unsigned(item, e->line)));
        if (n_list.empty()) throw config_error("empty n list", e->line);
    }
    if (const Entry* e = get("noise_shape")) {
        shape_list.clear();
        for (const auto& item : detail::split_list(e->value))
            shape_list.push_back(detail::parse_number(item, e->line));
        if (shape_list.empty()) throw config_error("empty noise_shape list", e->line);
    }
    const Entry* snr_db = get("snr_db");
    const Entry* snr_linear = get("snr_linear");
    if (snr_db && snr_linear)
        throw config_error("give either snr_db or snr_linear, not both", snr_linear->line);
    if (snr_db) {
        snr_list.clear();
        base.snr_was_db = true;
        for (const auto& item : detail::split_list(snr_db->value))
            snr_list.push_back(bench::linear_from_db(detail::parse_number(item, snr_db->line)));
    } else if (snr_linear) {
        snr_list.clear();
        for (const auto& item : detail::split_list(snr_linear->value))
            snr_list.push_back(detail::parse_number(item, snr_linear->line));
    }
    if (snr_list.empty())
        throw config_error("empty snr list", snr_db ? snr_db->line : snr_linear->line);

    if (const Entry* e = get("replications"))
        base.replications = static_cast<std::size_t>(detail::parse_unsigned(e->value, e->line));
    if (const Entry* e = get("base_seed")) base.base_seed = detail::parse_unsigned(e->value, e->line);
    if (const Entry* e = get("methods")) {
        base.methods = detail::split_list(e->value);
        if (base.methods.empty()) throw config_error("empty methods list", e->line);
    }
    if (const Entry* e = get("filter")) base.filter = e->value;
    if (const Entry* e = get("levels")) {
        if (e->value == "auto")
            base.levels = -1;
        else
            base.levels = static_cast<int>(detail::parse_unsigned(e->value, e->line));
    }
    if (const Entry* e = get("alpha")) base.alpha = detail::parse_number(e->value, e->line);
    if (const Entry* e = get("eta")) base.eta = detail::parse_number(e->value, e->line);
    if (const Entry* e = get("mode")) {
        try {
            base.mode = peeling::threshold_mode_from_name(e->value);
        } catch (const std::invalid_argument& ex) {
            throw config_error(ex.what(), e->line);
        }
    }
    if (const Entry* e = get("sigma_source")) {
        if (e->value == "estimated")
            base.sigma_source = bench::SigmaSource::estimated;
        else if (e->value == "oracle")
            base.sigma_source = bench::SigmaSource::oracle;
        else
            throw config_error("sigma_source must be 'estimated' or 'oracle'", e->line);
    }
    if (const Entry* e = get("center")) base.center = detail::parse_bool(e->value, e->line);
    if (const Entry* e = get("exclude_approx"))
        base.exclude_approx = detail::parse_bool(e->value, e->line);
    if (const Entry* e = get("workers"))
        base.workers = static_cast<std::size_t>(detail::parse_unsigned(e->value, e->line));

    reject_unused(kv);

    BenchConfigFile out;
    for (std::size_t n : n_list)
        for (double shape : shape_list)
            for (double snr : snr_list) {
                bench::ExperimentConfig cfg = base;
                cfg.n = n;
                cfg.noise_shape = shape;
                cfg.snr_linear = snr;
                cfg.validate();
                out.runs.push_back(std::move(cfg));
            }
    return out;
}

inline BenchConfigFile parse_bench_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    return parse_bench_config(in);
}

/// Convergence-rate runs.
struct ConvergeConfig {
    double u = 2.0;
    double f_factor = 1.15;
    std::vector<std::size_t> n_grid = {1024, 4096, 16384};
    double alpha = 0.25;
    double eta = 0.5;
    std::size_t replications = 200;
    std::uint64_t base_seed = 42;
    std::size_t workers = 1;
};

inline ConvergeConfig parse_converge_config(std::istream& in) {
    const KeyValues kv = parse_key_values(in);
    const auto get = [&](const char* key) -> const Entry* {
        const auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };
    ConvergeConfig cfg;
    if (const Entry* e = get("u")) cfg.u = detail::parse_number(e->value, e->line);
    if (const Entry* e = get("f_factor")) cfg.f_factor = detail::parse_number(e->value, e->line);
    if (const Entry* e = get("n_grid")) {
        cfg.n_grid.clear();
        for (const auto& item : detail::split_list(e->value))
            cfg.n_grid.push_back(static_cast<std::size_t>(detail::parse_unsigned(item, e->line)));
        if (cfg.n_grid.empty()) throw config_error("empty n_grid", e->line);
    }
    if (const Entry* e = get("alpha")) cfg.alpha = detail::parse_number(e->value, e->line);
    if (const Entry* e = get("eta")) cfg.eta = detail::parse_number(e->value, e->line);
    if (const Entry* e = get("replications"))
        cfg.replications = static_cast<std::size_t>(detail::parse_unsigned(e->value, e->line));
    if (const Entry* e = get("base_seed")) cfg.base_seed = detail::parse_unsigned(e->value, e->line);
    if (const Entry* e = get("workers"))
        cfg.workers = static_cast<std::size_t>(detail::parse_unsigned(e->value, e->line));
    reject_unused(kv);
    return cfg;
}

inline ConvergeConfig parse_converge_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    return parse_converge_config(in);
}

}  // namespace peelwave::configfile
