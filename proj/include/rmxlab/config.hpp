#pragma once

// Plain-text `key = value` experiment configs and the named figure presets.
//
//   ensemble       = cue | interpolating | pr | baker | sawtooth | harper  (list)
//   n_qubits       = 8               (list)
//   delta          = 0.5, 0.9        (interpolating)
//   m              = 2, 4, 8         (pr)
//   k_saw          = 0:5 | 1.5, 2.5  (sawtooth range or fixed kicks)
//   gamma_h        = 1:6 | 3         (harper range or fixed kicks)
//   t_max          = 10
//   n_operators    = 20
//   initial_states = all | 0, 5, 17
//   seed           = 12345
//   output         = out/run_      (prefix prepended to every CSV name)
//   stats          = q_sweep, number_variance, eigvec_hist, matelem_hist, asy_bound
//   hist_bins      = 100
//   hist_max       = 10

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmxlab/ensemble_spec.hpp"
#include "rmxlab/sweep.hpp"

namespace rmxlab {

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || p != end) throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || p != end) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    return out;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || p != end) throw ConfigError("key '" + key + "': '" + v + "' is not an unsigned integer");
    return out;
}

/// Either a single "lo:hi" range or a list of fixed values (each lo == hi).
inline std::vector<std::pair<double, double>> parse_kicks(const std::string& key, const std::string& v) {
    std::vector<std::pair<double, double>> out;
    for (const auto& item : split_list(v)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            const double k = parse_double(key, item);
            out.emplace_back(k, k);
        } else {
            const double lo = parse_double(key, trim(item.substr(0, colon)));
            const double hi = parse_double(key, trim(item.substr(colon + 1)));
            if (!(lo <= hi)) throw ConfigError("key '" + key + "': range bounds out of order");
            out.emplace_back(lo, hi);
        }
    }
    if (out.empty()) throw ConfigError("key '" + key + "' is empty");
    return out;
}

}  // namespace detail

/// Key/value pairs in file order; later duplicates override earlier ones.
using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_key_values(std::string_view text) {
    ConfigMap kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        auto key = detail::trim(std::string_view(body).substr(0, eq));
        auto value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline StatsFlags parse_stats_flags(const std::string& v) {
    StatsFlags f{false, false, false, false, false};
    for (const auto& item : detail::split_list(v)) {
        if (item == "q_sweep") f.q_sweep = true;
        else if (item == "number_variance") f.number_variance = true;
        else if (item == "eigvec_hist") f.eigvec_hist = true;
        else if (item == "matelem_hist") f.matelem_hist = true;
        else if (item == "asy_bound") f.asy_bound = true;
        else throw ConfigError("unknown stats flag '" + item + "'");
    }
    return f;
}

inline SweepConfig parse_config(std::string_view text) {
    const auto kv = parse_key_values(text);
    static const std::vector<std::string> known = {"ensemble", "n_qubits", "delta",       "m",      "k_saw",
                                                   "gamma_h",  "t_max",    "n_operators", "initial_states",
                                                   "seed",     "output",   "stats",       "hist_bins", "hist_max"};
    for (const auto& [k, v] : kv)
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown key '" + k + "'");

    auto get = [&](const std::string& k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& k) -> const std::string& {
        if (const auto* v = get(k)) return *v;
        throw ConfigError("missing required key '" + k + "'");
    };

    SweepConfig cfg;
    std::vector<int> qubits;
    for (const auto& s : detail::split_list(require("n_qubits")))
        qubits.push_back(static_cast<int>(detail::parse_int("n_qubits", s)));
    if (qubits.empty()) throw ConfigError("n_qubits is empty");

    for (const auto& tag : detail::split_list(require("ensemble"))) {
        const auto kind = parse_ensemble_kind(tag);
        std::vector<EnsembleSpec> variants;
        switch (kind) {
            case EnsembleKind::cue:
            case EnsembleKind::baker: variants.push_back({kind}); break;
            case EnsembleKind::interpolating:
                for (const auto& s : detail::split_list(require("delta")))
                    variants.push_back({kind, 0, detail::parse_double("delta", s)});
                break;
            case EnsembleKind::pr:
                for (const auto& s : detail::split_list(require("m")))
                    variants.push_back({kind, 0, static_cast<double>(detail::parse_int("m", s))});
                break;
            case EnsembleKind::sawtooth:
                for (auto [lo, hi] : detail::parse_kicks("k_saw", require("k_saw")))
                    variants.push_back({kind, 0, 0.0, lo, hi});
                break;
            case EnsembleKind::harper:
                for (auto [lo, hi] : detail::parse_kicks("gamma_h", require("gamma_h")))
                    variants.push_back({kind, 0, 0.0, lo, hi});
                break;
        }
        for (int n : qubits)
            for (auto v : variants) {
                v.n_qubits = n;
                cfg.ensembles.push_back(v);
            }
    }

    if (const auto* v = get("t_max")) cfg.t_max = static_cast<int>(detail::parse_int("t_max", *v));
    if (const auto* v = get("n_operators")) cfg.n_operators = static_cast<int>(detail::parse_int("n_operators", *v));
    if (const auto* v = get("seed")) cfg.seed = detail::parse_u64("seed", *v);
    if (const auto* v = get("output")) cfg.output_prefix = *v;
    if (const auto* v = get("stats")) cfg.stats = parse_stats_flags(*v);
    if (const auto* v = get("hist_bins")) {
        const auto b = detail::parse_int("hist_bins", *v);
        if (b < 1) throw ConfigError("hist_bins must be positive");
        cfg.hist.bins = static_cast<std::size_t>(b);
    }
    if (const auto* v = get("hist_max")) cfg.hist.hi = detail::parse_double("hist_max", *v);
    if (const auto* v = get("initial_states"); v && *v != "all") {
        for (const auto& s : detail::split_list(*v)) cfg.initial_states.push_back(detail::parse_int("initial_states", s));
        if (cfg.initial_states.empty()) throw ConfigError("initial_states is empty");
    }
    cfg.validate();
    return cfg;
}

inline SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Figure presets

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig1_left",  "fig1_right", "fig2_left",
                                                   "fig2_right", "fig3_stats", "fig3_chaotic"};
    return names;
}

/// Full parameter grid of a named figure. Ensemble sizes: 20 operators for
/// the interpolating sweeps, 100 for PR, 50 map samples for the chaotic
/// ensembles, 20 for the statistics panels.
inline SweepConfig preset(std::string_view name) {
    SweepConfig cfg;
    cfg.seed = 20070101;
    auto interp = [](int n, double d) { return EnsembleSpec{EnsembleKind::interpolating, n, d}; };
    auto pr = [](int n, int m) { return EnsembleSpec{EnsembleKind::pr, n, static_cast<double>(m)}; };

    if (name == "fig1_left") {
        for (double d : {0.5, 0.8, 0.9, 0.94, 0.96, 0.98, 0.99, 0.999, 0.9999}) cfg.ensembles.push_back(interp(8, d));
        cfg.n_operators = 20;
        cfg.t_max = 30;
        cfg.stats = {true, false, false, false, true};
    } else if (name == "fig1_right") {
        for (int n : {8, 7, 6, 5}) cfg.ensembles.push_back(interp(n, 0.8));
        cfg.n_operators = 20;
        cfg.t_max = 30;
        cfg.stats = {true, false, false, false, true};
    } else if (name == "fig2_left") {
        for (int m : {2, 4, 8, 16, 24, 32, 40}) cfg.ensembles.push_back(pr(8, m));
        cfg.n_operators = 100;
        cfg.t_max = 10;
        cfg.stats = {true, false, false, false, true};
    } else if (name == "fig2_right") {
        for (int n : {9, 8, 7, 6}) cfg.ensembles.push_back(pr(n, 8));
        cfg.n_operators = 100;
        cfg.t_max = 10;
        cfg.stats = {true, false, false, false, true};
    } else if (name == "fig3_stats") {
        cfg.ensembles.push_back({EnsembleKind::cue, 8});
        for (double d : {0.1, 0.5, 0.9, 0.98}) cfg.ensembles.push_back(interp(8, d));
        for (int m : {2, 4, 8, 16}) cfg.ensembles.push_back(pr(8, m));
        cfg.n_operators = 20;
        cfg.t_max = 1;
        cfg.stats = {false, true, true, true, false};
    } else if (name == "fig3_chaotic") {
        cfg.ensembles.push_back({EnsembleKind::baker, 8});
        cfg.ensembles.push_back({EnsembleKind::sawtooth, 8, 0.0, 0.0, 5.0});
        cfg.ensembles.push_back({EnsembleKind::harper, 8, 0.0, 1.0, 6.0});
        cfg.n_operators = 50;
        cfg.t_max = 200;
        cfg.stats = {true, false, false, false, false};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    return cfg;
}

}  // namespace rmxlab
