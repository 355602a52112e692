// SPDX-License-Identifier: Apache-2.0
#pragma once

// Run configuration: a plain key = value file merged with command-line flags.
// Flags are applied after the file, so they win.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "musicnd/core/multi_index.hpp"

namespace musicnd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero or empty fields mean "use the scenario default" until resolve() has
/// run; afterwards every field holds the value actually used.
struct RunConfig {
    std::string command;
    std::string target;  // bound name or experiment name
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    std::string out = ".";
    std::string input;  // measurement file for estimate; empty means synthetic
    std::size_t trials = 0;
    std::size_t s = 0;
    Dims n;
    Dims l;
    std::vector<double> nsr;
    std::vector<double> dyn_range;
    double sigma = 0.0;
    double min_sep = -1.0;  // RL; negative means default
    std::vector<std::string> family;
    std::vector<int> n_values;
    int grid_res = 20;
    int refine_iters = 3;
    bool timing = false;
};

/// Keys accepted in config files and as --key flags.
inline const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys{"seed",  "jobs",      "out",   "input",   "trials",   "s",
                                               "n",     "l",         "nsr",   "dyn-range", "sigma",  "min-sep",
                                               "family", "n-values", "grid-res", "refine-iters", "timing"};
    return keys;
}

namespace detail {

inline std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::string normalize_key(std::string k)
{
    for (auto& c : k)
        if (c == '_') c = '-';
    return k;
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    T v{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("bad value for " + key + ": '" + text + "'");
    return v;
}

inline std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text)
{
    std::vector<T> out;
    for (const auto& p : split_list(text)) out.push_back(parse_number<T>(key, p));
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw ConfigError("bad boolean for " + key + ": '" + text + "'");
}

}  // namespace detail

inline void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value)
{
    using namespace detail;
    const std::string key = normalize_key(trim(raw_key));
    if (key == "seed")
        cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "jobs")
        cfg.jobs = parse_number<unsigned>(key, value);
    else if (key == "out")
        cfg.out = trim(value);
    else if (key == "input")
        cfg.input = trim(value);
    else if (key == "trials")
        cfg.trials = parse_number<std::size_t>(key, value);
    else if (key == "s")
        cfg.s = parse_number<std::size_t>(key, value);
    else if (key == "n")
        cfg.n = parse_list<int>(key, value);
    else if (key == "l")
        cfg.l = parse_list<int>(key, value);
    else if (key == "nsr")
        cfg.nsr = parse_list<double>(key, value);
    else if (key == "dyn-range")
        cfg.dyn_range = parse_list<double>(key, value);
    else if (key == "sigma")
        cfg.sigma = parse_number<double>(key, value);
    else if (key == "min-sep")
        cfg.min_sep = parse_number<double>(key, value);
    else if (key == "family")
        cfg.family = split_list(value);
    else if (key == "n-values")
        cfg.n_values = parse_list<int>(key, value);
    else if (key == "grid-res")
        cfg.grid_res = parse_number<int>(key, value);
    else if (key == "refine-iters")
        cfg.refine_iters = parse_number<int>(key, value);
    else if (key == "timing")
        cfg.timing = parse_bool(key, value);
    else
        throw ConfigError("unknown configuration key '" + raw_key + "'");
}

/// Lines `key = value`; blank lines and lines starting with '#' are skipped.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in)
{
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        kv.emplace_back(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return kv;
}

inline void apply_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    for (const auto& [k, v] : parse_config_text(in)) apply_setting(cfg, k, v);
}

inline nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json j;
    j["command"] = c.command;
    j["target"] = c.target;
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    j["out"] = c.out;
    j["input"] = c.input;
    j["trials"] = c.trials;
    j["s"] = c.s;
    j["D"] = c.n.size();
    j["n"] = c.n;
    j["l"] = c.l;
    j["nsr"] = c.nsr;
    j["dyn_range"] = c.dyn_range;
    j["sigma"] = c.sigma;
    j["min_sep"] = c.min_sep;
    j["family"] = c.family;
    j["n_values"] = c.n_values;
    j["grid_res"] = c.grid_res;
    j["refine_iters"] = c.refine_iters;
    j["timing"] = c.timing;
    return j;
}

}  // namespace musicnd::cli
