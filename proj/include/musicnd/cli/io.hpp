// SPDX-License-Identifier: Apache-2.0
#pragma once

// File formats.
//
// Measurements:   dims N1 ... ND
//                 n1 ... nD re im        (one line per sample, any order)
// Records (CSV):  '#' provenance lines, then a header and one row per trial:
//                 scenario,seed,s,D,N1..ND,L1..LD,q_rl,nsr,dyn_range,family,
//                 err_rl,err_over_q,wall_ms,method,metric

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "musicnd/cli/config.hpp"
#include "musicnd/core/model.hpp"
#include "musicnd/experiments/record.hpp"
#include "musicnd/version.hpp"

namespace musicnd::cli {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline MeasurementArray read_measurements(std::istream& in)
{
    std::string line;
    int lineno = 0;
    Dims n;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::istringstream ls(t);
        std::string word;
        ls >> word;
        if (word != "dims") throw FormatError("line " + std::to_string(lineno) + ": expected 'dims N1 ... ND'");
        int v;
        while (ls >> v) n.push_back(v);
        if (!ls.eof() || n.empty()) throw FormatError("line " + std::to_string(lineno) + ": bad dims header");
        break;
    }
    if (n.empty()) throw FormatError("missing dims header");
    SamplingGrid grid = [&] {
        try {
            return SamplingGrid(n);
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }();
    MeasurementArray y(grid);
    std::vector<char> seen(y.size(), 0);
    std::size_t filled = 0;
    std::vector<int> idx(n.size());
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::istringstream ls(t);
        for (std::size_t k = 0; k < n.size(); ++k)
            if (!(ls >> idx[k]) || idx[k] < 0 || idx[k] > n[k])
                throw FormatError("line " + std::to_string(lineno) + ": bad sample index");
        double re, im;
        if (!(ls >> re >> im)) throw FormatError("line " + std::to_string(lineno) + ": expected re im");
        std::string extra;
        if (ls >> extra) throw FormatError("line " + std::to_string(lineno) + ": trailing fields");
        const long flat = flatten(idx, n);
        if (seen[static_cast<std::size_t>(flat)])
            throw FormatError("line " + std::to_string(lineno) + ": duplicate sample");
        seen[static_cast<std::size_t>(flat)] = 1;
        ++filled;
        y[flat] = {re, im};
    }
    if (filled != y.size())
        throw FormatError("expected " + std::to_string(y.size()) + " samples, got " + std::to_string(filled));
    return y;
}

inline MeasurementArray read_measurements(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read measurement file " + path);
    return read_measurements(in);
}

inline void write_measurements(std::ostream& out, const MeasurementArray& y)
{
    const Dims& n = y.grid().max_index();
    out << "dims";
    for (int v : n) out << ' ' << v;
    out << '\n';
    char buf[64];
    for (long m = 0; m < static_cast<long>(y.size()); ++m) {
        for (int v : unflatten(m, n)) out << v << ' ';
        std::snprintf(buf, sizeof buf, "%.17g %.17g", y[m].real(), y[m].imag());
        out << buf << '\n';
    }
}

/// Shortest round-tripping text for a double; "nan" and "inf" spelled out.
inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 12; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::vector<std::string> csv_columns(std::size_t d)
{
    std::vector<std::string> c{"scenario", "seed", "s", "D"};
    for (std::size_t k = 1; k <= d; ++k) c.push_back("N" + std::to_string(k));
    for (std::size_t k = 1; k <= d; ++k) c.push_back("L" + std::to_string(k));
    for (const char* x : {"q_rl", "nsr", "dyn_range", "family", "err_rl", "err_over_q", "wall_ms", "method", "metric"})
        c.push_back(x);
    return c;
}

inline void write_records_csv(std::ostream& out, const std::vector<experiments::ExperimentRecord>& records,
                              const nlohmann::json& config)
{
    out << "# " << kVersion << '\n';
    out << "# config " << config.dump() << '\n';
    const std::size_t d = records.empty() ? 0 : records.front().n.size();
    const auto cols = csv_columns(d);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : records) {
        if (r.n.size() != d || r.l.size() != d) throw std::invalid_argument("records of different dimension");
        out << r.scenario << ',' << r.seed << ',' << r.s << ',' << d;
        for (int v : r.n) out << ',' << v;
        for (int v : r.l) out << ',' << v;
        out << ',' << format_number(r.q_rl) << ',' << format_number(r.nsr) << ',' << format_number(r.dyn_range) << ','
            << r.family << ',' << format_number(r.err_rl) << ',' << format_number(r.err_over_q) << ','
            << format_number(r.wall_ms) << ',' << r.method << ',' << format_number(r.metric) << '\n';
    }
}

inline std::vector<experiments::ExperimentRecord> read_records_csv(std::istream& in)
{
    std::vector<experiments::ExperimentRecord> out;
    std::string line;
    bool header = false;
    std::size_t d = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!header) {
            header = true;
            if (f.size() < 13 || f[0] != "scenario") throw FormatError("bad CSV header");
            d = (f.size() - 13) / 2;
            if (f != csv_columns(d)) throw FormatError("unexpected CSV columns");
            continue;
        }
        if (f.size() != 13 + 2 * d) throw FormatError("bad CSV row width");
        auto num = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
        experiments::ExperimentRecord r;
        std::size_t i = 0;
        r.scenario = f[i++];
        r.seed = std::stoull(f[i++]);
        r.s = std::stoull(f[i++]);
        if (std::stoull(f[i++]) != d) throw FormatError("row dimension differs from header");
        for (std::size_t k = 0; k < d; ++k) r.n.push_back(std::stoi(f[i++]));
        for (std::size_t k = 0; k < d; ++k) r.l.push_back(std::stoi(f[i++]));
        r.q_rl = num(f[i++]);
        r.nsr = num(f[i++]);
        r.dyn_range = num(f[i++]);
        r.family = f[i++];
        r.err_rl = num(f[i++]);
        r.err_over_q = num(f[i++]);
        r.wall_ms = num(f[i++]);
        r.method = f[i++];
        r.metric = num(f[i++]);
        out.push_back(std::move(r));
    }
    return out;
}

/// Wraps a payload with the tool version and resolved configuration.
inline nlohmann::json with_provenance(nlohmann::json payload, const nlohmann::json& config)
{
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = config;
    j["result"] = std::move(payload);
    return j;
}

/// Path of a named output file inside the output directory, which is created
/// if needed. Names containing a path separator are rejected.
inline std::filesystem::path output_file(const std::string& out_dir, const std::string& name)
{
    if (name.empty() || name.find('/') != std::string::npos || name == "." || name == "..")
        throw std::invalid_argument("output names must be plain file names");
    const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::filesystem::create_directories(dir);
    return dir / name;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace musicnd::cli
