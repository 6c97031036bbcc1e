// SPDX-License-Identifier: Apache-2.0
//
// CSV emission for error curves and probes. Numbers use 17 significant
// digits, so every value round-trips exactly.
#pragma once

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulerlab/bounds.hpp"
#include "eulerlab/error_curve.hpp"
#include "eulerlab/probes.hpp"

namespace eulerlab {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_number(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    // strtod rather than stod: stod rejects subnormals.
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (s.empty() || std::isspace(static_cast<unsigned char>(s[0])) ||
        end != begin + s.size())
        throw IoError("not a number: '" + s + "'");
    return v;
}

/// The bound column: nan where the lower bound's range h <= 1/22 does not hold.
inline double bound_or_nan(double h) {
    return h > 0.0 && h <= 1.0 / 22.0 ? bound_theorem5(h) : std::nan("");
}

inline constexpr const char* figure1_header =
    "N,h,weak_error,weak_stderr,strong_error,strong_stderr,bound_thm5,order0_ref";

inline void write_figure1_csv(std::ostream& os, const ErrorCurve& curve) {
    os << figure1_header << '\n';
    for (const auto& r : curve.rows) {
        const double n = static_cast<double>(r.steps);
        const double ref = r.steps >= 2 ? order0_reference(n, curve.horizon) : std::nan("");
        os << r.steps << ',' << format_number(r.h) << ',' << format_number(r.weak_error) << ','
           << format_number(r.weak_stderr) << ',' << format_number(r.strong_error) << ','
           << format_number(r.strong_stderr) << ',' << format_number(bound_or_nan(r.h)) << ','
           << format_number(ref) << '\n';
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

/// Reads the curve columns back from a figure-1 CSV (bound columns are recomputed).
inline ErrorCurve read_figure1_csv(std::istream& is, double horizon) {
    std::string line;
    if (!std::getline(is, line) || line != figure1_header)
        throw IoError("figure-1 CSV: unexpected header");
    ErrorCurve curve;
    curve.horizon = horizon;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 8)
            throw IoError("figure-1 CSV line " + std::to_string(lineno) + ": expected 8 fields");
        ErrorRow r;
        r.steps = std::stoull(cells[0]);
        r.h = parse_number(cells[1]);
        r.weak_error = parse_number(cells[2]);
        r.weak_stderr = parse_number(cells[3]);
        r.strong_error = parse_number(cells[4]);
        r.strong_stderr = parse_number(cells[5]);
        r.level = std::countr_zero(r.steps);
        curve.rows.push_back(r);
    }
    return curve;
}

/// Per-row diagnostics beyond the figure columns.
inline void write_error_curve_csv(std::ostream& os, const ErrorCurve& curve) {
    os << "K,N,h,weak_error,weak_stderr,strong_error,strong_stderr,blown_up_fraction,"
          "samples_used";
    const std::size_t d = curve.rows.empty() ? 0 : curve.rows.front().mean_difference.size();
    for (std::size_t i = 0; i < d; ++i) os << ",mean_diff_" << i + 1;
    os << '\n';
    for (const auto& r : curve.rows) {
        os << r.level << ',' << r.steps << ',' << format_number(r.h) << ','
           << format_number(r.weak_error) << ',' << format_number(r.weak_stderr) << ','
           << format_number(r.strong_error) << ',' << format_number(r.strong_stderr) << ','
           << format_number(r.blown_up_fraction) << ',' << r.samples_used;
        for (double v : r.mean_difference) os << ',' << format_number(v);
        os << '\n';
    }
}

inline void write_holder_csv(std::ostream& os, const HolderProbe& p) {
    os << "delta,increment,stderr,increment_over_sqrt_delta\n";
    const auto scaled = p.scaled(0.5);
    for (std::size_t i = 0; i < p.deltas.size(); ++i)
        os << format_number(p.deltas[i]) << ',' << format_number(p.increments[i]) << ','
           << format_number(p.stderrs[i]) << ',' << format_number(scaled[i]) << '\n';
}

inline void write_lipschitz_csv(std::ostream& os, const std::vector<LipschitzRow>& rows) {
    os << "h,truncated_mean,truncated_stderr,median,flagged_fraction\n";
    for (const auto& r : rows)
        os << format_number(r.h) << ',' << format_number(r.truncated_mean) << ','
           << format_number(r.truncated_stderr) << ',' << format_number(r.median) << ','
           << format_number(r.flagged_fraction) << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << 't';
    for (std::size_t i = 0; i < traj.dim(); ++i) os << ",x" << i + 1;
    os << '\n';
    for (std::size_t n = 0; n < traj.size(); ++n) {
        os << format_number(traj.grid().time(n));
        for (double v : traj.state(n)) os << ',' << format_number(v);
        os << '\n';
    }
}

/// Writes via a temporary string so a failed run never leaves a partial file.
template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << os.str();
    if (!f) throw IoError("write to '" + path + "' failed");
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace eulerlab
