#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pbc/error.hpp"
#include "pbc/point_cloud.hpp"

namespace pbc::csv {

/// Splits one record. Double-quoted fields may contain commas and doubled
/// quotes; records spanning several lines are not supported.
inline std::vector<std::string> split_record(const std::string& line, const std::string& where) {
    std::vector<std::string> fields(1);
    bool quoted = false, was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c != '"') fields.back() += c;
            else if (i + 1 < line.size() && line[i + 1] == '"') fields.back() += '"', ++i;
            else quoted = false;
        } else if (c == '"') {
            if (!fields.back().empty() || was_quoted) throw ParseError(where + ": stray quote");
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
            was_quoted = false;
        } else {
            if (was_quoted) throw ParseError(where + ": text after closing quote");
            fields.back() += c;
        }
    }
    if (quoted) throw ParseError(where + ": unterminated quoted field");
    return fields;
}

inline std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + '"';
}

inline double parse_double(const std::string& s, const std::string& where) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError(where + ": expected a number, got '" + s + "'");
    return v;
}

inline long long parse_int(const std::string& s, const std::string& where) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError(where + ": expected an integer, got '" + s + "'");
    return v;
}

namespace detail {

inline bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace detail

/**
 * Reads `x1,...,xD[,label][,ambiguous]` with a mandatory header. Coordinate
 * columns must be named x1..xD in order; `label` holds integers and
 * `ambiguous` holds 0/1. Errors carry `origin:line`.
 */
inline PointCloud read_points(std::istream& in, const std::string& origin = "input") {
    std::string line;
    if (!detail::read_line(in, line)) throw ParseError(origin + ":1: missing header row");
    const auto header = split_record(line, origin + ":1");
    std::size_t dim = 0;
    while (dim < header.size() && header[dim] == "x" + std::to_string(dim + 1)) ++dim;
    if (dim == 0) throw ParseError(origin + ":1: header must start with x1");
    int label_col = -1, amb_col = -1;
    for (std::size_t c = dim; c < header.size(); ++c) {
        if (header[c] == "label" && label_col < 0) label_col = static_cast<int>(c);
        else if (header[c] == "ambiguous" && amb_col < 0) amb_col = static_cast<int>(c);
        else throw ParseError(origin + ":1: unexpected column '" + header[c] + "'");
    }

    PointCloud cloud(dim);
    std::vector<double> row(dim);
    for (std::size_t lineno = 2; detail::read_line(in, line); ++lineno) {
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.empty()) continue;
        const auto f = split_record(line, where);
        if (f.size() != header.size())
            throw ParseError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
        for (std::size_t k = 0; k < dim; ++k) {
            row[k] = parse_double(f[k], where);
            if (!std::isfinite(row[k])) throw ParseError(where + ": coordinate is not finite");
        }
        cloud.push_back(row);
        if (label_col >= 0) cloud.labels.push_back(static_cast<int>(parse_int(f[label_col], where)));
        if (amb_col >= 0) {
            const auto a = parse_int(f[amb_col], where);
            if (a != 0 && a != 1) throw ParseError(where + ": ambiguous must be 0 or 1");
            cloud.ambiguous.push_back(a == 1);
        }
    }
    if (cloud.empty()) throw ParseError(origin + ": no data rows");
    return cloud;
}

/// Writes the cloud with 17 significant digits; label and ambiguous columns
/// are emitted when present.
inline void write_points(std::ostream& out, const PointCloud& cloud) {
    for (std::size_t k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << 'x' << k + 1;
    if (cloud.has_labels()) out << ",label";
    if (cloud.has_ambiguous()) out << ",ambiguous";
    out << '\n';
    std::ostringstream line;
    line << std::setprecision(17);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        line.str("");
        for (std::size_t k = 0; k < cloud.dim(); ++k) line << (k ? "," : "") << cloud[i][k];
        if (cloud.has_labels()) line << ',' << cloud.labels[i];
        if (cloud.has_ambiguous()) line << ',' << (cloud.ambiguous[i] ? 1 : 0);
        line << '\n';
        out << line.str();
    }
}

inline void write_labels(std::ostream& out, const std::vector<int>& labels) {
    out << "point_index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

/// Reads `point_index,label`; indices must run 0..N-1 in order.
inline std::vector<int> read_labels(std::istream& in, const std::string& origin = "labels") {
    std::string line;
    if (!detail::read_line(in, line)) throw ParseError(origin + ":1: missing header row");
    if (split_record(line, origin + ":1") != std::vector<std::string>{"point_index", "label"})
        throw ParseError(origin + ":1: header must be 'point_index,label'");
    std::vector<int> labels;
    for (std::size_t lineno = 2; detail::read_line(in, line); ++lineno) {
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.empty()) continue;
        const auto f = split_record(line, where);
        if (f.size() != 2) throw ParseError(where + ": expected 2 fields");
        if (parse_int(f[0], where) != static_cast<long long>(labels.size()))
            throw ParseError(where + ": point_index out of sequence");
        labels.push_back(static_cast<int>(parse_int(f[1], where)));
    }
    return labels;
}

}  // namespace pbc::csv
