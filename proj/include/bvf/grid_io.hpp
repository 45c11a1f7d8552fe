#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "bvf/grid.hpp"

namespace bvf {

enum class GridFormat { json, csv };

/// Picks the format from a path suffix; ".csv" selects CSV, anything else JSON.
inline GridFormat grid_format_for_path(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? GridFormat::csv
                                                                             : GridFormat::json;
}

namespace detail {

// Shortest decimal form that round-trips binary64.
inline std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

inline double parse_double(const std::string& token, const std::string& where) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw std::runtime_error("grid file: non-numeric token '" + token + "' at " + where);
    return v;
}

} // namespace detail

inline nlohmann::ordered_json grid_to_json(const GridFunction& g) {
    nlohmann::ordered_json j;
    j["rect"] = {{"a", g.rect().a}, {"b", g.rect().b}, {"c", g.rect().c}, {"d", g.rect().d}};
    j["m"] = g.m();
    j["n"] = g.n();
    j["values"] = std::vector<double>(g.values().begin(), g.values().end());
    return j;
}

inline GridFunction grid_from_json(const nlohmann::json& j) {
    for (const char* key : {"rect", "m", "n", "values"}) {
        if (!j.contains(key))
            throw std::runtime_error(std::string("grid file: missing field '") + key + "'");
    }
    const auto& jr = j.at("rect");
    for (const char* key : {"a", "b", "c", "d"}) {
        if (!jr.contains(key))
            throw std::runtime_error(std::string("grid file: rect is missing '") + key + "'");
    }
    Rect rect{jr.at("a").get<double>(), jr.at("b").get<double>(), jr.at("c").get<double>(),
              jr.at("d").get<double>()};
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    const auto& jv = j.at("values");
    if (!jv.is_array()) throw std::runtime_error("grid file: 'values' must be an array");
    std::vector<double> values;
    values.reserve(jv.size());
    for (std::size_t k = 0; k < jv.size(); ++k) {
        if (!jv[k].is_number())
            throw std::runtime_error("grid file: values[" + std::to_string(k) +
                                     "] is not a number");
        values.push_back(jv[k].get<double>());
    }
    return GridFunction(rect, m, n, std::move(values)); // length/finiteness checked there
}

/// CSV layout: header line `a,b,c,d,m,n`, then n+1 lines of m+1 comma-separated
/// values; line j holds row j (y = y_j).
inline std::string grid_to_csv(const GridFunction& g) {
    std::string out;
    out += detail::format_double(g.rect().a) + "," + detail::format_double(g.rect().b) + "," +
           detail::format_double(g.rect().c) + "," + detail::format_double(g.rect().d) + "," +
           std::to_string(g.m()) + "," + std::to_string(g.n()) + "\n";
    for (int j = 0; j <= g.n(); ++j) {
        for (int i = 0; i <= g.m(); ++i) {
            if (i) out += ",";
            out += detail::format_double(g.at(i, j));
        }
        out += "\n";
    }
    return out;
}

inline GridFunction grid_from_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> tokens;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                tokens.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        tokens.push_back(cur);
        return tokens;
    };
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("grid file: empty CSV");
    auto header = split(line);
    if (header.size() != 6)
        throw std::runtime_error("grid file: CSV header must be a,b,c,d,m,n (got " +
                                 std::to_string(header.size()) + " fields)");
    Rect rect{detail::parse_double(header[0], "header field 1"),
              detail::parse_double(header[1], "header field 2"),
              detail::parse_double(header[2], "header field 3"),
              detail::parse_double(header[3], "header field 4")};
    const int m = static_cast<int>(detail::parse_double(header[4], "header field 5"));
    const int n = static_cast<int>(detail::parse_double(header[5], "header field 6"));
    if (m < 1 || n < 1) throw std::runtime_error("grid file: cell counts must be >= 1");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(m + 1) * (n + 1));
    for (int j = 0; j <= n; ++j) {
        if (!std::getline(in, line))
            throw std::runtime_error("grid file: expected " + std::to_string(n + 1) +
                                     " data rows, got " + std::to_string(j));
        auto tokens = split(line);
        if (tokens.size() != static_cast<std::size_t>(m + 1))
            throw std::runtime_error("grid file: row " + std::to_string(j) + " has " +
                                     std::to_string(tokens.size()) + " values, expected " +
                                     std::to_string(m + 1));
        for (int i = 0; i <= m; ++i)
            values.push_back(detail::parse_double(
                tokens[static_cast<std::size_t>(i)],
                "row " + std::to_string(j) + ", field " + std::to_string(i)));
    }
    return GridFunction(rect, m, n, std::move(values));
}

/// Writes a grid; format chosen by extension unless given explicitly.
/// read_grid(write_grid(g)) reproduces g bit-exactly for finite binary64 values.
inline void write_grid(const GridFunction& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_grid: cannot open '" + path + "'");
    if (grid_format_for_path(path) == GridFormat::csv) {
        out << grid_to_csv(g);
    } else {
        out << grid_to_json(g).dump(2) << "\n";
    }
    if (!out) throw std::runtime_error("write_grid: failed writing '" + path + "'");
}

inline GridFunction read_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_grid: cannot open '" + path + "'");
    if (grid_format_for_path(path) == GridFormat::csv) return grid_from_csv(in);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("read_grid: '" + path + "': " + e.what());
    }
    return grid_from_json(j);
}

} // namespace bvf
