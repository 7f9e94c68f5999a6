#pragma once

// CSV input/output. Numbers are written in the shortest representation
// that round-trips binary64 exactly, so a re-parse of any emitted file
// reproduces the in-memory values bit for bit.

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "simulator.hpp"

namespace nablafc::csv {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("malformed numeric cell: '" + std::string(text) + "'");
    return v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

/// Parse header + numeric rows. Lines starting with '#' are skipped
/// (failure trailers on partial trajectory files use them). Throws
/// ParseError on ragged rows or unparseable cells.
inline Table read_table(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            if (t.header.empty()) throw ParseError("empty header row");
            continue;
        }
        if (cells.size() != t.header.size())
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(t.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw ParseError("empty input");
    return t;
}

inline void write_weights_csv(std::ostream& out, const WeightTable& w) {
    out << "j,weight\n";
    for (std::size_t j = 0; j < w.values.size(); ++j)
        out << j << ',' << format_double(w.values[j]) << '\n';
}

/// Header k,x1,...,xkappa,iters; the x(a-1) row carries iters = 0.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t dim = traj.states.empty() ? 0 : traj.states.front().size();
    out << 'k';
    for (std::size_t d = 0; d < dim; ++d) out << ",x" << (d + 1);
    out << ",iters\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        out << (traj.base - 1 + static_cast<GridIndex>(i));
        for (std::size_t d = 0; d < dim; ++d) out << ',' << format_double(traj.states[i][d]);
        out << ',' << traj.iterations[i] << '\n';
    }
}

inline void write_objective_csv(std::ostream& out, GridIndex base, const std::vector<double>& values) {
    out << "k,f_value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << (base - 1 + static_cast<GridIndex>(i)) << ',' << format_double(values[i]) << '\n';
}

}  // namespace nablafc::csv
