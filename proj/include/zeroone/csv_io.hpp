#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zeroone/dataset.hpp"
#include "zeroone/error.hpp"

namespace zeroone {

// Shortest round-trip decimal for a double; keeps CSV output byte-stable.
inline std::string fmt_real(double v) {
    for (int prec = 1; prec < 17; ++prec) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline bool parse_real(const std::string& cell, double& out) {
    const char* s = cell.c_str();
    char* end = nullptr;
    out = std::strtod(s, &end);
    if (end == s) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace detail

// Numeric CSV with the label in one column. A non-numeric first row is
// treated as a header and skipped. The normalized flag is derived: set when
// every feature value already lies in [0,1].
inline Dataset load_csv(const std::string& path, std::size_t label_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open csv file: " + path);
    Dataset data;
    std::string line;
    std::size_t row_no = 0;
    bool first = true;
    bool in_unit_range = true;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        const auto cells = detail::split_row(line);
        if (first) {
            double probe;
            if (!detail::parse_real(cells[0], probe)) {
                first = false;  // header row
                continue;
            }
        }
        if (label_column >= cells.size())
            throw DataError("csv row " + std::to_string(row_no) +
                            ": label column out of range");
        if (data.d == 0) {
            data.d = cells.size() - 1;
            if (data.d == 0) throw DataError("csv has no feature columns: " + path);
        } else if (cells.size() - 1 != data.d) {
            throw DataError("csv row " + std::to_string(row_no) + ": expected " +
                            std::to_string(data.d + 1) + " cells, got " +
                            std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v;
            if (!detail::parse_real(cells[c], v))
                throw DataError("csv row " + std::to_string(row_no) + " column " +
                                std::to_string(c + 1) + ": not numeric: " + cells[c]);
            if (c == label_column) {
                const int label = static_cast<int>(std::lround(v));
                if (label < 0 || static_cast<double>(label) != v)
                    throw DataError("csv row " + std::to_string(row_no) +
                                    ": label must be a nonnegative integer");
                data.y.push_back(label);
            } else {
                data.x.push_back(v);
                if (v < 0.0 || v > 1.0) in_unit_range = false;
            }
        }
        first = false;
    }
    data.n = data.y.size();
    if (data.n == 0) throw DataError("empty csv file: " + path);
    data.normalized = in_unit_range;
    data.check();
    return data;
}

// Label in column 0, features after it.
inline void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write csv file: " + path);
    for (std::size_t i = 0; i < data.n; ++i) {
        out << data.y[i];
        for (std::size_t j = 0; j < data.d; ++j)
            out << ',' << fmt_real(data.x[i * data.d + j]);
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

inline void write_table_csv(const std::string& path,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write csv file: " + path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace zeroone
