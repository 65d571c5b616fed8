#pragma once

// PLYM1 text format:
//
//   PLYM1 <rows> <cols> <lags>
//   <lag 0: rows lines of cols numbers>
//   <blank line>
//   <lag 1 ...>
//
// Numbers are written in the shortest form that parses back to the same double.

#include <polydict/error.hpp>
#include <polydict/polymat.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace polydict {

/// Shortest round-trip decimal form of `v`.
inline std::string format_double(double v)
{
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) {
        throw Error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

inline double parse_double(std::string_view token)
{
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("not a number: '" + std::string(token) + "'");
    }
    return v;
}

inline void write_plym(std::ostream& os, const PolyMatrix& m)
{
    os << "PLYM1 " << m.rows() << ' ' << m.cols() << ' ' << m.lags() << '\n';
    for (Index l = 0; l < m.lags(); ++l) {
        if (l > 0) {
            os << '\n';
        }
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                if (j > 0) {
                    os << ' ';
                }
                os << format_double(m(i, j, l));
            }
            os << '\n';
        }
    }
}

inline std::string to_plym_string(const PolyMatrix& m)
{
    std::ostringstream os;
    write_plym(os, m);
    return os.str();
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline Index parse_positive(std::string_view token, const char* what)
{
    long long v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || v < 1) {
        throw ParseError(std::string("PLYM1 header: bad ") + what + " '" + std::string(token) + "'");
    }
    return static_cast<Index>(v);
}

} // namespace detail

inline PolyMatrix read_plym(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw ParseError("PLYM1: empty input");
    }
    const auto header = detail::split_ws(line);
    if (header.size() != 4 || header[0] != "PLYM1") {
        throw ParseError("PLYM1: bad header line '" + line + "'");
    }
    const Index rows = detail::parse_positive(header[1], "rows");
    const Index cols = detail::parse_positive(header[2], "cols");
    const Index lags = detail::parse_positive(header[3], "lags");

    std::vector<double> coeffs;
    coeffs.reserve(static_cast<std::size_t>(rows * cols * lags));
    Index line_no = 1;
    for (Index l = 0; l < lags; ++l) {
        if (l > 0) {
            ++line_no;
            if (!std::getline(is, line) || !detail::split_ws(line).empty()) {
                throw ParseError("PLYM1: expected blank separator before lag " + std::to_string(l) +
                                 " (line " + std::to_string(line_no) + ")");
            }
        }
        for (Index i = 0; i < rows; ++i) {
            ++line_no;
            if (!std::getline(is, line)) {
                throw ParseError("PLYM1: truncated at lag " + std::to_string(l) + ", row " + std::to_string(i));
            }
            const auto tokens = detail::split_ws(line);
            if (static_cast<Index>(tokens.size()) != cols) {
                throw ParseError("PLYM1: line " + std::to_string(line_no) + " has " +
                                 std::to_string(tokens.size()) + " values, expected " + std::to_string(cols));
            }
            for (auto t : tokens) {
                coeffs.push_back(parse_double(t));
            }
        }
    }
    while (std::getline(is, line)) {
        if (!detail::split_ws(line).empty()) {
            throw ParseError("PLYM1: trailing data after last lag block");
        }
    }
    try {
        return PolyMatrix(rows, cols, lags, std::move(coeffs));
    } catch (const ShapeError& e) {
        throw ParseError(std::string("PLYM1: ") + e.what());
    }
}

inline PolyMatrix parse_plym(const std::string& text)
{
    std::istringstream is(text);
    return read_plym(is);
}

inline PolyMatrix load_plym(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    return read_plym(in);
}

inline void save_plym(const std::string& path, const PolyMatrix& m)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    write_plym(out, m);
    if (!out) {
        throw Error("write to '" + path + "' failed");
    }
}

} // namespace polydict
