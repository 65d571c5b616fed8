#pragma once

// One signal per text file: whitespace-separated decimal samples.

#include <polydict/error.hpp>
#include <polydict/plym_io.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace polydict {

inline std::vector<double> read_signal(std::istream& is)
{
    std::vector<double> out;
    std::string token;
    while (is >> token) {
        out.push_back(parse_double(token));
    }
    return out;
}

inline std::vector<double> load_signal(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    try {
        return read_signal(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_signal(std::ostream& os, std::span<const double> signal)
{
    for (double v : signal) {
        os << format_double(v) << '\n';
    }
}

inline void save_signal(const std::string& path, std::span<const double> signal)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    write_signal(out, signal);
}

} // namespace polydict
