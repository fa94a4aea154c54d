#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace ma2 {

/// Formats a double with 17 significant digits (round-trip exact).
inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Splits one CSV line on commas (no quoting; our files never need it).
std::vector<std::string> csv_split(const std::string& line);

/// Reads all non-empty lines of a text file; throws ma2::Error on I/O failure.
std::vector<std::string> read_lines(const std::string& path);

} // namespace ma2
