#pragma once

// Internal text-format helpers shared by the IO paths. All numeric output
// goes through these so that identical runs produce identical bytes.

#include "clucert/types.hpp"

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace clucert::detail {

/// Shortest representation that round-trips a double exactly.
inline std::string fmt_full(Scalar x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Fixed 9 decimal places (certainty values and rates).
inline std::string fmt_prob(Scalar x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9f", x);
    return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

/// Parses a double, reporting the 1-based line number on failure.
inline Scalar parse_double(const std::string& token, int line_no) {
    const std::string t = trim(token);
    Scalar value = 0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw_ingestion("line " + std::to_string(line_no) + ": cannot parse number '" + t + "'");
    return value;
}

inline long parse_int(const std::string& token, int line_no) {
    const std::string t = trim(token);
    long value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw_ingestion("line " + std::to_string(line_no) + ": cannot parse integer '" + t + "'");
    return value;
}

}  // namespace clucert::detail
