#pragma once

// Fixed-schema CSV output and tolerant CSV input for the command-line tool.
// Numbers go through std::to_chars / std::from_chars, so the decimal point
// never depends on the locale.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "newsca/grid.hpp"

namespace newsca {

inline constexpr std::string_view kSeriesHeader =
    "step,white,grey,black,white_frac,grey_frac,black_frac";
inline constexpr std::string_view kFractionHeader = "step,white_frac,grey_frac,black_frac";
inline constexpr std::string_view kModelHeader = "t,x_g,x_w,x_b";

// Shortest general form with `digits` significant digits.
inline std::string format_number(double v, int digits = 9) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return {buf, end};
}

// Round-trip exact representation.
inline std::string format_exact(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return {buf, end};
}

inline void write_series_csv(std::ostream& out, std::span<const StateCounts> counts,
                             std::size_t field_size) {
    const double n = static_cast<double>(field_size);
    out << kSeriesHeader << '\n';
    for (std::size_t t = 0; t < counts.size(); ++t) {
        const auto& c = counts[t];
        out << t << ',' << c.white << ',' << c.grey << ',' << c.black << ','
            << format_number(static_cast<double>(c.white) / n) << ','
            << format_number(static_cast<double>(c.grey) / n) << ','
            << format_number(static_cast<double>(c.black) / n) << '\n';
    }
}

inline void write_fraction_csv(std::ostream& out, std::span<const Fractions> series) {
    out << kFractionHeader << '\n';
    for (std::size_t t = 0; t < series.size(); ++t) {
        const auto& f = series[t];
        out << t << ',' << format_number(f.white) << ',' << format_number(f.grey) << ','
            << format_number(f.black) << '\n';
    }
}

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                                  field.back() == '\r'))
            field.remove_suffix(1);
        out.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline double parse_number(std::string_view s, std::size_t line) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw CsvError(line, "cannot parse number '" + std::string(s) + "'");
    return v;
}

// Time column plus grey and white fractions, from any of the tool's outputs
// (series, ensemble mean, or model CSV) or an external file with matching
// column names.
struct CurveTable {
    std::vector<double> t;
    std::vector<double> grey;
    std::vector<double> white;
};

inline CurveTable read_curve_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw CsvError(1, "empty input");
    ++line_no;
    const auto header = split_fields(line);
    auto find = [&](std::initializer_list<std::string_view> names) -> std::optional<std::size_t> {
        for (auto name : names)
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name) return i;
        return std::nullopt;
    };
    const auto t_col = find({"step", "t"});
    const auto g_col = find({"grey_frac", "x_g"});
    const auto w_col = find({"white_frac", "x_w"});
    if (!t_col || !g_col || !w_col)
        throw CsvError(1, "header must name a step/t column plus grey_frac/x_g and white_frac/x_w");

    CurveTable out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_fields(line);
        if (f.size() != header.size())
            throw CsvError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                        std::to_string(f.size()));
        out.t.push_back(parse_number(f[*t_col], line_no));
        out.grey.push_back(parse_number(f[*g_col], line_no));
        out.white.push_back(parse_number(f[*w_col], line_no));
    }
    return out;
}

}  // namespace newsca
