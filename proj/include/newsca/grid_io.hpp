#pragma once

// Text encodings of a news grid:
//   ASCII   header "<width> <height> <boundary>", then one line per row with
//           '.' White, 'o' Grey, '#' Black.
//   PGM     plain graymap (P2), maxval 255: White 255, Grey 128, Black 0.

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "newsca/grid.hpp"

namespace newsca {

inline char to_glyph(CellState s) {
    switch (s) {
        case CellState::White: return '.';
        case CellState::Grey: return 'o';
        case CellState::Black: return '#';
    }
    return '?';
}

inline CellState from_glyph(char c) {
    switch (c) {
        case '.': return CellState::White;
        case 'o': return CellState::Grey;
        case '#': return CellState::Black;
        default: throw std::invalid_argument(std::string("unknown cell glyph '") + c + "'");
    }
}

inline std::string to_ascii(const NewsGrid& grid) {
    std::string out = std::to_string(grid.width()) + " " + std::to_string(grid.height()) + " " +
                      std::string(to_string(grid.boundary())) + "\n";
    out.reserve(out.size() + grid.size() + grid.height());
    for (std::size_t r = 0; r < grid.height(); ++r) {
        for (std::size_t c = 0; c < grid.width(); ++c) out.push_back(to_glyph(grid(r, c)));
        out.push_back('\n');
    }
    return out;
}

inline NewsGrid parse_ascii(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("missing grid header");
    std::istringstream hs(header);
    std::size_t width = 0, height = 0;
    std::string boundary;
    if (!(hs >> width >> height >> boundary))
        throw std::invalid_argument("malformed grid header '" + header + "'");
    NewsGrid grid(width, height, CellState::White, parse_boundary(boundary));
    std::string line;
    for (std::size_t r = 0; r < height; ++r) {
        if (!std::getline(in, line))
            throw std::invalid_argument("grid truncated at row " + std::to_string(r));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() != width)
            throw std::invalid_argument("grid row " + std::to_string(r) + " has " +
                                        std::to_string(line.size()) + " cells, expected " +
                                        std::to_string(width));
        for (std::size_t c = 0; c < width; ++c) grid(r, c) = from_glyph(line[c]);
    }
    return grid;
}

inline NewsGrid parse_ascii(const std::string& text) {
    std::istringstream in(text);
    return parse_ascii(in);
}

inline int gray_level(CellState s) {
    switch (s) {
        case CellState::White: return 255;
        case CellState::Grey: return 128;
        case CellState::Black: return 0;
    }
    return 0;
}

inline std::string to_pgm(const NewsGrid& grid) {
    std::string out = "P2\n" + std::to_string(grid.width()) + " " +
                      std::to_string(grid.height()) + "\n255\n";
    for (std::size_t r = 0; r < grid.height(); ++r) {
        for (std::size_t c = 0; c < grid.width(); ++c) {
            if (c != 0) out.push_back(' ');
            out += std::to_string(gray_level(grid(r, c)));
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace newsca
