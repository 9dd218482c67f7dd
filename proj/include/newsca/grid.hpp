#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace newsca {

// News model states.
enum class CellState : std::uint8_t { White = 0, Grey = 1, Black = 2 };

// Innovation model states; Adopted is absorbing.
enum class Adoption : std::uint8_t { NotAdopted = 0, Adopted = 1 };

enum class Boundary : std::uint8_t { Bounded, Toroidal };

struct Position {
    std::size_t row{0};
    std::size_t col{0};

    friend bool operator==(const Position&, const Position&) = default;
};

inline std::string_view to_string(Boundary b) {
    return b == Boundary::Toroidal ? "toroidal" : "bounded";
}

inline Boundary parse_boundary(std::string_view text) {
    if (text == "bounded") return Boundary::Bounded;
    if (text == "toroidal") return Boundary::Toroidal;
    throw std::invalid_argument("unknown boundary mode '" + std::string(text) + "'");
}

// Up to eight Moore neighbors of a cell, center excluded, in row-major
// offset order: (-1,-1) (-1,0) (-1,1) (0,-1) (0,1) (1,-1) (1,0) (1,1).
template <class State>
class Neighborhood {
public:
    void push(State s) { states_[size_++] = s; }

    std::size_t size() const noexcept { return size_; }
    std::span<const State> states() const noexcept { return {states_.data(), size_}; }
    auto begin() const noexcept { return states_.begin(); }
    auto end() const noexcept { return states_.begin() + static_cast<std::ptrdiff_t>(size_); }

    std::size_t count(State s) const noexcept {
        std::size_t n = 0;
        for (std::size_t i = 0; i < size_; ++i) n += states_[i] == s ? 1 : 0;
        return n;
    }

private:
    std::array<State, 8> states_{};
    std::size_t size_{0};
};

// Rectangular lattice stored row-major.
template <class State>
class Grid {
public:
    using state_type = State;

    Grid(std::size_t width, std::size_t height, State fill = State{},
         Boundary boundary = Boundary::Bounded)
        : width_(width), height_(height), boundary_(boundary) {
        if (width == 0 || height == 0)
            throw std::invalid_argument("grid dimensions must be positive");
        cells_.assign(width * height, fill);
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return cells_.size(); }
    Boundary boundary() const noexcept { return boundary_; }

    bool contains(Position p) const noexcept { return p.row < height_ && p.col < width_; }

    State operator()(std::size_t row, std::size_t col) const { return cells_[row * width_ + col]; }
    State& operator()(std::size_t row, std::size_t col) { return cells_[row * width_ + col]; }

    State at(Position p) const {
        check(p);
        return (*this)(p.row, p.col);
    }
    void set(Position p, State s) {
        check(p);
        (*this)(p.row, p.col) = s;
    }

    std::span<const State> cells() const noexcept { return cells_; }
    std::span<State> cells() noexcept { return cells_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    void check(Position p) const {
        if (!contains(p))
            throw std::out_of_range("position (" + std::to_string(p.row) + "," +
                                    std::to_string(p.col) + ") outside " +
                                    std::to_string(width_) + "x" + std::to_string(height_) +
                                    " grid");
    }

    std::size_t width_;
    std::size_t height_;
    Boundary boundary_;
    std::vector<State> cells_;
};

using NewsGrid = Grid<CellState>;
using InnovationGrid = Grid<Adoption>;

inline Position center_of(std::size_t width, std::size_t height) {
    return {height / 2, width / 2};
}

// All-White field with a single Black cell at `seed`.
inline NewsGrid new_grid(std::size_t width, std::size_t height, Position seed,
                         Boundary boundary = Boundary::Bounded) {
    NewsGrid grid(width, height, CellState::White, boundary);
    grid.set(seed, CellState::Black);
    return grid;
}

template <class State>
Neighborhood<State> neighborhood(const Grid<State>& grid, std::size_t row, std::size_t col) {
    Neighborhood<State> out;
    const auto h = static_cast<std::ptrdiff_t>(grid.height());
    const auto w = static_cast<std::ptrdiff_t>(grid.width());
    const bool wrap = grid.boundary() == Boundary::Toroidal;
    for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
        for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            auto r = static_cast<std::ptrdiff_t>(row) + dr;
            auto c = static_cast<std::ptrdiff_t>(col) + dc;
            if (wrap) {
                r = (r + h) % h;
                c = (c + w) % w;
            } else if (r < 0 || r >= h || c < 0 || c >= w) {
                continue;
            }
            out.push(grid(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
        }
    }
    return out;
}

template <class State>
Neighborhood<State> neighborhood(const Grid<State>& grid, Position p) {
    if (!grid.contains(p)) throw std::out_of_range("neighborhood position outside grid");
    return neighborhood(grid, p.row, p.col);
}

struct StateCounts {
    std::size_t white{0};
    std::size_t grey{0};
    std::size_t black{0};

    std::size_t total() const noexcept { return white + grey + black; }
    friend bool operator==(const StateCounts&, const StateCounts&) = default;
};

// Counts divided by field size.
struct Fractions {
    double white{0.0};
    double grey{0.0};
    double black{0.0};

    friend bool operator==(const Fractions&, const Fractions&) = default;
};

using FractionSeries = std::vector<Fractions>;

inline StateCounts count_states(const NewsGrid& grid) {
    StateCounts c;
    for (auto s : grid.cells()) {
        switch (s) {
            case CellState::White: ++c.white; break;
            case CellState::Grey: ++c.grey; break;
            case CellState::Black: ++c.black; break;
        }
    }
    return c;
}

inline std::size_t count_adopted(const InnovationGrid& grid) {
    std::size_t n = 0;
    for (auto s : grid.cells()) n += s == Adoption::Adopted ? 1 : 0;
    return n;
}

}  // namespace newsca
