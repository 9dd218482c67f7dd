#pragma once

#include <cassert>
#include <concepts>
#include <cstddef>
#include <stdexcept>

#include "newsca/grid.hpp"

namespace newsca {

struct NewsRuleParams {
    double adoption_threshold{1.0};
    double boost_factor{1.5};
    std::size_t boost_below{3};

    friend bool operator==(const NewsRuleParams&, const NewsRuleParams&) = default;
};

struct InnovationRuleParams {
    double threshold{1.0};

    friend bool operator==(const InnovationRuleParams&, const InnovationRuleParams&) = default;
};

inline void validate(const NewsRuleParams& p) {
    if (!(p.adoption_threshold > 0.0))
        throw std::invalid_argument("adoption threshold must be positive");
    if (!(p.boost_factor >= 1.0)) throw std::invalid_argument("boost factor must be >= 1");
    if (p.boost_below > 8) throw std::invalid_argument("boost-below count must be in [0, 8]");
}

inline void validate(const InnovationRuleParams& p) {
    if (!(p.threshold > 0.0)) throw std::invalid_argument("innovation threshold must be positive");
}

// Per-cell, per-step probability of receiving the news.
struct RandomDraw {
    double p{0.0};
};

// p*m > threshold, with p scaled by the boost factor when few neighbors are Black.
// The boost affects this comparison only.
inline bool adopts_news(std::size_t m, double p, const NewsRuleParams& params) noexcept {
    assert(m <= 8 && p >= 0.0 && p < 1.0);
    const double effective = m < params.boost_below ? p * params.boost_factor : p;
    return effective * static_cast<double>(m) > params.adoption_threshold;
}

inline bool adopts_innovation(std::size_t m, double p, const InnovationRuleParams& params) noexcept {
    assert(m <= 8 && p >= 0.0 && p < 1.0);
    return p * static_cast<double>(m) > params.threshold;
}

// A neighborhood with no White cell (vacuously true when empty).
inline bool has_no_white(const Neighborhood<CellState>& nb) noexcept {
    for (auto s : nb)
        if (s == CellState::White) return false;
    return true;
}

inline CellState next_news_state(CellState current, const Neighborhood<CellState>& neighbors,
                                 RandomDraw draw, const NewsRuleParams& params) noexcept {
    switch (current) {
        case CellState::White:
            return adopts_news(neighbors.count(CellState::Black), draw.p, params) ? CellState::Black
                                                                                 : CellState::White;
        case CellState::Black:
            return has_no_white(neighbors) ? CellState::Grey : CellState::Black;
        case CellState::Grey:
            return has_no_white(neighbors) ? CellState::White : CellState::Grey;
    }
    return current;
}

inline Adoption next_innovation_state(Adoption current, const Neighborhood<Adoption>& neighbors,
                                      RandomDraw draw, const InnovationRuleParams& params) noexcept {
    if (current == Adoption::Adopted) return Adoption::Adopted;
    return adopts_innovation(neighbors.count(Adoption::Adopted), draw.p, params)
               ? Adoption::Adopted
               : Adoption::NotAdopted;
}

// Rule policies consumed by the stepper. `draws(s)` says whether a cell in
// state s consumes a random number this step; `next` is the pure transition.
// The step index is part of the update contract; neither rule depends on it.
struct NewsRule {
    using state_type = CellState;
    NewsRuleParams params{};

    static constexpr bool draws(CellState s) noexcept { return s == CellState::White; }

    CellState next(CellState s, const Neighborhood<CellState>& nb, RandomDraw d,
                   std::size_t /*step*/) const noexcept {
        return next_news_state(s, nb, d, params);
    }
};

struct InnovationRule {
    using state_type = Adoption;
    InnovationRuleParams params{};

    static constexpr bool draws(Adoption s) noexcept { return s == Adoption::NotAdopted; }

    Adoption next(Adoption s, const Neighborhood<Adoption>& nb, RandomDraw d,
                  std::size_t /*step*/) const noexcept {
        return next_innovation_state(s, nb, d, params);
    }
};

template <class R>
concept CellRule = requires(const R& rule, typename R::state_type s,
                            const Neighborhood<typename R::state_type>& nb, RandomDraw d,
                            std::size_t t) {
    { R::draws(s) } -> std::convertible_to<bool>;
    { rule.next(s, nb, d, t) } -> std::same_as<typename R::state_type>;
};

}  // namespace newsca
