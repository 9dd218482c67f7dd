#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "newsca/grid.hpp"

namespace newsca {

// First step whose counts do not add up to `field_size`.
inline std::optional<std::size_t> conservation_violation(std::span<const StateCounts> counts,
                                                         std::size_t field_size) {
    for (std::size_t t = 0; t < counts.size(); ++t)
        if (counts[t].total() != field_size) return t;
    return std::nullopt;
}

inline FractionSeries normalize(std::span<const StateCounts> counts, std::size_t field_size) {
    if (field_size == 0) throw std::invalid_argument("field size must be positive");
    if (auto bad = conservation_violation(counts, field_size))
        throw std::logic_error("counts at step " + std::to_string(*bad) + " sum to " +
                               std::to_string(counts[*bad].total()) + ", expected " +
                               std::to_string(field_size));
    const double n = static_cast<double>(field_size);
    FractionSeries out;
    out.reserve(counts.size());
    for (const auto& c : counts)
        out.push_back({static_cast<double>(c.white) / n, static_cast<double>(c.grey) / n,
                       static_cast<double>(c.black) / n});
    return out;
}

struct StabilizationRatio {
    double grey{0.0};
    double white{0.0};
    double black{0.0};
};

inline StabilizationRatio stabilization_ratio(std::span<const Fractions> series) {
    if (series.empty()) throw std::invalid_argument("stabilization ratio of an empty series");
    const Fractions& last = series.back();
    return {last.grey, last.white, last.black};
}

struct CrossPoint {
    std::size_t step{0};
    double level{0.0};
    double spread{0.0};
};

inline double pairwise_spread(const Fractions& f) {
    return std::max({std::abs(f.white - f.grey), std::abs(f.white - f.black),
                     std::abs(f.grey - f.black)});
}

// Step where the three curves are mutually closest (minimax pairwise gap);
// the earliest such step wins ties.
inline CrossPoint cross_point(std::span<const Fractions> series) {
    if (series.empty()) throw std::invalid_argument("cross point of an empty series");
    CrossPoint best{0, 0.0, pairwise_spread(series[0])};
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double s = pairwise_spread(series[t]);
        if (s < best.spread) best = {t, 0.0, s};
    }
    const Fractions& f = series[best.step];
    best.level = (f.white + f.grey + f.black) / 3.0;
    return best;
}

// Simple moving average over `window` consecutive points; output has
// size() - window + 1 entries.
inline std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
    if (window == 0) throw std::invalid_argument("moving average window must be positive");
    std::vector<double> out;
    if (values.size() < window) return out;
    out.reserve(values.size() - window + 1);
    for (std::size_t i = 0; i + window <= values.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < window; ++k) s += values[i + k];
        out.push_back(s / static_cast<double>(window));
    }
    return out;
}

struct UnimodalityReport {
    bool unimodal{false};
    std::size_t peak{0};
    std::size_t rises_after_peak{0};   // steps with v[t+1] > v[t] past the peak
    std::size_t falls_before_peak{0};  // steps with v[t+1] < v[t] before the peak
    double largest_violation{0.0};
};

// Nonstrictly increasing up to the first global maximum, nonstrictly
// decreasing afterwards.
inline UnimodalityReport check_unimodal(std::span<const double> v) {
    UnimodalityReport r;
    if (v.empty()) return r;
    r.peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    for (std::size_t t = 0; t + 1 < v.size(); ++t) {
        const double d = v[t + 1] - v[t];
        if (t < r.peak && d < 0.0) {
            ++r.falls_before_peak;
            r.largest_violation = std::max(r.largest_violation, -d);
        } else if (t >= r.peak && d > 0.0) {
            ++r.rises_after_peak;
            r.largest_violation = std::max(r.largest_violation, d);
        }
    }
    r.unimodal = r.rises_after_peak == 0 && r.falls_before_peak == 0;
    return r;
}

inline std::vector<double> black_component(std::span<const Fractions> series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (const auto& f : series) out.push_back(f.black);
    return out;
}

}  // namespace newsca
