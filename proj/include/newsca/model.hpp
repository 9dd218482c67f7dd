#pragma once

// Closed-form logistic description of the news model.
//
// Sign convention: f(t) = C / (1 + exp(-gamma * (t - tau))) with gamma > 0,
// i.e. an increasing sigmoid with plateau C and midpoint tau. Grey follows
// f directly, White follows 1 - f, and Black is whatever remains:
//     x_b = 1 - x_g - x_w = f_white(t) - f_grey(t).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "newsca/nelder_mead.hpp"

namespace newsca {

struct LogisticParams {
    double C{1.0};
    double tau{0.0};
    double gamma{1.0};

    friend bool operator==(const LogisticParams&, const LogisticParams&) = default;
};

// Evaluated so that exp() only ever sees a non-positive argument; saturates
// to 0 or C for large |gamma * (t - tau)| instead of overflowing.
inline double logistic(double t, const LogisticParams& p) noexcept {
    const double z = p.gamma * (t - p.tau);
    if (z >= 0.0) return p.C / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return p.C * e / (1.0 + e);
}

struct AnalyticModel {
    LogisticParams grey;
    LogisticParams white;

    friend bool operator==(const AnalyticModel&, const AnalyticModel&) = default;
};

inline double eval_grey(double t, const AnalyticModel& m) noexcept { return logistic(t, m.grey); }
inline double eval_white(double t, const AnalyticModel& m) noexcept {
    return 1.0 - logistic(t, m.white);
}
// Signed: the reference parameters dip slightly below zero near t = 0.
inline double eval_black(double t, const AnalyticModel& m) noexcept {
    return logistic(t, m.white) - logistic(t, m.grey);
}

// Parameters reproducing the published analytic curves.
inline constexpr AnalyticModel reference_model() noexcept {
    return {{0.75, 30.0, 0.15}, {0.75, 20.0, 0.25}};
}

struct Sample {
    double t{0.0};
    double value{0.0};
};

enum class CurveShape { Rising, Falling };

enum class FitStatus {
    Ok,
    TooFewPoints,
    InvalidValues,  // non-finite or outside [0, 1]
    Degenerate,     // no sigmoid information (e.g. constant)
    NotConverged,
};

inline const char* to_string(FitStatus s) {
    switch (s) {
        case FitStatus::Ok: return "ok";
        case FitStatus::TooFewPoints: return "too_few_points";
        case FitStatus::InvalidValues: return "invalid_values";
        case FitStatus::Degenerate: return "degenerate";
        case FitStatus::NotConverged: return "not_converged";
    }
    return "unknown";
}

struct FitResult {
    LogisticParams params{};
    double rmse{std::numeric_limits<double>::infinity()};
    std::size_t iterations{0};
    bool converged{false};
    FitStatus status{FitStatus::Degenerate};
};

inline constexpr std::size_t kMinFitPoints = 4;
inline constexpr std::size_t kMaxFitIterations = 10000;
inline constexpr double kFitTolerance = 1e-12;

namespace detail {

inline double shaped(double t, const LogisticParams& p, CurveShape shape) noexcept {
    const double f = logistic(t, p);
    return shape == CurveShape::Rising ? f : 1.0 - f;
}

inline double sum_squared_residuals(std::span<const Sample> s, const LogisticParams& p,
                                    CurveShape shape) noexcept {
    double sse = 0.0;
    for (const auto& x : s) {
        const double r = shaped(x.t, p, shape) - x.value;
        sse += r * r;
    }
    return sse;
}

// Data-driven starting point: plateau height, half-plateau crossing, and
// the slope of the steepest segment (a logistic peaks at C * gamma / 4).
inline std::optional<LogisticParams> initial_guess(std::span<const Sample> s, CurveShape shape) {
    std::vector<double> y;
    y.reserve(s.size());
    for (const auto& x : s) y.push_back(shape == CurveShape::Rising ? x.value : 1.0 - x.value);

    double plateau = 0.0;
    for (double v : y) plateau = std::max(plateau, v);
    if (!(plateau > 0.0)) return std::nullopt;

    double tau = s.front().t;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double half = plateau / 2.0;
        if (y[i] <= half && y[i + 1] >= half) {
            const double dy = y[i + 1] - y[i];
            tau = dy > 0.0 ? s[i].t + (half - y[i]) / dy * (s[i + 1].t - s[i].t) : s[i].t;
            break;
        }
    }

    double slope = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double dt = s[i + 1].t - s[i].t;
        if (dt > 0.0) slope = std::max(slope, (y[i + 1] - y[i]) / dt);
    }
    if (!(slope > 0.0)) return std::nullopt;
    return LogisticParams{plateau, tau, 4.0 * slope / plateau};
}

}  // namespace detail

// Least-squares fit of C, tau, gamma. Searches over (C, tau, log gamma) with
// C restricted to (0, 1], restarting the simplex until a restart no longer
// improves the objective.
inline FitResult fit_logistic(std::span<const Sample> series, CurveShape shape) {
    FitResult res;
    if (series.size() < kMinFitPoints) {
        res.status = FitStatus::TooFewPoints;
        return res;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& x : series) {
        if (!std::isfinite(x.t) || !std::isfinite(x.value) || x.value < 0.0 || x.value > 1.0) {
            res.status = FitStatus::InvalidValues;
            return res;
        }
        lo = std::min(lo, x.value);
        hi = std::max(hi, x.value);
    }
    if (hi - lo < 1e-12) {
        res.status = FitStatus::Degenerate;
        return res;
    }
    const auto guess = detail::initial_guess(series, shape);
    if (!guess) {
        res.status = FitStatus::Degenerate;
        return res;
    }

    auto unpack = [](const Point<3>& x) { return LogisticParams{x[0], x[1], std::exp(x[2])}; };
    auto objective = [&](const Point<3>& x) {
        if (!(x[0] > 0.0 && x[0] <= 1.0)) return std::numeric_limits<double>::infinity();
        return detail::sum_squared_residuals(series, unpack(x), shape);
    };

    const double span_t = series.back().t - series.front().t;
    Point<3> start{guess->C, guess->tau, std::log(guess->gamma)};
    const Point<3> scale{0.05 * guess->C, std::max(1.0, 0.05 * std::abs(span_t)), 0.1};

    NelderMeadOptions opt;
    opt.tolerance = kFitTolerance;
    double best = objective(start);
    std::size_t used = 0;
    bool converged = false;
    while (used < kMaxFitIterations) {
        opt.max_iterations = kMaxFitIterations - used;
        const auto nm = nelder_mead<3>(objective, start, scale, opt);
        used += nm.iterations;
        const double improvement = best - nm.value;
        if (nm.value <= best) {
            start = nm.x;
            best = nm.value;
        }
        if (!nm.converged) break;
        if (improvement < kFitTolerance) {
            converged = true;
            break;
        }
    }

    res.params = unpack(start);
    res.rmse = std::sqrt(best / static_cast<double>(series.size()));
    res.iterations = used;
    res.converged = converged && std::isfinite(best);
    res.status = res.converged ? FitStatus::Ok : FitStatus::NotConverged;
    return res;
}

inline std::vector<Sample> to_samples(std::span<const double> values, double t0 = 0.0) {
    std::vector<Sample> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.push_back({t0 + static_cast<double>(i), values[i]});
    return out;
}

struct ModelFit {
    AnalyticModel model{};
    FitResult grey{};
    FitResult white{};
    std::optional<double> black_rmse;  // implied black curve vs 1 - grey - white

    bool ok() const noexcept { return grey.converged && white.converged; }
};

// Fits grey (rising) and white (falling) independently; the black curve is
// implied and scored against the black share of the data.
inline ModelFit fit_model(std::span<const Sample> grey, std::span<const Sample> white) {
    if (grey.size() != white.size())
        throw std::invalid_argument("grey and white series must have equal length");
    for (std::size_t i = 0; i < grey.size(); ++i)
        if (grey[i].t != white[i].t)
            throw std::invalid_argument("grey and white series are not aligned");

    ModelFit out;
    out.grey = fit_logistic(grey, CurveShape::Rising);
    out.white = fit_logistic(white, CurveShape::Falling);
    out.model = {out.grey.params, out.white.params};
    if (out.ok()) {
        double sse = 0.0;
        for (std::size_t i = 0; i < grey.size(); ++i) {
            const double observed = 1.0 - grey[i].value - white[i].value;
            const double r = eval_black(grey[i].t, out.model) - observed;
            sse += r * r;
        }
        out.black_rmse = std::sqrt(sse / static_cast<double>(grey.size()));
    }
    return out;
}

}  // namespace newsca
