#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

namespace newsca {

template <std::size_t N>
using Point = std::array<double, N>;

struct NelderMeadOptions {
    double tolerance{1e-12};        // stop when f(worst) - f(best) falls below this
    std::size_t max_iterations{10000};
    double reflect{1.0};
    double expand{2.0};
    double contract{0.5};
    double shrink{0.5};
};

template <std::size_t N>
struct NelderMeadResult {
    Point<N> x{};
    double value{std::numeric_limits<double>::infinity()};
    std::size_t iterations{0};
    bool converged{false};
};

// Downhill simplex minimization from `start` with per-axis initial offsets
// `scale`. Non-finite objective values are treated as +infinity.
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f, const Point<N>& start, const Point<N>& scale,
                                const NelderMeadOptions& opt = {}) {
    auto eval = [&](const Point<N>& p) {
        const double v = f(p);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::array<Point<N>, N + 1> x;
    std::array<double, N + 1> fx;
    x[0] = start;
    for (std::size_t i = 0; i < N; ++i) {
        x[i + 1] = start;
        x[i + 1][i] += scale[i];
    }
    for (std::size_t j = 0; j <= N; ++j) fx[j] = eval(x[j]);

    std::array<std::size_t, N + 1> order;
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        auto xs = x;
        auto fs = fx;
        for (std::size_t k = 0; k <= N; ++k) {
            x[k] = xs[order[k]];
            fx[k] = fs[order[k]];
        }
    };
    auto along = [](const Point<N>& from, const Point<N>& to, double t) {
        Point<N> p;
        for (std::size_t i = 0; i < N; ++i) p[i] = from[i] + t * (to[i] - from[i]);
        return p;
    };

    NelderMeadResult<N> res;
    std::size_t it = 0;
    for (; it < opt.max_iterations; ++it) {
        sort_simplex();
        if (std::isfinite(fx[N]) && fx[N] - fx[0] < opt.tolerance) {
            res.converged = true;
            break;
        }

        Point<N> centroid{};
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t i = 0; i < N; ++i) centroid[i] += x[j][i] / static_cast<double>(N);

        const Point<N> xr = along(centroid, x[N], -opt.reflect);
        const double fr = eval(xr);
        if (fr < fx[0]) {
            const Point<N> xe = along(centroid, x[N], -opt.reflect * opt.expand);
            const double fe = eval(xe);
            if (fe < fr) {
                x[N] = xe;
                fx[N] = fe;
            } else {
                x[N] = xr;
                fx[N] = fr;
            }
        } else if (fr < fx[N - 1]) {
            x[N] = xr;
            fx[N] = fr;
        } else {
            const bool outside = fr < fx[N];
            const Point<N> xc = outside ? along(centroid, xr, opt.contract)
                                        : along(centroid, x[N], opt.contract);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fx[N])) {
                x[N] = xc;
                fx[N] = fc;
            } else {
                for (std::size_t j = 1; j <= N; ++j) {
                    x[j] = along(x[0], x[j], opt.shrink);
                    fx[j] = eval(x[j]);
                }
            }
        }
    }
    sort_simplex();
    res.x = x[0];
    res.value = fx[0];
    res.iterations = it;
    return res;
}

}  // namespace newsca
