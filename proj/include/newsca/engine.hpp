#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "newsca/grid.hpp"
#include "newsca/random.hpp"
#include "newsca/rules.hpp"

namespace newsca {

inline constexpr std::size_t kDefaultMaxSteps = 1000;

// Synchronous update: every cell's next state is computed from `grid`.
// Random numbers are consumed in row-major order, one per cell for which
// Rule::draws() holds.
template <CellRule Rule>
Grid<typename Rule::state_type> step(const Grid<typename Rule::state_type>& grid,
                                     std::size_t step_index, Rng& rng, const Rule& rule) {
    Grid<typename Rule::state_type> next = grid;
    for (std::size_t r = 0; r < grid.height(); ++r) {
        for (std::size_t c = 0; c < grid.width(); ++c) {
            const auto s = grid(r, c);
            const RandomDraw draw{Rule::draws(s) ? rng.uniform() : 0.0};
            next(r, c) = rule.next(s, neighborhood(grid, r, c), draw, step_index);
        }
    }
    return next;
}

struct SimulationConfig {
    std::size_t width{40};
    std::size_t height{40};
    std::optional<Position> seed_position{};  // grid center when unset
    Boundary boundary{Boundary::Bounded};
    std::uint64_t rng_seed{0};
    std::size_t max_steps{kDefaultMaxSteps};
    NewsRuleParams rule{};
    std::optional<std::size_t> snapshot_every{};

    Position resolved_seed() const {
        return seed_position.value_or(center_of(width, height));
    }
    std::size_t field_size() const noexcept { return width * height; }

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

inline void validate(const SimulationConfig& cfg) {
    if (cfg.width == 0 || cfg.height == 0)
        throw std::invalid_argument("grid dimensions must be positive");
    if (cfg.max_steps == 0) throw std::invalid_argument("max_steps must be at least 1");
    const Position seed = cfg.resolved_seed();
    if (seed.row >= cfg.height || seed.col >= cfg.width)
        throw std::out_of_range("seed position outside grid");
    if (cfg.snapshot_every && *cfg.snapshot_every == 0)
        throw std::invalid_argument("snapshot interval must be at least 1");
    validate(cfg.rule);
}

enum class Termination : std::uint8_t {
    Converged,
    BlackAlive,     // step budget exhausted with Black cells present
    StillChanging,  // step budget exhausted, no Black cells, grid not yet fixed
};

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::BlackAlive: return "black_alive";
        case Termination::StillChanging: return "still_changing";
    }
    return "unknown";
}

struct Snapshot {
    std::size_t step;
    NewsGrid grid;
};

struct Trajectory {
    std::vector<StateCounts> counts;  // counts[t], t = 0 is the initial field
    std::optional<std::size_t> converged_at;
    std::optional<std::size_t> black_extinct_at;
    Termination termination{Termination::BlackAlive};
    std::vector<Snapshot> snapshots;
    NewsGrid final_grid{1, 1};

    bool converged() const noexcept { return termination == Termination::Converged; }
};

// Runs the news model until it reaches a fixed point or the step budget is
// spent. The run converges at step T when counts[T] has no Black cell and
// applying one more step leaves the grid unchanged; once Black is extinct the
// dynamics are deterministic, so that grid is a true fixed point. The
// confirming step counts against max_steps.
inline Trajectory run(const SimulationConfig& cfg) {
    validate(cfg);
    const NewsRule rule{cfg.rule};
    Rng rng(cfg.rng_seed);
    NewsGrid grid = new_grid(cfg.width, cfg.height, cfg.resolved_seed(), cfg.boundary);

    Trajectory out;
    auto record = [&](std::size_t t) {
        out.counts.push_back(count_states(grid));
        if (!out.black_extinct_at && out.counts.back().black == 0) out.black_extinct_at = t;
        if (cfg.snapshot_every && t % *cfg.snapshot_every == 0) out.snapshots.push_back({t, grid});
    };
    record(0);

    for (std::size_t t = 0; t < cfg.max_steps; ++t) {
        NewsGrid next = step(grid, t, rng, rule);
        if (out.counts[t].black == 0 && next == grid) {
            out.converged_at = t;
            out.termination = Termination::Converged;
            out.final_grid = std::move(grid);
            return out;
        }
        grid = std::move(next);
        record(t + 1);
    }
    out.termination =
        out.counts.back().black > 0 ? Termination::BlackAlive : Termination::StillChanging;
    out.final_grid = std::move(grid);
    return out;
}

struct InnovationConfig {
    std::size_t width{40};
    std::size_t height{40};
    std::vector<Position> adopters{};  // grid center when empty
    Boundary boundary{Boundary::Bounded};
    std::uint64_t rng_seed{0};
    std::size_t max_steps{kDefaultMaxSteps};
    InnovationRuleParams rule{};
};

struct InnovationTrajectory {
    std::vector<std::size_t> adopted;     // adopted[t]
    std::optional<std::size_t> settled_at;  // no further adoption is possible
    InnovationGrid final_grid{1, 1};
};

// True when no NotAdopted cell can ever adopt: p < 1 means p*m > R needs m > R.
inline bool innovation_settled(const InnovationGrid& grid, const InnovationRuleParams& params) {
    for (std::size_t r = 0; r < grid.height(); ++r)
        for (std::size_t c = 0; c < grid.width(); ++c)
            if (grid(r, c) == Adoption::NotAdopted &&
                static_cast<double>(neighborhood(grid, r, c).count(Adoption::Adopted)) >
                    params.threshold)
                return false;
    return true;
}

inline InnovationTrajectory run_innovation(const InnovationConfig& cfg) {
    if (cfg.max_steps == 0) throw std::invalid_argument("max_steps must be at least 1");
    validate(cfg.rule);
    InnovationGrid grid(cfg.width, cfg.height, Adoption::NotAdopted, cfg.boundary);
    if (cfg.adopters.empty()) grid.set(center_of(cfg.width, cfg.height), Adoption::Adopted);
    for (auto p : cfg.adopters) grid.set(p, Adoption::Adopted);

    const InnovationRule rule{cfg.rule};
    Rng rng(cfg.rng_seed);
    InnovationTrajectory out;
    out.adopted.push_back(count_adopted(grid));
    for (std::size_t t = 0; t < cfg.max_steps; ++t) {
        if (innovation_settled(grid, cfg.rule)) {
            out.settled_at = t;
            break;
        }
        grid = step(grid, t, rng, rule);
        out.adopted.push_back(count_adopted(grid));
    }
    out.final_grid = std::move(grid);
    return out;
}

struct RunSummary {
    std::size_t index{0};
    std::uint64_t seed{0};
    std::optional<std::size_t> converged_at;
    std::optional<std::size_t> black_extinct_at;
    Termination termination{Termination::BlackAlive};
    StateCounts final_counts{};
};

struct ConvergenceStats {
    std::size_t converged_runs{0};
    std::optional<std::size_t> min;
    std::optional<double> median;
    std::optional<std::size_t> max;
};

struct EnsembleResult {
    FractionSeries mean;  // padded with each run's final state
    std::vector<RunSummary> runs;
    ConvergenceStats convergence;
    ConvergenceStats black_extinction;
    std::uint64_t base_seed{0};

    std::size_t run_count() const noexcept { return runs.size(); }
    std::size_t non_converged() const noexcept { return runs.size() - convergence.converged_runs; }
};

inline ConvergenceStats summarize_steps(std::vector<std::size_t> steps) {
    ConvergenceStats s;
    s.converged_runs = steps.size();
    if (steps.empty()) return s;
    std::sort(steps.begin(), steps.end());
    s.min = steps.front();
    s.max = steps.back();
    const std::size_t n = steps.size();
    s.median = n % 2 == 1 ? static_cast<double>(steps[n / 2])
                          : 0.5 * static_cast<double>(steps[n / 2 - 1] + steps[n / 2]);
    return s;
}

// Runs `runs` independent simulations; run i uses derive_run_seed(cfg.rng_seed, i).
// Results do not depend on `threads` (0 = hardware concurrency).
inline EnsembleResult run_ensemble(const SimulationConfig& cfg, std::size_t runs,
                                   std::size_t threads = 0) {
    if (runs == 0) throw std::invalid_argument("ensemble needs at least one run");
    validate(cfg);

    SimulationConfig member = cfg;
    member.snapshot_every.reset();
    std::vector<std::vector<StateCounts>> counts(runs);
    std::vector<RunSummary> summaries(runs);

    auto work = [&](std::size_t i) {
        SimulationConfig c = member;
        c.rng_seed = derive_run_seed(cfg.rng_seed, i);
        Trajectory tr = run(c);
        summaries[i] = {i, c.rng_seed, tr.converged_at, tr.black_extinct_at, tr.termination,
                        tr.counts.back()};
        counts[i] = std::move(tr.counts);
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, runs);
    if (threads == 1) {
        for (std::size_t i = 0; i < runs; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < runs; i = next++) work(i);
            });
    }

    std::size_t horizon = 0;
    for (const auto& c : counts) horizon = std::max(horizon, c.size());

    // Integer sums over runs, so the mean is independent of summation order.
    const double denom = static_cast<double>(runs) * static_cast<double>(cfg.field_size());
    EnsembleResult out;
    out.base_seed = cfg.rng_seed;
    out.mean.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        std::uint64_t w = 0, g = 0, b = 0;
        for (const auto& c : counts) {
            const StateCounts& s = c[std::min(t, c.size() - 1)];
            w += s.white;
            g += s.grey;
            b += s.black;
        }
        out.mean.push_back({static_cast<double>(w) / denom, static_cast<double>(g) / denom,
                            static_cast<double>(b) / denom});
    }

    std::vector<std::size_t> conv, extinct;
    for (const auto& s : summaries) {
        if (s.converged_at) conv.push_back(*s.converged_at);
        if (s.black_extinct_at) extinct.push_back(*s.black_extinct_at);
    }
    out.convergence = summarize_steps(std::move(conv));
    out.black_extinction = summarize_steps(std::move(extinct));
    out.runs = std::move(summaries);
    return out;
}

}  // namespace newsca
