#include <random>

#include <gtest/gtest.h>

#include "newsca/analytics.hpp"
#include "newsca/engine.hpp"

namespace newsca {
namespace {

TEST(Step, AllWhiteStaysWhite) {
    const NewsGrid g(3, 3, CellState::White);
    Rng rng(1);
    EXPECT_EQ(step(g, 0, rng, NewsRule{}), g);
}

TEST(Step, AllBlackTurnsGrey) {
    const NewsGrid g(3, 3, CellState::Black);
    Rng rng(1);
    EXPECT_EQ(step(g, 0, rng, NewsRule{}), NewsGrid(3, 3, CellState::Grey));
}

// Hand evaluation of the rules: every White cell sees m = 1, so it flips
// iff 1.5 * p > 1. Draws are taken in row-major order over White cells.
TEST(Step, SingleBlackCenterMatchesHandEvaluation) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const NewsGrid g = new_grid(3, 3, {1, 1});
        Rng rng(seed);
        const NewsGrid next = step(g, 0, rng, NewsRule{});

        Rng replay(seed);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) {
                if (r == 1 && c == 1) {
                    EXPECT_EQ(next(r, c), CellState::Black);
                    continue;
                }
                const double p = replay.uniform();
                EXPECT_EQ(next(r, c), 1.5 * p > 1.0 ? CellState::Black : CellState::White);
            }
    }
}

TEST(Step, SingleBlackCenterFlipsAboutAThird) {
    std::size_t flipped = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        Rng rng(seed);
        const auto c = count_states(step(new_grid(3, 3, {1, 1}), 0, rng, NewsRule{}));
        flipped += c.black - 1;
        total += 8;
    }
    EXPECT_NEAR(static_cast<double>(flipped) / static_cast<double>(total), 1.0 / 3.0, 0.02);
}

TEST(Step, OnlyWhiteCellsConsumeRandomness) {
    // A grid with no White cells must leave the generator untouched.
    NewsGrid g(4, 4, CellState::Grey);
    g(0, 0) = CellState::Black;
    Rng a(7), b(7);
    step(g, 0, a, NewsRule{});
    EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Run, OneByOneTrace) {
    SimulationConfig cfg;
    cfg.width = cfg.height = 1;
    const Trajectory tr = run(cfg);
    ASSERT_EQ(tr.counts.size(), 3u);
    EXPECT_EQ(tr.counts[0], (StateCounts{0, 0, 1}));
    EXPECT_EQ(tr.counts[1], (StateCounts{0, 1, 0}));
    EXPECT_EQ(tr.counts[2], (StateCounts{1, 0, 0}));
    EXPECT_EQ(tr.converged_at, 2u);
    EXPECT_EQ(tr.black_extinct_at, 1u);
    EXPECT_TRUE(tr.converged());
}

TEST(Run, ReportsNonConvergenceKinds) {
    SimulationConfig cfg;
    cfg.max_steps = 5;
    const Trajectory alive = run(cfg);
    EXPECT_EQ(alive.termination, Termination::BlackAlive);
    EXPECT_FALSE(alive.converged_at);
    EXPECT_EQ(alive.counts.size(), 6u);

    SimulationConfig tiny;
    tiny.width = tiny.height = 1;
    tiny.max_steps = 2;
    const Trajectory changing = run(tiny);
    EXPECT_EQ(changing.termination, Termination::StillChanging);
}

TEST(Run, RejectsInvalidConfig) {
    SimulationConfig cfg;
    cfg.width = 0;
    EXPECT_THROW(run(cfg), std::invalid_argument);
    cfg = {};
    cfg.max_steps = 0;
    EXPECT_THROW(run(cfg), std::invalid_argument);
    cfg = {};
    cfg.seed_position = Position{40, 0};
    EXPECT_THROW(run(cfg), std::out_of_range);
}

TEST(Run, DeterministicForSeed) {
    SimulationConfig cfg;
    cfg.rng_seed = 123;
    const Trajectory a = run(cfg), b = run(cfg);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.final_grid, b.final_grid);
    cfg.rng_seed = 124;
    EXPECT_NE(run(cfg).counts, a.counts);
}

TEST(Run, InvariantsOverManySeeds) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SimulationConfig cfg;
        cfg.width = 10 + seed % 15;
        cfg.height = 8 + seed % 11;
        cfg.boundary = seed % 2 ? Boundary::Toroidal : Boundary::Bounded;
        cfg.rng_seed = seed;
        const Trajectory tr = run(cfg);
        ASSERT_TRUE(tr.converged()) << seed;
        EXPECT_EQ(tr.counts[0], (StateCounts{cfg.field_size() - 1, 0, 1}));
        EXPECT_FALSE(conservation_violation(tr.counts, cfg.field_size()));
        EXPECT_EQ(tr.counts[*tr.converged_at].black, 0u);
        ASSERT_TRUE(tr.black_extinct_at);
        for (std::size_t t = *tr.black_extinct_at; t < tr.counts.size(); ++t)
            EXPECT_EQ(tr.counts[t].black, 0u);

        // Fixed-point characterization of the final field.
        const NewsGrid& f = tr.final_grid;
        EXPECT_EQ(count_states(f), tr.counts.back());
        for (std::size_t r = 0; r < f.height(); ++r)
            for (std::size_t c = 0; c < f.width(); ++c) {
                EXPECT_NE(f(r, c), CellState::Black);
                if (f(r, c) == CellState::Grey) {
                    EXPECT_GT(neighborhood(f, r, c).count(CellState::White), 0u);
                }
            }
    }
}

TEST(Run, SnapshotsAtRequestedInterval) {
    SimulationConfig cfg;
    cfg.snapshot_every = 10;
    const Trajectory tr = run(cfg);
    ASSERT_FALSE(tr.snapshots.empty());
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        EXPECT_EQ(tr.snapshots[i].step, 10 * i);
        EXPECT_EQ(count_states(tr.snapshots[i].grid), tr.counts[10 * i]);
    }
    EXPECT_EQ(tr.snapshots.size(), (tr.counts.size() - 1) / 10 + 1);
}

TEST(Innovation, AdoptedCountNeverDecreases) {
    std::mt19937_64 gen(4);
    for (int i = 0; i < 100; ++i) {
        InnovationConfig cfg;
        cfg.width = 1 + gen() % 10;
        cfg.height = 1 + gen() % 10;
        cfg.rng_seed = gen();
        cfg.rule.threshold = 0.5 + static_cast<double>(gen() % 300) / 100.0;
        cfg.max_steps = 50;
        const auto tr = run_innovation(cfg);
        for (std::size_t t = 1; t < tr.adopted.size(); ++t)
            EXPECT_GE(tr.adopted[t], tr.adopted[t - 1]);
    }
}

TEST(Innovation, SettlesWhenNoCellCanAdopt) {
    InnovationConfig cfg;
    cfg.width = cfg.height = 5;
    cfg.rule.threshold = 8.0;  // p * m < 8 always
    const auto tr = run_innovation(cfg);
    EXPECT_EQ(tr.settled_at, 0u);
    EXPECT_EQ(tr.adopted, std::vector<std::size_t>{1});
}

TEST(Ensemble, SingleRunEqualsThatRun) {
    SimulationConfig cfg;
    cfg.rng_seed = 99;
    const EnsembleResult res = run_ensemble(cfg, 1, 1);
    SimulationConfig member = cfg;
    member.rng_seed = derive_run_seed(99, 0);
    const Trajectory tr = run(member);
    EXPECT_EQ(res.mean, normalize(tr.counts, cfg.field_size()));
    EXPECT_EQ(res.runs[0].converged_at, tr.converged_at);
}

TEST(Ensemble, IndependentOfThreadCount) {
    SimulationConfig cfg;
    cfg.width = cfg.height = 20;
    cfg.rng_seed = 5;
    const EnsembleResult a = run_ensemble(cfg, 24, 1);
    const EnsembleResult b = run_ensemble(cfg, 24, 7);
    EXPECT_EQ(a.mean, b.mean);
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
        EXPECT_EQ(a.runs[i].converged_at, b.runs[i].converged_at);
    }
}

TEST(Ensemble, MeanIsNormalizedAndPadded) {
    SimulationConfig cfg;
    cfg.width = cfg.height = 15;
    const EnsembleResult res = run_ensemble(cfg, 10);
    for (const auto& f : res.mean) EXPECT_NEAR(f.white + f.grey + f.black, 1.0, 1e-12);
    EXPECT_EQ(res.mean.back().black, 0.0);
    std::size_t longest = 0;
    for (const auto& r : res.runs) longest = std::max(longest, *r.converged_at + 1);
    EXPECT_EQ(res.mean.size(), longest);
    EXPECT_EQ(res.convergence.converged_runs, 10u);
}

TEST(Ensemble, FlagsNonConvergedRuns) {
    SimulationConfig cfg;
    cfg.max_steps = 3;
    const EnsembleResult res = run_ensemble(cfg, 4);
    EXPECT_EQ(res.non_converged(), 4u);
    for (const auto& r : res.runs) EXPECT_EQ(r.termination, Termination::BlackAlive);
    EXPECT_FALSE(res.convergence.median);
    EXPECT_THROW(run_ensemble(cfg, 0), std::invalid_argument);
}

TEST(Ensemble, MedianOfEvenCount) {
    const auto s = summarize_steps({4, 1, 3, 2});
    EXPECT_EQ(s.min, 1u);
    EXPECT_EQ(s.max, 4u);
    EXPECT_EQ(s.median, 2.5);
}

TEST(RunSeeds, DistinctPerRunAndBase) {
    EXPECT_NE(derive_run_seed(0, 1), derive_run_seed(1, 0));
    EXPECT_NE(derive_run_seed(0, 0), derive_run_seed(0, 1));
    // First splitmix64 output for state 0 (reference value of the algorithm).
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(RngTest, UniformInUnitInterval) {
    Rng rng(0);
    for (int i = 0; i < 100000; ++i) {
        const double p = rng.uniform();
        ASSERT_GE(p, 0.0);
        ASSERT_LT(p, 1.0);
    }
}

}  // namespace
}  // namespace newsca
