// newsca: command-line front end for the news-diffusion automaton.
//
//   newsca simulate   one run: series CSV, snapshots, manifest
//   newsca ensemble   seeded runs: mean series, per-run stats, summary
//   newsca eval-model evaluate the logistic model over a step range
//   newsca fit        fit the logistic model to a series CSV
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 non-convergence, 4 fit failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "newsca/analytics.hpp"
#include "newsca/csv.hpp"
#include "newsca/engine.hpp"
#include "newsca/grid_io.hpp"
#include "newsca/manifest.hpp"
#include "newsca/model.hpp"

namespace fs = std::filesystem;
using namespace newsca;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kNotConverged = 3, kFitFailed = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
    if (const char* env = std::getenv("NEWSCA_OUT_DIR"); env && *env) return env;
    return ".";
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

RunManifest load_manifest(const std::optional<std::string>& path, const std::string& command) {
    if (!path) {
        RunManifest m;
        m.command = command;
        return m;
    }
    RunManifest m;
    try {
        m = parse_manifest(read_file(*path));
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError("invalid manifest " + *path + ": " + e.what());
    }
    if (m.command != command)
        throw UsageError("manifest " + *path + " was written by '" + m.command + "', not '" +
                         command + "'");
    return m;
}

// Flags shared by simulate and ensemble. Unset flags fall back to the
// manifest (when given) and then to the built-in defaults.
struct SimFlags {
    std::optional<std::size_t> width, height, seed_row, seed_col, max_steps, boost_below;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> boundary;
    std::optional<double> threshold, boost;

    void add(CLI::App& app) {
        app.add_option("--width", width, "Field width in cells (default 40)");
        app.add_option("--height", height, "Field height in cells (default 40)");
        app.add_option("--seed", seed, "RNG seed (default 0)");
        app.add_option("--seed-row", seed_row, "Row of the initial Black cell (default center)");
        app.add_option("--seed-col", seed_col, "Column of the initial Black cell (default center)");
        app.add_option("--boundary", boundary, "bounded | toroidal (default bounded)");
        app.add_option("--max-steps", max_steps, "Step budget (default 1000)");
        app.add_option("--threshold", threshold, "Adoption threshold for p*m (default 1)");
        app.add_option("--boost", boost, "Multiplier on p when few neighbors are Black (default 1.5)");
        app.add_option("--boost-below", boost_below, "Boost applies when m is below this (default 3)");
    }

    SimulationConfig apply(SimulationConfig c) const {
        const bool resized = width || height;
        if (width) c.width = *width;
        if (height) c.height = *height;
        if (resized && !seed_row && !seed_col) c.seed_position.reset();
        if (seed_row || seed_col) {
            const Position center = center_of(c.width, c.height);
            const Position cur = c.seed_position.value_or(center);
            c.seed_position = Position{seed_row.value_or(resized ? center.row : cur.row),
                                       seed_col.value_or(resized ? center.col : cur.col)};
        }
        if (seed) c.rng_seed = *seed;
        if (boundary) {
            try {
                c.boundary = parse_boundary(*boundary);
            } catch (const std::exception& e) {
                throw UsageError(e.what());
            }
        }
        if (max_steps) c.max_steps = *max_steps;
        if (threshold) c.rule.adoption_threshold = *threshold;
        if (boost) c.rule.boost_factor = *boost;
        if (boost_below) c.rule.boost_below = *boost_below;
        return c;
    }
};

SimulationConfig checked(SimulationConfig c) {
    try {
        validate(c);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    c.seed_position = c.resolved_seed();
    return c;
}

std::string ratio_text(const StabilizationRatio& r) {
    return format_number(r.grey, 6) + " : " + format_number(r.white, 6) + " : " +
           format_number(r.black, 6);
}

// --- simulate ---------------------------------------------------------------

struct SimulateCmd {
    SimFlags sim;
    std::optional<std::size_t> snapshot_every;
    std::string snapshot_format{"ascii"};
    std::optional<std::string> manifest;
    std::string out{default_out_dir()};

    void add(CLI::App& app) {
        sim.add(app);
        app.add_option("--snapshot-every", snapshot_every, "Write a grid snapshot every N steps");
        app.add_option("--snapshot-format", snapshot_format, "ascii | pgm")
            ->check(CLI::IsMember({"ascii", "pgm"}));
        app.add_option("--manifest", manifest, "Re-run from a previously written manifest");
        app.add_option("--out", out, "Output directory (default $NEWSCA_OUT_DIR or .)");
    }

    int operator()() const {
        RunManifest m = load_manifest(manifest, "simulate");
        SimulationConfig cfg = sim.apply(m.simulation);
        if (snapshot_every) cfg.snapshot_every = *snapshot_every;
        cfg = checked(cfg);
        m.simulation = cfg;

        const Trajectory tr = run(cfg);
        const fs::path dir(out);

        std::ostringstream csv;
        write_series_csv(csv, tr.counts, cfg.field_size());
        write_file(dir / "series.csv", csv.str());
        for (const auto& snap : tr.snapshots) {
            char name[32];
            std::snprintf(name, sizeof name, "step_%06zu.%s", snap.step,
                          snapshot_format == "pgm" ? "pgm" : "txt");
            write_file(dir / "snapshots" / name,
                       snapshot_format == "pgm" ? to_pgm(snap.grid) : to_ascii(snap.grid));
        }
        write_file(dir / "simulate.manifest.json", dump_manifest(m));

        const FractionSeries series = normalize(tr.counts, cfg.field_size());
        const CrossPoint cp = cross_point(series);
        std::cout << "status: " << to_string(tr.termination) << '\n';
        std::cout << "converged_at: "
                  << (tr.converged_at ? std::to_string(*tr.converged_at) : std::string("none"))
                  << '\n';
        std::cout << "black_extinct_at: "
                  << (tr.black_extinct_at ? std::to_string(*tr.black_extinct_at)
                                          : std::string("none"))
                  << '\n';
        std::cout << "final grey : white : black = " << ratio_text(stabilization_ratio(series))
                  << '\n';
        std::cout << "cross_point: step " << cp.step << ", level " << format_number(cp.level, 6)
                  << ", spread " << format_number(cp.spread, 6) << '\n';
        return tr.converged() ? kOk : kNotConverged;
    }
};

// --- ensemble ---------------------------------------------------------------

struct EnsembleCmd {
    SimFlags sim;
    std::optional<std::size_t> runs;
    std::size_t threads{0};
    std::optional<std::string> manifest;
    std::string out{default_out_dir()};

    void add(CLI::App& app) {
        sim.add(app);
        app.add_option("--runs", runs, "Number of runs (default 100)");
        app.add_option("--threads", threads, "Worker threads, 0 = all cores (does not affect output)");
        app.add_option("--manifest", manifest, "Re-run from a previously written manifest");
        app.add_option("--out", out, "Output directory (default $NEWSCA_OUT_DIR or .)");
    }

    int operator()() const {
        RunManifest m = load_manifest(manifest, "ensemble");
        const SimulationConfig cfg = checked(sim.apply(m.simulation));
        const std::size_t n = runs.value_or(m.runs.value_or(100));
        if (n == 0) throw UsageError("--runs must be at least 1");
        m.simulation = cfg;
        m.runs = n;

        const EnsembleResult res = run_ensemble(cfg, n, threads);
        const fs::path dir(out);

        std::ostringstream mean;
        write_fraction_csv(mean, res.mean);
        write_file(dir / "ensemble_mean.csv", mean.str());

        auto opt = [](const auto& v) {
            std::ostringstream s;
            if (v) s << *v;
            return s.str();
        };
        std::ostringstream per_run;
        per_run << "run,seed,status,converged_at,black_extinct_at,final_white,final_grey,"
                   "final_black\n";
        std::size_t in_band = 0;
        for (const auto& r : res.runs) {
            per_run << r.index << ',' << r.seed << ',' << to_string(r.termination) << ','
                    << opt(r.converged_at) << ',' << opt(r.black_extinct_at) << ','
                    << r.final_counts.white << ',' << r.final_counts.grey << ','
                    << r.final_counts.black << '\n';
            if (r.converged_at && *r.converged_at >= 80 && *r.converged_at <= 150) ++in_band;
        }
        write_file(dir / "ensemble_runs.csv", per_run.str());

        const StabilizationRatio ratio = stabilization_ratio(res.mean);
        const CrossPoint cp = cross_point(res.mean);
        auto med = [](const std::optional<double>& v) {
            return v ? format_number(*v) : std::string();
        };
        std::ostringstream summary;
        summary << "metric,value\n"
                << "runs," << res.run_count() << '\n'
                << "converged_runs," << res.convergence.converged_runs << '\n'
                << "converged_min," << opt(res.convergence.min) << '\n'
                << "converged_median," << med(res.convergence.median) << '\n'
                << "converged_max," << opt(res.convergence.max) << '\n'
                << "converged_share_80_150,"
                << format_number(static_cast<double>(in_band) / static_cast<double>(n)) << '\n'
                << "black_extinct_min," << opt(res.black_extinction.min) << '\n'
                << "black_extinct_median," << med(res.black_extinction.median) << '\n'
                << "black_extinct_max," << opt(res.black_extinction.max) << '\n'
                << "final_grey," << format_number(ratio.grey) << '\n'
                << "final_white," << format_number(ratio.white) << '\n'
                << "final_black," << format_number(ratio.black) << '\n'
                << "cross_step," << cp.step << '\n'
                << "cross_level," << format_number(cp.level) << '\n'
                << "cross_spread," << format_number(cp.spread) << '\n';
        write_file(dir / "ensemble_summary.csv", summary.str());
        write_file(dir / "ensemble.manifest.json", dump_manifest(m));

        std::cout << "runs: " << n << " (converged " << res.convergence.converged_runs << ")\n";
        std::cout << "convergence steps: min " << opt(res.convergence.min) << ", median "
                  << med(res.convergence.median) << ", max " << opt(res.convergence.max) << '\n';
        std::cout << "final grey : white : black = " << ratio_text(ratio) << '\n';
        std::cout << "cross_point: step " << cp.step << ", level " << format_number(cp.level, 6)
                  << ", spread " << format_number(cp.spread, 6) << '\n';
        return res.non_converged() == 0 ? kOk : kNotConverged;
    }
};

// --- eval-model ---------------------------------------------------------------

LogisticParams logistic_flag(const std::vector<double>& v, const char* name) {
    if (v.size() != 3)
        throw UsageError(std::string(name) + " expects C,tau,gamma");
    const LogisticParams p{v[0], v[1], v[2]};
    if (!(p.C > 0.0 && p.C <= 1.0)) throw UsageError(std::string(name) + ": C must be in (0, 1]");
    if (!(p.gamma > 0.0)) throw UsageError(std::string(name) + ": gamma must be positive");
    if (!std::isfinite(p.tau)) throw UsageError(std::string(name) + ": tau must be finite");
    return p;
}

struct EvalModelCmd {
    std::optional<long> t_min, t_max;
    std::vector<double> grey, white;
    std::optional<std::string> manifest;
    std::string out{default_out_dir()};

    void add(CLI::App& app) {
        app.add_option("--t-min", t_min, "First step (default 0)");
        app.add_option("--t-max", t_max, "Last step, inclusive (default 120)");
        app.add_option("--grey", grey, "Grey curve C,tau,gamma (default 0.75,30,0.15)")
            ->delimiter(',')
            ->expected(3);
        app.add_option("--white", white, "White curve C,tau,gamma (default 0.75,20,0.25)")
            ->delimiter(',')
            ->expected(3);
        app.add_option("--manifest", manifest, "Re-run from a previously written manifest");
        app.add_option("--out", out, "Output directory (default $NEWSCA_OUT_DIR or .)");
    }

    int operator()() const {
        RunManifest m = load_manifest(manifest, "eval-model");
        AnalyticModel model = m.model.value_or(reference_model());
        if (!grey.empty()) model.grey = logistic_flag(grey, "--grey");
        if (!white.empty()) model.white = logistic_flag(white, "--white");
        const long lo = t_min.value_or(m.t_min.value_or(0));
        const long hi = t_max.value_or(m.t_max.value_or(120));
        if (hi < lo) throw UsageError("--t-max must not be below --t-min");
        m.model = model;
        m.t_min = lo;
        m.t_max = hi;

        std::ostringstream csv;
        csv << kModelHeader << '\n';
        for (long t = lo; t <= hi; ++t) {
            const auto td = static_cast<double>(t);
            csv << t << ',' << format_exact(eval_grey(td, model)) << ','
                << format_exact(eval_white(td, model)) << ','
                << format_exact(eval_black(td, model)) << '\n';
        }
        const fs::path dir(out);
        write_file(dir / "model.csv", csv.str());
        write_file(dir / "eval-model.manifest.json", dump_manifest(m));
        std::cout << "wrote " << (hi - lo + 1) << " rows to " << (dir / "model.csv").string()
                  << '\n';
        return kOk;
    }
};

// --- fit ----------------------------------------------------------------------

struct FitCmd {
    std::optional<std::string> input;
    std::optional<std::string> manifest;
    std::string out{default_out_dir()};

    void add(CLI::App& app) {
        app.add_option("--input", input, "Series CSV (simulate, ensemble or eval-model output)");
        app.add_option("--manifest", manifest, "Re-run from a previously written manifest");
        app.add_option("--out", out, "Output directory (default $NEWSCA_OUT_DIR or .)");
    }

    int operator()() const {
        RunManifest m = load_manifest(manifest, "fit");
        if (input) m.input = *input;
        if (!m.input) throw UsageError("--input is required");

        std::istringstream in(read_file(*m.input));
        CurveTable table;
        try {
            table = read_curve_csv(in);
        } catch (const CsvError& e) {
            throw IoError(*m.input + ": " + e.what());
        }
        std::vector<Sample> g, w;
        for (std::size_t i = 0; i < table.t.size(); ++i) {
            g.push_back({table.t[i], table.grey[i]});
            w.push_back({table.t[i], table.white[i]});
        }
        const ModelFit fit = fit_model(g, w);

        auto row = [](const char* name, const FitResult& r) {
            std::ostringstream s;
            s << name << ',' << format_exact(r.params.C) << ',' << format_exact(r.params.tau) << ','
              << format_exact(r.params.gamma) << ','
              << (std::isfinite(r.rmse) ? format_exact(r.rmse) : std::string()) << ','
              << r.iterations << ',' << to_string(r.status) << '\n';
            return s.str();
        };
        std::ostringstream params;
        params << "curve,C,tau,gamma,rmse,iterations,status\n"
               << row("grey", fit.grey) << row("white", fit.white) << "black,,,,"
               << (fit.black_rmse ? format_exact(*fit.black_rmse) : std::string()) << ",,"
               << (fit.ok() ? "implied" : "unavailable") << '\n';

        std::ostringstream cmp;
        cmp << "step,sim_white,sim_grey,sim_black,model_white,model_grey,model_black\n";
        for (std::size_t i = 0; i < table.t.size(); ++i) {
            const double t = table.t[i];
            cmp << format_exact(t) << ',' << format_number(table.white[i]) << ','
                << format_number(table.grey[i]) << ','
                << format_number(1.0 - table.grey[i] - table.white[i]) << ','
                << format_number(eval_white(t, fit.model)) << ','
                << format_number(eval_grey(t, fit.model)) << ','
                << format_number(eval_black(t, fit.model)) << '\n';
        }

        const fs::path dir(out);
        write_file(dir / "fit_params.csv", params.str());
        write_file(dir / "fit_comparison.csv", cmp.str());
        write_file(dir / "fit.manifest.json", dump_manifest(m));

        auto report = [](const char* name, const FitResult& r) {
            std::cout << name << ": " << to_string(r.status) << "  C=" << format_number(r.params.C, 6)
                      << " tau=" << format_number(r.params.tau, 6)
                      << " gamma=" << format_number(r.params.gamma, 6)
                      << " rmse=" << format_number(r.rmse, 6) << '\n';
        };
        report("grey", fit.grey);
        report("white", fit.white);
        if (fit.black_rmse) std::cout << "black (implied): rmse=" << format_number(*fit.black_rmse, 6) << '\n';
        return fit.ok() ? kOk : kFitFailed;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cellular-automaton model of news diffusion"};
    app.require_subcommand(1);

    SimulateCmd simulate;
    EnsembleCmd ensemble;
    EvalModelCmd eval;
    FitCmd fit;
    simulate.add(*app.add_subcommand("simulate", "Run one simulation"));
    ensemble.add(*app.add_subcommand("ensemble", "Run a seeded ensemble of simulations"));
    eval.add(*app.add_subcommand("eval-model", "Evaluate the logistic model over a step range"));
    fit.add(*app.add_subcommand("fit", "Fit the logistic model to a series CSV"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (app.got_subcommand("simulate")) return simulate();
        if (app.got_subcommand("ensemble")) return ensemble();
        if (app.got_subcommand("eval-model")) return eval();
        if (app.got_subcommand("fit")) return fit();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}
