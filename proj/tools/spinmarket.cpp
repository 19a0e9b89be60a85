// spinmarket: command-line driver for runs, analysis, ensembles and benchmarks.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "spinmarket/bench.hpp"
#include "spinmarket/error.hpp"
#include "spinmarket/experiments.hpp"
#include "spinmarket/run_dir.hpp"

using namespace spinmarket;

namespace {

/// Flag validation failure; reported with exit code 2.
struct UsageError {
    std::string message;
};

struct Profile {
    int side;
    std::int64_t regime_steps;
    std::int64_t regime_therm;
    std::int64_t anneal_total;
    std::int64_t anneal_therm;
};

constexpr Profile kFullProfile{100, 300'000, 25'000, 2'000'000, 25'000};
constexpr Profile kCiProfile{64, 20'000, 5'000, 200'000, 25'000};

struct Flags {
    std::string profile = "full";
    std::string preset;
    int size = 0;
    double temp = 2.2;
    double alpha = 4.0;
    double coupling = 1.0;
    std::int64_t steps = 0;
    std::int64_t therm = 0;
    std::uint64_t seed = 1;
    std::string out;
    std::int64_t snapshot_every = 1000;
    std::string init = "random";
    std::int64_t stp_delta = 0;
    std::int64_t record_every = 1;
    std::int64_t checkpoint_every = 100'000;
    std::string refresh = "attempt";
    double t_start = 10.0;
    double t_end = 0.1;
    std::string ramp = "T";
    int plateaus = 0;
    bool no_plots = false;
    std::int64_t stop_after = -1;
    std::size_t replicas = 8;
    bool anneal = false;
};

void add_model_flags(CLI::App* app, Flags& f) {
    app->add_option("--profile", f.profile, "Default sizes: full (100x100) or ci (64x64)")
        ->check(CLI::IsMember({"full", "ci"}));
    app->add_option("--size", f.size, "Lattice side N");
    app->add_option("--alpha", f.alpha, "Minority coupling alpha");
    app->add_option("--coupling", f.coupling, "Neighbour coupling J");
    app->add_option("--steps", f.steps, "Number of sweeps");
    app->add_option("--therm", f.therm, "Thermalization sweeps");
    app->add_option("--seed", f.seed, "Generator seed");
    app->add_option("--init", f.init, "Initial state")->check(CLI::IsMember({"random", "up", "down", "checkerboard"}));
    app->add_option("--refresh", f.refresh, "When |M| in the local field is refreshed")
        ->check(CLI::IsMember({"attempt", "sweep"}));
    app->add_option("--record-every", f.record_every, "Series recording interval (sweeps)");
    app->add_option("--snapshot-every", f.snapshot_every, "Snapshot interval (sweeps, 0 = none)");
    app->add_option("--stp-delta", f.stp_delta, "STP lag in sweeps (0 = snapshot interval)");
    app->add_option("--checkpoint-every", f.checkpoint_every, "Checkpoint interval (sweeps, 0 = none)");
    app->add_flag("--no-plots", f.no_plots, "Skip SVG output");
}

void add_regime_flags(CLI::App* app, Flags& f) {
    app->add_option("--temp", f.temp, "Temperature T = 1/beta");
    app->add_option("--preset", f.preset, "Regime preset (see 'presets')");
}

void add_anneal_flags(CLI::App* app, Flags& f) {
    app->add_option("--t-start", f.t_start, "Initial temperature");
    app->add_option("--t-end", f.t_end, "Final temperature");
    app->add_option("--ramp", f.ramp, "Interpolate T or beta linearly")->check(CLI::IsMember({"T", "beta"}));
    app->add_option("--plateaus", f.plateaus, "Staircase levels (0 = continuous ramp)");
}

bool given(const CLI::App* app, const char* name) {
    try {
        return app->count(name) > 0;
    } catch (const CLI::OptionNotFound&) {
        return false;
    }
}

void require(bool ok, const std::string& flag, const std::string& what) {
    if (!ok) throw UsageError{flag + " " + what};
}

const Profile& profile_of(const Flags& f) { return f.profile == "ci" ? kCiProfile : kFullProfile; }

ModelParams model_params(const CLI::App* app, const Flags& f) {
    const Profile& prof = profile_of(f);
    ModelParams p;
    p.side = given(app, "--size") ? f.size : prof.side;
    p.coupling = f.coupling;
    p.minority_coupling = f.alpha;
    p.temperature = f.temp;
    p.seed = f.seed;
    p.refresh = f.refresh == "sweep" ? MagnetizationRefresh::PerSweep : MagnetizationRefresh::PerAttempt;
    require(p.side >= 2, "--size", "must be >= 2");
    require(std::isfinite(p.coupling), "--coupling", "must be finite");
    require(std::isfinite(p.minority_coupling) && p.minority_coupling >= 0.0, "--alpha", "must be finite and >= 0");
    return p;
}

void common_checks(const Flags& f) {
    require(f.record_every >= 1, "--record-every", "must be >= 1");
    require(f.snapshot_every >= 0, "--snapshot-every", "must be >= 0");
    require(f.stp_delta >= 0, "--stp-delta", "must be >= 0");
    require(f.checkpoint_every >= 0, "--checkpoint-every", "must be >= 0");
}

RunConfig regime_from_flags(const CLI::App* app, Flags f) {
    const Profile& prof = profile_of(f);
    std::int64_t steps = prof.regime_steps;
    if (!f.preset.empty()) {
        const RegimePreset* preset = nullptr;
        for (const auto& p : regime_presets())
            if (p.name == f.preset) preset = &p;
        require(preset != nullptr, "--preset", "must name a preset listed by 'spinmarket presets'");
        if (!given(app, "--temp")) f.temp = preset->temperature;
        if (!given(app, "--alpha")) f.alpha = preset->alpha;
        if (!given(app, "--size") && !given(app, "--profile")) {
            f.size = preset->side;
            steps = preset->run_sweeps;
            if (!given(app, "--snapshot-every")) f.snapshot_every = preset->snapshot_every;
        }
    }
    RunConfig c;
    c.params = model_params(app, f);
    if (!f.preset.empty() && !given(app, "--size") && !given(app, "--profile")) c.params.side = f.size;
    require(std::isfinite(f.temp) && f.temp > 0.0, "--temp", "must be a finite temperature > 0");
    c.params.temperature = f.temp;
    c.init = parse_init_state(f.init);
    c.therm_sweeps = given(app, "--therm") ? f.therm : prof.regime_therm;
    c.run_sweeps = given(app, "--steps") ? f.steps : steps;
    require(c.therm_sweeps >= 0, "--therm", "must be >= 0");
    require(c.run_sweeps >= 1, "--steps", "must be >= 1");
    common_checks(f);
    c.record_every = f.record_every;
    c.snapshot_every = f.snapshot_every;
    c.stp_delta = f.stp_delta;
    c.checkpoint_every = f.checkpoint_every;
    return c;
}

RunConfig anneal_from_flags(const CLI::App* app, const Flags& f) {
    const Profile& prof = profile_of(f);
    AnnealSchedule s;
    s.t_start = f.t_start;
    s.t_end = f.t_end;
    s.total_sweeps = given(app, "--steps") ? f.steps : prof.anneal_total;
    s.therm_sweeps = given(app, "--therm") ? f.therm : prof.anneal_therm;
    s.ramp = parse_ramp(f.ramp);
    s.plateaus = f.plateaus;
    require(std::isfinite(s.t_start) && s.t_start > 0.0, "--t-start", "must be a finite temperature > 0");
    require(std::isfinite(s.t_end) && s.t_end > 0.0, "--t-end", "must be a finite temperature > 0");
    require(s.therm_sweeps >= 0, "--therm", "must be >= 0");
    require(s.total_sweeps > s.therm_sweeps, "--steps", "must exceed --therm (it counts all sweeps)");
    require(s.plateaus == 0 || s.plateaus >= 2, "--plateaus", "must be 0 or >= 2");
    common_checks(f);

    RunConfig c = anneal_config(model_params(app, f), s);
    c.init = parse_init_state(f.init);
    c.record_every = f.record_every;
    c.snapshot_every = f.snapshot_every;
    c.stp_delta = f.stp_delta;
    c.checkpoint_every = f.checkpoint_every;
    return c;
}

DirectoryOptions directory_options(const Flags& f) {
    DirectoryOptions o;
    o.plots = !f.no_plots;
    if (f.stop_after >= 0) o.stop_after = f.stop_after;
    return o;
}

int finish_run(bool completed, const std::string& dir) {
    if (completed) std::cout << "wrote " << dir << '\n';
    else std::cout << "stopped at checkpoint; continue with: spinmarket resume " << dir << '\n';
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Globally coupled Ising market model: simulation and analysis"};
    app.require_subcommand(1);
    Flags f;
    std::string dir;

    auto* simulate = app.add_subcommand("simulate", "Fixed-temperature run into a directory");
    add_model_flags(simulate, f);
    add_regime_flags(simulate, f);
    simulate->add_option("--out", f.out, "Run directory")->required();
    simulate->add_option("--stop-after", f.stop_after, "Stop at the first checkpoint at or after this step");

    auto* anneal = app.add_subcommand("anneal", "Cooling run from --t-start to --t-end");
    add_model_flags(anneal, f);
    add_anneal_flags(anneal, f);
    anneal->add_option("--out", f.out, "Run directory")->required();
    anneal->add_option("--stop-after", f.stop_after, "Stop at the first checkpoint at or after this step");

    auto* ensemble = app.add_subcommand("ensemble", "Independent replicas plus mean/stderr aggregates");
    add_model_flags(ensemble, f);
    add_regime_flags(ensemble, f);
    add_anneal_flags(ensemble, f);
    ensemble->add_flag("--anneal", f.anneal, "Replicate the cooling run instead of a fixed temperature");
    ensemble->add_option("--replicas", f.replicas, "Number of replicas");
    ensemble->add_option("--out", f.out, "Ensemble directory")->required();

    auto* analyze = app.add_subcommand("analyze", "Re-run the analysis of an existing run directory");
    analyze->add_option("dir", dir, "Run directory")->required();
    analyze->add_flag("--no-plots", f.no_plots, "Skip SVG output");

    auto* resume = app.add_subcommand("resume", "Continue an interrupted run from its checkpoint");
    resume->add_option("dir", dir, "Run directory")->required();
    resume->add_option("--stop-after", f.stop_after, "Stop at the first checkpoint at or after this step");
    resume->add_flag("--no-plots", f.no_plots, "Skip SVG output");

    auto* bench = app.add_subcommand("bench", "Sweep throughput and serial/parallel labeling timing");
    bench->add_option("--size", f.size, "Lattice side N")->default_val(100);
    bench->add_option("--temp", f.temp, "Temperature")->default_val(2.2);
    bench->add_option("--alpha", f.alpha, "Minority coupling")->default_val(4.0);
    bench->add_option("--steps", f.steps, "Timed sweeps")->default_val(2000);
    bench->add_option("--seed", f.seed, "Generator seed");

    app.add_subcommand("presets", "List regime presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (simulate->parsed()) {
            const RunConfig c = regime_from_flags(simulate, f);
            return finish_run(run_to_directory(c, f.out, directory_options(f)), f.out);
        }
        if (anneal->parsed()) {
            const RunConfig c = anneal_from_flags(anneal, f);
            return finish_run(run_to_directory(c, f.out, directory_options(f)), f.out);
        }
        if (ensemble->parsed()) {
            require(f.replicas >= 1, "--replicas", "must be >= 1");
            const RunConfig c = f.anneal ? anneal_from_flags(ensemble, f) : regime_from_flags(ensemble, f);
            ensemble_to_directory(c, f.replicas, f.out, directory_options(f));
            std::cout << "wrote " << f.out << " (" << f.replicas << " replicas)\n";
            return 0;
        }
        if (analyze->parsed()) {
            analyze_directory(dir, directory_options(f));
            std::cout << "analyzed " << dir << '\n';
            return 0;
        }
        if (resume->parsed()) return finish_run(resume_directory(dir, directory_options(f)), dir);
        if (bench->parsed()) {
            ModelParams p;
            p.side = f.size;
            p.temperature = f.temp;
            p.minority_coupling = f.alpha;
            p.seed = f.seed;
            require(p.side >= 2, "--size", "must be >= 2");
            require(std::isfinite(p.temperature) && p.temperature > 0.0, "--temp", "must be a finite temperature > 0");
            require(f.steps >= 1, "--steps", "must be >= 1");
            const SweepRate r = measure_sweep_rate(p, f.steps);
            std::printf("sweep: N=%d sweeps=%lld seconds=%.3f attempts_per_second=%.4g\n", r.side,
                        static_cast<long long>(r.sweeps), r.seconds, r.attempts_per_second);
            const LabelingTiming t = compare_labeling(p, 64, 10);
            std::printf("labeling: frames=%zu threads=%d serial=%.4fs parallel=%.4fs identical=%s\n", t.frames,
                        t.threads, t.serial_seconds, t.parallel_seconds, t.identical ? "yes" : "no");
            return 0;
        }
        std::printf("%-12s %6s %6s %6s %10s %8s\n", "name", "T", "alpha", "N", "sweeps", "snap");
        for (const auto& p : regime_presets())
            std::printf("%-12s %6g %6g %6d %10lld %8lld\n", p.name.c_str(), p.temperature, p.alpha, p.side,
                        static_cast<long long>(p.run_sweeps), static_cast<long long>(p.snapshot_every));
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::InvalidParams ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
