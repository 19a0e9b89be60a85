#include "spinmarket/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "spinmarket/error.hpp"
#include "spinmarket/glauber.hpp"

namespace spinmarket {

Ramp parse_ramp(std::string_view name) {
    if (name == "T" || name == "temperature" || name == "linear") return Ramp::LinearInT;
    if (name == "beta") return Ramp::LinearInBeta;
    throw Error(ErrorCode::InvalidParams, "unknown ramp '" + std::string(name) + "' (expected T or beta)");
}

std::string_view to_string(Ramp ramp) noexcept { return ramp == Ramp::LinearInT ? "T" : "beta"; }

double AnnealSchedule::temperature_at(std::int64_t k) const noexcept {
    const auto n = production_sweeps();
    double f = static_cast<double>(k) / static_cast<double>(n);
    if (plateaus >= 2) {
        const std::int64_t level = std::min<std::int64_t>((k - 1) * plateaus / n, plateaus - 1);
        f = static_cast<double>(level) / static_cast<double>(plateaus - 1);
    }
    if (ramp == Ramp::LinearInT) return t_start + f * (t_end - t_start);
    const double b0 = 1.0 / t_start;
    const double b1 = 1.0 / t_end;
    return 1.0 / (b0 + f * (b1 - b0));
}

void AnnealSchedule::validate() const {
    if (!(t_start > 0.0) || !std::isfinite(t_start)) throw Error(ErrorCode::InvalidParams, "t_start must be > 0");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::InvalidParams, "t_end must be > 0");
    if (therm_sweeps < 0) throw Error(ErrorCode::InvalidParams, "therm sweeps must be >= 0");
    if (total_sweeps <= therm_sweeps)
        throw Error(ErrorCode::InvalidParams, "total sweeps must exceed thermalization sweeps");
    if (plateaus == 1 || plateaus < 0) throw Error(ErrorCode::InvalidParams, "plateaus must be 0 or >= 2");
}

namespace {

const std::array<RegimePreset, 6> kPresets = {{
    {"a4-ordered", 0.5, 4.0},
    {"a4-critical", 2.2, 4.0},
    {"a4-hot", 10.0, 4.0},
    {"a0-ordered", 0.5, 0.0},
    {"a0-critical", 2.2, 0.0},
    {"a0-hot", 10.0, 0.0},
}};

}  // namespace

std::span<const RegimePreset> regime_presets() { return kPresets; }

const RegimePreset& find_preset(std::string_view name) {
    for (const auto& p : kPresets)
        if (p.name == name) return p;
    throw Error(ErrorCode::InvalidParams, "unknown preset '" + std::string(name) + "'");
}

double RunConfig::therm_temperature() const noexcept {
    return schedule ? schedule->t_start : params.temperature;
}

double RunConfig::temperature_at(std::int64_t k) const noexcept {
    return schedule ? schedule->temperature_at(k) : params.temperature;
}

bool RunConfig::is_snapshot_step(std::int64_t k) const noexcept {
    if (snapshot_every <= 0) return false;
    if (k % snapshot_every == 0) return true;
    const std::int64_t d = effective_stp_delta();
    return d % snapshot_every != 0 && k >= d && (k - d) % snapshot_every == 0;
}

void RunConfig::validate() const {
    params.validate();
    if (therm_sweeps < 0) throw Error(ErrorCode::InvalidParams, "therm sweeps must be >= 0");
    if (run_sweeps < 1) throw Error(ErrorCode::InvalidParams, "steps must be >= 1");
    if (record_every < 1) throw Error(ErrorCode::InvalidParams, "record interval must be >= 1");
    if (snapshot_every < 0) throw Error(ErrorCode::InvalidParams, "snapshot interval must be >= 0");
    if (stp_delta < 0) throw Error(ErrorCode::InvalidParams, "STP delta must be >= 0");
    if (checkpoint_every < 0) throw Error(ErrorCode::InvalidParams, "checkpoint interval must be >= 0");
    if (schedule) {
        schedule->validate();
        if (schedule->production_sweeps() != run_sweeps || schedule->therm_sweeps != therm_sweeps)
            throw Error(ErrorCode::InvalidParams, "run length disagrees with the anneal schedule");
    }
}

RunConfig regime_config(const RegimePreset& preset, std::uint64_t seed) {
    RunConfig c;
    c.params.side = preset.side;
    c.params.temperature = preset.temperature;
    c.params.minority_coupling = preset.alpha;
    c.params.seed = seed;
    c.run_sweeps = preset.run_sweeps;
    c.snapshot_every = preset.snapshot_every;
    return c;
}

RunConfig anneal_config(const ModelParams& params, const AnnealSchedule& schedule) {
    RunConfig c;
    c.params = params;
    c.params.temperature = schedule.t_start;
    c.schedule = schedule;
    c.therm_sweeps = schedule.therm_sweeps;
    c.run_sweeps = schedule.production_sweeps();
    return c;
}

RunOutput execute_run(const RunConfig& config, RunObserver* observer, const Checkpoint* resume,
                      bool keep_snapshots) {
    config.validate();
    const ModelParams& p = config.params;
    RunOutput out;

    Rng rng = resume ? Rng::from_state(resume->rng) : Rng::stream(p.seed, config.replica);
    SpinLattice lattice;
    std::int64_t start = 0;

    auto emit_snapshot = [&](double temperature) {
        if (observer) observer->on_snapshot(lattice, temperature);
        if (keep_snapshots) out.snapshots.push_back(lattice);
    };

    if (resume) {
        if (resume->lattice.side() != p.side)
            throw Error(ErrorCode::SizeMismatch, "checkpoint lattice does not match the configured side");
        lattice = resume->lattice;
        start = resume->step;
        lattice.set_step_count(start);
    } else {
        lattice = new_lattice(p, config.init, rng);
        const double beta0 = 1.0 / config.therm_temperature();
        for (std::int64_t i = 0; i < config.therm_sweeps; ++i)
            sweep(lattice, p.coupling, p.minority_coupling, beta0, p.refresh, rng);
        lattice.set_step_count(0);
        if (config.is_snapshot_step(0)) emit_snapshot(config.therm_temperature());
    }

    const double floor = 1.0 / static_cast<double>(lattice.sites());
    SpinLattice previous = lattice;

    for (std::int64_t k = start + 1; k <= config.run_sweeps; ++k) {
        const double temperature = config.temperature_at(k);
        sweep(lattice, p.coupling, p.minority_coupling, 1.0 / temperature, p.refresh, rng);

        const bool recorded = k % config.record_every == 0;
        if (recorded) {
            SeriesRecord rec;
            rec.step = k;
            rec.temperature = temperature;
            rec.magnetization = lattice.magnetization();
            rec.log_return = log_return(rec.magnetization, previous.magnetization(), floor);
            rec.msf = msf(lattice, previous);
            out.series.records.push_back(rec);
            if (observer) observer->on_record(rec);
            previous = lattice;
        }
        if (config.is_snapshot_step(k)) emit_snapshot(temperature);

        if (recorded && config.checkpoint_every > 0 && k % config.checkpoint_every == 0 && k < config.run_sweeps &&
            observer) {
            observer->on_checkpoint(Checkpoint{k, lattice, rng.state()});
            if (observer->stop_after_checkpoint(k)) {
                out.completed = false;
                break;
            }
        }
    }
    out.final_state = std::move(lattice);
    return out;
}

RunOutput run_regime(const RunConfig& config, RunObserver* observer) {
    if (config.schedule) throw Error(ErrorCode::InvalidParams, "run_regime expects a fixed-temperature config");
    return execute_run(config, observer);
}

RunOutput run_anneal(const ModelParams& params, const AnnealSchedule& schedule, InitState init,
                     std::int64_t record_every, RunObserver* observer) {
    RunConfig c = anneal_config(params, schedule);
    c.init = init;
    c.record_every = record_every;
    c.snapshot_every = 0;
    return execute_run(c, observer);
}

// ---------------------------------------------------------------------------

AnalysisConfig analysis_config(const RunConfig& run) {
    AnalysisConfig a;
    a.snapshot_every = run.snapshot_every;
    a.stp_delta = run.effective_stp_delta();
    a.replica = run.replica;
    return a;
}

std::vector<ClusterLabeling> label_frames(std::span<const SpinLattice> frames, Execution exec) {
    return parallel_map(
        frames.size(), exec, [&](std::size_t i) { return label_clusters(frames[i]); }, "frame");
}

namespace {

void add_segment_stats(std::vector<StatRow>& rows, const std::string& name, const RunSeries& seg,
                       std::size_t max_lag) {
    if (seg.records.empty()) return;
    auto push = [&](const char* quantity, std::size_t lag, double value) {
        rows.push_back(StatRow{name, quantity, lag, value});
    };
    auto guarded = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSeries && e.code() != ErrorCode::InvalidParams) throw;
        }
    };

    std::vector<double> abs_m;
    for (const auto& r : seg.records) abs_m.push_back(std::abs(r.magnetization));
    const auto returns = seg.returns();
    const auto msfs = seg.msf_values();

    push("n", 0, static_cast<double>(seg.records.size()));
    push("mean_abs_M", 0, mean(abs_m));
    if (!msfs.empty()) push("mean_msf", 0, mean(msfs));
    if (!returns.empty()) push("var_R", 0, variance(returns));
    guarded([&] { push("kurtosis_R", 0, excess_kurtosis(returns)); });
    guarded([&] {
        const auto rho = autocorrelation(returns, max_lag);
        for (std::size_t l = 1; l <= max_lag; ++l) push("acf_R", l, rho[l]);
    });
    guarded([&] {
        const auto rho = volatility_clustering(returns, max_lag);
        for (std::size_t l = 1; l <= max_lag; ++l) push("acf_absR", l, rho[l]);
    });
}

}  // namespace

std::vector<StatRow> series_statistics(const RunSeries& series, std::size_t max_lag) {
    std::vector<StatRow> rows;
    add_segment_stats(rows, "all", series, max_lag);

    const auto temps = series.temperatures();
    if (temps.empty()) return rows;
    const auto [lo, hi] = std::minmax_element(temps.begin(), temps.end());
    if (*lo == *hi) return rows;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    add_segment_stats(rows, "hot", series.segment(4.0, kInf), max_lag);
    add_segment_stats(rows, "critical", series.segment(kCriticalTemperatureRounded, 4.0), max_lag);
    add_segment_stats(rows, "cold", series.segment(-kInf, kCriticalTemperatureRounded), max_lag);
    add_segment_stats(rows, "frozen", series.segment(-kInf, 1.0), max_lag);
    return rows;
}

AnalysisResult analyze_run(std::span<const SpinLattice> snapshots, const RunSeries& series,
                           const AnalysisConfig& config) {
    AnalysisResult result;
    const auto labelings = label_frames(snapshots, config.exec);

    auto is_anchor = [&](std::int64_t step) {
        return config.snapshot_every <= 0 || step % config.snapshot_every == 0;
    };

    std::map<std::int64_t, std::size_t> by_step;
    for (std::size_t i = 0; i < labelings.size(); ++i) by_step.emplace(labelings[i].source_step(), i);

    for (const auto& [step, i] : by_step) {
        if (!is_anchor(step)) continue;
        result.frames.push_back(FrameClusters{step, size_distribution(labelings[i])});
        result.pooled.merge(result.frames.back().stats);
    }

    const std::array<std::pair<const char*, SignSelect>, 3> signs = {
        {{"+1", SignSelect::Plus}, {"-1", SignSelect::Minus}, {"both", SignSelect::Both}}};
    for (const auto& [label, which] : signs) {
        try {
            result.fits.push_back(PowerLawRow{label, fit_power_law(result.pooled, which, config.xmin)});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientTail && e.code() != ErrorCode::DegenerateTail) throw;
        }
    }

    struct Pair {
        std::int64_t step;
        std::size_t before;
        std::size_t after;
        StpMode mode;
    };
    std::vector<Pair> pairs;
    for (StpMode mode : {StpMode::AllClusters, StpMode::LargestOnlyPerSign}) {
        for (const auto& [step, i] : by_step) {
            if (!is_anchor(step)) continue;
            const auto partner = by_step.find(step + config.stp_delta);
            if (partner != by_step.end()) pairs.push_back(Pair{step, i, partner->second, mode});
        }
    }
    result.stp = parallel_map(
        pairs.size(), config.exec,
        [&](std::size_t k) {
            const Pair& pr = pairs[k];
            const StpReport r = stp_report(labelings[pr.before], labelings[pr.after], pr.mode, config.stp_delta);
            return StpPoint{pr.step, config.stp_delta, pr.mode, r.plus, r.minus, r.both};
        },
        "stp pair");

    result.stats = series_statistics(series, config.max_lag);
    return result;
}

// ---------------------------------------------------------------------------

RunConfig replica_config(const RunConfig& base, std::uint64_t replica) {
    RunConfig c = base;
    c.replica = replica;
    return c;
}

MeanError mean_error(std::span<const double> values) {
    MeanError m;
    m.n = values.size();
    if (values.empty()) return m;
    m.mean = mean(values);
    if (m.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.std_error = std::sqrt(ss / static_cast<double>(m.n - 1)) / std::sqrt(static_cast<double>(m.n));
    }
    return m;
}

EnsembleAggregate aggregate_replicas(std::span<const ReplicaSummary> replicas) {
    EnsembleAggregate agg;
    if (replicas.empty()) return agg;

    // Series: replicas share the record grid; aggregate over the common prefix.
    std::size_t rows = replicas.front().series.records.size();
    for (const auto& r : replicas) rows = std::min(rows, r.series.records.size());
    for (std::size_t k = 0; k < rows; ++k) {
        std::vector<double> abs_m, msfs;
        for (const auto& r : replicas) {
            const auto& rec = r.series.records[k];
            abs_m.push_back(std::abs(rec.magnetization));
            if (rec.msf) msfs.push_back(*rec.msf);
        }
        const auto& first = replicas.front().series.records[k];
        agg.series.push_back({first.step, first.temperature, mean_error(abs_m), mean_error(msfs)});
    }

    // STP keyed by (mode, step, sign).
    std::map<std::tuple<int, std::int64_t, int>, std::pair<std::int64_t, std::vector<double>>> stp;
    for (const auto& r : replicas) {
        for (const auto& pt : r.analysis.stp) {
            const int mode = pt.mode == StpMode::AllClusters ? 0 : 1;
            auto add = [&](int sign, double value) {
                auto& entry = stp[{mode, pt.step, sign}];
                entry.first = pt.delta_t;
                entry.second.push_back(value);
            };
            if (pt.plus) add(0, pt.plus->combined);
            if (pt.minus) add(1, pt.minus->combined);
            add(2, pt.both.combined);
        }
    }
    static const std::array<const char*, 3> kSignNames = {"+1", "-1", "both"};
    for (const auto& [key, entry] : stp) {
        const auto& [mode, step, sign] = key;
        agg.stp.push_back({step, entry.first, mode == 0 ? StpMode::AllClusters : StpMode::LargestOnlyPerSign,
                           kSignNames[sign], mean_error(entry.second)});
    }

    // Cluster histograms: union of sizes, zero-filled per replica.
    for (std::int8_t sign : {std::int8_t{1}, std::int8_t{-1}}) {
        std::map<std::uint32_t, std::vector<double>> counts;
        for (const auto& r : replicas)
            for (const auto& [size, count] : r.analysis.pooled.histogram(sign)) counts[size];
        for (auto& [size, values] : counts) {
            for (const auto& r : replicas) {
                const auto& h = r.analysis.pooled.histogram(sign);
                const auto it = h.find(size);
                values.push_back(it == h.end() ? 0.0 : static_cast<double>(it->second));
            }
            agg.clusters.push_back({sign > 0 ? "+1" : "-1", size, mean_error(values)});
        }
    }
    return agg;
}

std::vector<ReplicaSummary> ensemble_run(const RunConfig& base, std::size_t n_replicas, Execution exec) {
    if (n_replicas < 1) throw Error(ErrorCode::InvalidParams, "ensemble needs at least one replica");
    return parallel_map(
        n_replicas, exec,
        [&](std::size_t r) {
            const RunConfig cfg = replica_config(base, r);
            RunOutput out = execute_run(cfg);
            AnalysisConfig ac = analysis_config(cfg);
            ac.exec = Execution::Serial;
            ReplicaSummary s;
            s.analysis = analyze_run(out.snapshots, out.series, ac);
            s.series = std::move(out.series);
            return s;
        },
        "replica");
}

}  // namespace spinmarket
