#include "spinmarket/run_dir.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <system_error>

#include "spinmarket/error.hpp"
#include "spinmarket/snapshot.hpp"
#include "spinmarket/svg.hpp"

namespace fs = std::filesystem;

namespace spinmarket {

namespace {

constexpr const char* kFormat = "spinmarket-run v1";
constexpr const char* kRngDescription = "xoshiro256** splitmix64(seed) jump^replica";
constexpr const char* kSeriesHeader = "replica,step,temperature,M,R,msf";

const char* const kPlots[] = {"clusters.svg", "stp.svg", "msf.svg", "returns.svg"};

std::string_view refresh_name(MagnetizationRefresh r) {
    return r == MagnetizationRefresh::PerAttempt ? "attempt" : "sweep";
}

MagnetizationRefresh parse_refresh(std::string_view s) {
    if (s == "attempt") return MagnetizationRefresh::PerAttempt;
    if (s == "sweep") return MagnetizationRefresh::PerSweep;
    throw Error(ErrorCode::InvalidParams, "unknown refresh '" + std::string(s) + "' (expected attempt or sweep)");
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw Error(ErrorCode::Format, "bad value for " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

std::string snapshot_name(std::int64_t step) { return "step_" + std::to_string(step) + ".txt"; }

std::optional<std::int64_t> snapshot_step(const fs::path& file) {
    const std::string name = file.filename().string();
    if (name.size() < 10 || name.rfind("step_", 0) != 0 || name.substr(name.size() - 4) != ".txt") return {};
    try {
        return parse_number<std::int64_t>(std::string_view(name).substr(5, name.size() - 9), "snapshot step");
    } catch (const Error&) {
        return {};
    }
}

void require_file(const fs::path& path) {
    if (!fs::exists(path)) throw Error(ErrorCode::Io, "missing file: " + path.string());
}

/// Writes via a temporary file and rename so readers never see a partial file.
template <typename Fn>
void write_atomically(const fs::path& path, Fn&& write) {
    fs::path tmp = path;
    tmp += ".tmp";
    write(tmp);
    fs::rename(tmp, path);
}

void write_meta(const fs::path& dir, const RunConfig& config, bool completed) {
    write_atomically(dir / run_files::kMeta,
                     [&](const fs::path& p) { csv::write_key_values(p, run_meta(config, completed)); });
}

bool meta_completed(const std::map<std::string, std::string>& kv) {
    const auto it = kv.find("completed");
    return it != kv.end() && it->second == "1";
}

std::int64_t series_row_step(std::string_view line) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string_view::npos || b == std::string_view::npos)
        throw Error(ErrorCode::Format, "series.csv: malformed row");
    return parse_number<std::int64_t>(line.substr(a + 1, b - a - 1), "series step");
}

// ---------------------------------------------------------------------------

class RunDirWriter final : public RunObserver {
public:
    RunDirWriter(const fs::path& dir, const RunConfig& config, bool append, std::optional<std::int64_t> stop_after)
        : dir_(dir),
          config_(config),
          series_(dir / run_files::kSeries, {"replica", "step", "temperature", "M", "R", "msf"}, append),
          stop_after_(stop_after) {
        fs::create_directories(dir / run_files::kSnapshots);
    }

    void on_record(const SeriesRecord& r) override {
        series_.cell(config_.replica).cell(r.step).cell(r.temperature).cell(r.magnetization);
        if (r.log_return) series_.cell(*r.log_return);
        else series_.empty();
        if (r.msf) series_.cell(*r.msf);
        else series_.empty();
        series_.end_row();
    }

    void on_snapshot(const SpinLattice& lattice, double temperature) override {
        save_snapshot(dir_ / run_files::kSnapshots / snapshot_name(lattice.step_count()), lattice,
                      header(lattice.step_count(), temperature));
    }

    void on_checkpoint(const Checkpoint& c) override {
        series_.flush();
        const fs::path cdir = dir_ / run_files::kCheckpoint;
        fs::create_directories(cdir);
        write_atomically(cdir / "lattice.txt", [&](const fs::path& p) {
            save_snapshot(p, c.lattice, header(c.step, config_.temperature_at(c.step)));
        });
        csv::KeyValues state = {{"step", std::to_string(c.step)}};
        for (std::size_t i = 0; i < c.rng.size(); ++i) state.emplace_back("rng" + std::to_string(i), std::to_string(c.rng[i]));
        write_atomically(cdir / "state.meta", [&](const fs::path& p) { csv::write_key_values(p, state); });
    }

    bool stop_after_checkpoint(std::int64_t step) override { return stop_after_ && step >= *stop_after_; }

    void finish() { series_.flush(); }

private:
    SnapshotHeader header(std::int64_t step, double temperature) const {
        return SnapshotHeader{config_.params.side, step, temperature, config_.params.minority_coupling,
                              config_.params.seed};
    }

    fs::path dir_;
    const RunConfig& config_;
    csv::Writer series_;
    std::optional<std::int64_t> stop_after_;
};

Checkpoint read_checkpoint(const fs::path& dir) {
    const fs::path cdir = dir / run_files::kCheckpoint;
    require_file(cdir / "state.meta");
    require_file(cdir / "lattice.txt");
    const auto kv = csv::read_key_values(cdir / "state.meta");
    auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw Error(ErrorCode::Format, "checkpoint state missing '" + key + "'");
        return it->second;
    };
    Checkpoint c;
    c.step = parse_number<std::int64_t>(get("step"), "checkpoint step");
    for (std::size_t i = 0; i < c.rng.size(); ++i)
        c.rng[i] = parse_number<std::uint64_t>(get("rng" + std::to_string(i)), "checkpoint rng");
    Snapshot snap = load_snapshot(cdir / "lattice.txt");
    if (snap.header.step != c.step) throw Error(ErrorCode::Format, "checkpoint lattice and state disagree on step");
    c.lattice = std::move(snap.lattice);
    return c;
}

void truncate_series(const fs::path& path, std::int64_t last_step) {
    require_file(path);
    std::ifstream in(path, std::ios::binary);
    std::string header, line;
    std::getline(in, header);
    if (header != kSeriesHeader) throw Error(ErrorCode::Format, path.string() + ": unexpected header");
    write_atomically(path, [&](const fs::path& tmp) {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << header << '\n';
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (series_row_step(line) > last_step) break;
            out << line << '\n';
        }
        if (!out) throw Error(ErrorCode::Io, "write failed: " + tmp.string());
    });
}

void remove_analysis_outputs(const fs::path& dir) {
    for (const char* f : {run_files::kClusters, run_files::kPowerLaw, run_files::kStp, run_files::kStats})
        fs::remove(dir / f);
    for (const char* f : kPlots) fs::remove(dir / f);
}

// ---------------------------------------------------------------------------

std::string sign_label(std::int8_t sign) { return sign > 0 ? "+1" : "-1"; }

void write_stp_rows(csv::Writer& w, std::uint64_t replica, const StpPoint& pt) {
    auto row = [&](const char* sign, const StpValues& v) {
        w.cell(replica).cell(pt.step).cell(pt.delta_t).cell(to_string(pt.mode)).cell(std::string_view(sign));
        w.cell(v.stp_d).cell(v.stp_i).cell(v.combined).end_row();
    };
    if (pt.plus) row("+1", *pt.plus);
    if (pt.minus) row("-1", *pt.minus);
    row("both", pt.both);
}

void write_plots(const fs::path& dir, const LoadedRun& run, const AnalysisResult& result) {
    {
        svg::Plot p{"Cluster size distribution (pooled)", "cluster size", "count", true, true, {}};
        for (std::int8_t sign : {std::int8_t{1}, std::int8_t{-1}}) {
            svg::Series s{"sign " + sign_label(sign), {}, {}, sign > 0 ? "#d62728" : "#1f77b4", true};
            for (const auto& [size, count] : result.pooled.histogram(sign)) {
                s.x.push_back(size);
                s.y.push_back(static_cast<double>(count));
            }
            p.series.push_back(std::move(s));
        }
        svg::write(dir / "clusters.svg", p);
    }
    {
        svg::Plot p{"Short-time persistence", "step", "STP", false, false, {}};
        svg::Series lp{"largest +1", {}, {}, "#d62728", false};
        svg::Series lm{"largest -1", {}, {}, "#1f77b4", false};
        svg::Series all{"all clusters", {}, {}, "#555555", false};
        for (const auto& pt : result.stp) {
            const double x = static_cast<double>(pt.step);
            if (pt.mode == StpMode::AllClusters) {
                all.x.push_back(x);
                all.y.push_back(pt.both.combined);
                continue;
            }
            if (pt.plus) {
                lp.x.push_back(x);
                lp.y.push_back(pt.plus->combined);
            }
            if (pt.minus) {
                lm.x.push_back(x);
                lm.y.push_back(pt.minus->combined);
            }
        }
        p.series = {std::move(lp), std::move(lm), std::move(all)};
        svg::write(dir / "stp.svg", p);
    }

    std::vector<double> steps, msfs, rets, rsteps;
    for (const auto& r : run.series.records) {
        if (r.msf) {
            steps.push_back(static_cast<double>(r.step));
            msfs.push_back(*r.msf);
        }
        if (r.log_return) {
            rsteps.push_back(static_cast<double>(r.step));
            rets.push_back(*r.log_return);
        }
    }
    {
        const auto window = static_cast<std::size_t>(std::max<std::int64_t>(1, 10'000 / run.config.record_every));
        svg::Plot p{"Microscopic stability factor", "step", "MSF", false, false, {}};
        auto smooth = moving_average(msfs, window);
        p.series.push_back({"MSF", steps, std::move(msfs), "#9ecae1", false});
        p.series.push_back({"moving average", std::move(steps), std::move(smooth), "#08519c", false});
        svg::write(dir / "msf.svg", p);
    }
    {
        svg::Plot p{"Log returns of |M|", "step", "R", false, false, {}};
        p.series.push_back({"R", std::move(rsteps), std::move(rets), "#2ca02c", false});
        svg::write(dir / "returns.svg", p);
    }
}

AnalysisResult analyze_unlocked(const fs::path& dir, const DirectoryOptions& options) {
    LoadedRun run = load_run(dir);
    AnalysisConfig ac = analysis_config(run.config);
    ac.exec = options.exec;
    AnalysisResult result = analyze_run(run.snapshots, run.series, ac);

    {
        csv::Writer w(dir / run_files::kClusters, {"step", "sign", "size", "count"});
        auto rows = [&](const std::string& step, const ClusterStats& stats) {
            for (std::int8_t sign : {std::int8_t{1}, std::int8_t{-1}})
                for (const auto& [size, count] : stats.histogram(sign))
                    w.cell(step).cell(sign_label(sign)).cell(size).cell(count).end_row();
        };
        for (const auto& f : result.frames) rows(std::to_string(f.step), f.stats);
        rows("pooled", result.pooled);
    }
    {
        csv::Writer w(dir / run_files::kPowerLaw, {"sign", "xmin", "exponent", "stderr", "n_tail"});
        for (const auto& row : result.fits)
            w.cell(row.sign).cell(row.fit.xmin).cell(row.fit.exponent).cell(row.fit.std_error).cell(row.fit.n_tail).end_row();
    }
    {
        csv::Writer w(dir / run_files::kStp,
                      {"replica", "step", "delta_t", "mode", "sign", "stp_d", "stp_i", "combined"});
        for (const auto& pt : result.stp) write_stp_rows(w, run.config.replica, pt);
    }
    {
        csv::Writer w(dir / run_files::kStats, {"segment", "quantity", "lag", "value"});
        for (const auto& s : result.stats)
            w.cell(s.segment).cell(s.quantity).cell(static_cast<std::uint64_t>(s.lag)).cell(s.value).end_row();
    }
    if (options.plots) write_plots(dir, run, result);
    else
        for (const char* f : kPlots) fs::remove(dir / f);
    return result;
}

/// Runs into a directory whose lock is already held.
bool run_unlocked(const RunConfig& config, const fs::path& dir, const DirectoryOptions& options) {
    config.validate();
    fs::remove(dir / run_files::kMeta);
    fs::remove(dir / run_files::kSeries);
    fs::remove_all(dir / run_files::kSnapshots);
    fs::remove_all(dir / run_files::kCheckpoint);
    remove_analysis_outputs(dir);

    write_meta(dir, config, false);
    RunDirWriter writer(dir, config, false, options.stop_after);
    const RunOutput out = execute_run(config, &writer, nullptr, false);
    writer.finish();
    if (!out.completed) return false;
    write_meta(dir, config, true);
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------

csv::KeyValues run_meta(const RunConfig& c, bool completed) {
    const ModelParams& p = c.params;
    csv::KeyValues kv = {
        {"format", kFormat},
        {"kind", c.schedule ? "anneal" : "simulate"},
        {"side", std::to_string(p.side)},
        {"coupling", shortest_repr(p.coupling)},
        {"alpha", shortest_repr(p.minority_coupling)},
        {"temperature", shortest_repr(p.temperature)},
        {"seed", std::to_string(p.seed)},
        {"replica", std::to_string(c.replica)},
        {"rng", kRngDescription},
        {"init", std::string(to_string(c.init))},
        {"refresh", std::string(refresh_name(p.refresh))},
        {"therm", std::to_string(c.therm_sweeps)},
        {"steps", std::to_string(c.run_sweeps)},
        {"record_every", std::to_string(c.record_every)},
        {"snapshot_every", std::to_string(c.snapshot_every)},
        {"stp_delta", std::to_string(c.effective_stp_delta())},
        {"checkpoint_every", std::to_string(c.checkpoint_every)},
    };
    if (c.schedule) {
        const AnnealSchedule& s = *c.schedule;
        kv.emplace_back("t_start", shortest_repr(s.t_start));
        kv.emplace_back("t_end", shortest_repr(s.t_end));
        kv.emplace_back("total_sweeps", std::to_string(s.total_sweeps));
        kv.emplace_back("ramp", std::string(to_string(s.ramp)));
        kv.emplace_back("plateaus", std::to_string(s.plateaus));
    }
    kv.emplace_back("completed", completed ? "1" : "0");
    return kv;
}

RunConfig parse_run_meta(const std::map<std::string, std::string>& kv) {
    std::set<std::string> used;
    auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw Error(ErrorCode::Format, "run.meta: missing key '" + key + "'");
        used.insert(key);
        return it->second;
    };
    if (get("format") != kFormat) throw Error(ErrorCode::Format, "run.meta: unsupported format '" + kv.at("format") + "'");
    if (get("rng") != kRngDescription) throw Error(ErrorCode::Format, "run.meta: unsupported generator");
    const std::string kind = get("kind");
    if (kind != "simulate" && kind != "anneal") throw Error(ErrorCode::Format, "run.meta: unknown kind '" + kind + "'");
    get("completed");

    RunConfig c;
    c.params.side = parse_number<int>(get("side"), "side");
    c.params.coupling = parse_number<double>(get("coupling"), "coupling");
    c.params.minority_coupling = parse_number<double>(get("alpha"), "alpha");
    c.params.temperature = parse_number<double>(get("temperature"), "temperature");
    c.params.seed = parse_number<std::uint64_t>(get("seed"), "seed");
    c.params.refresh = parse_refresh(get("refresh"));
    c.replica = parse_number<std::uint64_t>(get("replica"), "replica");
    c.init = parse_init_state(get("init"));
    c.therm_sweeps = parse_number<std::int64_t>(get("therm"), "therm");
    c.run_sweeps = parse_number<std::int64_t>(get("steps"), "steps");
    c.record_every = parse_number<std::int64_t>(get("record_every"), "record_every");
    c.snapshot_every = parse_number<std::int64_t>(get("snapshot_every"), "snapshot_every");
    c.stp_delta = parse_number<std::int64_t>(get("stp_delta"), "stp_delta");
    c.checkpoint_every = parse_number<std::int64_t>(get("checkpoint_every"), "checkpoint_every");
    if (kind == "anneal") {
        AnnealSchedule s;
        s.t_start = parse_number<double>(get("t_start"), "t_start");
        s.t_end = parse_number<double>(get("t_end"), "t_end");
        s.total_sweeps = parse_number<std::int64_t>(get("total_sweeps"), "total_sweeps");
        s.therm_sweeps = c.therm_sweeps;
        s.ramp = parse_ramp(get("ramp"));
        s.plateaus = parse_number<int>(get("plateaus"), "plateaus");
        c.schedule = s;
    }
    for (const auto& [key, value] : kv)
        if (!used.count(key)) throw Error(ErrorCode::Format, "run.meta: unknown key '" + key + "'");
    c.validate();
    return c;
}

DirectoryLock::DirectoryLock(const fs::path& dir) : path_(dir / run_files::kLock) {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) {
        if (fs::exists(path_))
            throw Error(ErrorCode::Io, "directory is locked by another writer: " + path_.string() +
                                           " (remove it if no other process is running)");
        throw Error(ErrorCode::Io, "cannot create lock " + path_.string());
    }
    std::fclose(f);
}

DirectoryLock::~DirectoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

RunSeries read_series(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "missing file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kSeriesHeader)
        throw Error(ErrorCode::Format, path.string() + ": expected header " + kSeriesHeader);
    RunSeries series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv::split(line);
        if (f.size() != 6) throw Error(ErrorCode::Format, path.string() + ": row needs 6 fields");
        SeriesRecord r;
        r.step = parse_number<std::int64_t>(f[1], "step");
        r.temperature = parse_number<double>(f[2], "temperature");
        r.magnetization = parse_number<double>(f[3], "M");
        if (!f[4].empty()) r.log_return = parse_number<double>(f[4], "R");
        if (!f[5].empty()) r.msf = parse_number<double>(f[5], "msf");
        series.records.push_back(r);
    }
    return series;
}

LoadedRun load_run(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "missing directory: " + dir.string());
    require_file(dir / run_files::kMeta);
    const auto kv = csv::read_key_values(dir / run_files::kMeta);
    LoadedRun run;
    run.config = parse_run_meta(kv);
    if (!meta_completed(kv))
        throw Error(ErrorCode::Io, "run in " + dir.string() + " is incomplete (resume it first)");
    require_file(dir / run_files::kSeries);
    run.series = read_series(dir / run_files::kSeries);

    if (run.config.snapshot_every > 0) {
        const fs::path sdir = dir / run_files::kSnapshots;
        if (!fs::is_directory(sdir)) throw Error(ErrorCode::Io, "missing file: " + sdir.string());
        std::vector<std::pair<std::int64_t, fs::path>> files;
        for (const auto& e : fs::directory_iterator(sdir))
            if (const auto step = snapshot_step(e.path())) files.emplace_back(*step, e.path());
        if (files.empty()) throw Error(ErrorCode::Io, "missing file: " + (sdir / snapshot_name(0)).string());
        std::sort(files.begin(), files.end());
        for (const auto& [step, path] : files) {
            Snapshot s = load_snapshot(path);
            if (s.header.step != step) throw Error(ErrorCode::Format, path.string() + ": header step disagrees with name");
            if (s.header.side != run.config.params.side)
                throw Error(ErrorCode::SizeMismatch, path.string() + ": lattice side disagrees with run.meta");
            run.snapshots.push_back(std::move(s.lattice));
        }
    }
    return run;
}

bool run_to_directory(const RunConfig& config, const fs::path& dir, const DirectoryOptions& options) {
    config.validate();
    fs::create_directories(dir);
    DirectoryLock lock(dir);
    if (!run_unlocked(config, dir, options)) return false;
    analyze_unlocked(dir, options);
    return true;
}

bool resume_directory(const fs::path& dir, const DirectoryOptions& options) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "missing directory: " + dir.string());
    DirectoryLock lock(dir);
    require_file(dir / run_files::kMeta);
    const auto kv = csv::read_key_values(dir / run_files::kMeta);
    const RunConfig config = parse_run_meta(kv);
    if (meta_completed(kv)) throw Error(ErrorCode::InvalidParams, "run in " + dir.string() + " is already complete");

    const Checkpoint checkpoint = read_checkpoint(dir);
    truncate_series(dir / run_files::kSeries, checkpoint.step);
    if (fs::is_directory(dir / run_files::kSnapshots))
        for (const auto& e : fs::directory_iterator(dir / run_files::kSnapshots))
            if (const auto step = snapshot_step(e.path()); step && *step > checkpoint.step) fs::remove(e.path());
    remove_analysis_outputs(dir);

    RunDirWriter writer(dir, config, true, options.stop_after);
    const RunOutput out = execute_run(config, &writer, &checkpoint, false);
    writer.finish();
    if (!out.completed) return false;
    write_meta(dir, config, true);
    analyze_unlocked(dir, options);
    return true;
}

AnalysisResult analyze_directory(const fs::path& dir, const DirectoryOptions& options) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "missing directory: " + dir.string());
    require_file(dir / run_files::kMeta);
    DirectoryLock lock(dir);
    return analyze_unlocked(dir, options);
}

EnsembleAggregate ensemble_to_directory(const RunConfig& base, std::size_t n_replicas, const fs::path& dir,
                                        const DirectoryOptions& options) {
    if (n_replicas < 1) throw Error(ErrorCode::InvalidParams, "ensemble needs at least one replica");
    base.validate();
    fs::create_directories(dir);
    DirectoryLock lock(dir);

    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory() && e.path().filename().string().rfind("replica_", 0) == 0) fs::remove_all(e.path());
    for (const char* f : {"ensemble.meta", "stp.csv", "ensemble_series.csv", "ensemble_stp.csv", "ensemble_clusters.csv"})
        fs::remove(dir / f);

    DirectoryOptions inner = options;
    inner.exec = Execution::Serial;
    inner.stop_after.reset();
    const auto summaries = parallel_map(
        n_replicas, options.exec,
        [&](std::size_t r) {
            const RunConfig cfg = replica_config(base, r);
            const fs::path sub = dir / ("replica_" + std::to_string(r));
            fs::create_directories(sub);
            DirectoryLock sub_lock(sub);
            run_unlocked(cfg, sub, inner);
            ReplicaSummary s;
            s.analysis = analyze_unlocked(sub, inner);
            s.series = read_series(sub / run_files::kSeries);
            return s;
        },
        "replica");

    const EnsembleAggregate agg = aggregate_replicas(summaries);

    csv::KeyValues meta = run_meta(base, true);
    meta.emplace_back("replicas", std::to_string(n_replicas));
    csv::write_key_values(dir / "ensemble.meta", meta);
    {
        csv::Writer w(dir / run_files::kStp, {"replica", "step", "delta_t", "mode", "sign", "stp_d", "stp_i", "combined"});
        for (std::size_t r = 0; r < summaries.size(); ++r)
            for (const auto& pt : summaries[r].analysis.stp) write_stp_rows(w, r, pt);
    }
    {
        csv::Writer w(dir / "ensemble_series.csv",
                      {"step", "temperature", "n", "abs_M_mean", "abs_M_stderr", "msf_mean", "msf_stderr"});
        for (const auto& row : agg.series)
            w.cell(row.step).cell(row.temperature).cell(static_cast<std::uint64_t>(row.abs_magnetization.n))
                .cell(row.abs_magnetization.mean).cell(row.abs_magnetization.std_error)
                .cell(row.msf.mean).cell(row.msf.std_error).end_row();
    }
    {
        csv::Writer w(dir / "ensemble_stp.csv",
                      {"step", "delta_t", "mode", "sign", "n", "combined_mean", "combined_stderr"});
        for (const auto& row : agg.stp)
            w.cell(row.step).cell(row.delta_t).cell(to_string(row.mode)).cell(row.sign)
                .cell(static_cast<std::uint64_t>(row.combined.n)).cell(row.combined.mean)
                .cell(row.combined.std_error).end_row();
    }
    {
        csv::Writer w(dir / "ensemble_clusters.csv", {"sign", "size", "n", "count_mean", "count_stderr"});
        for (const auto& row : agg.clusters)
            w.cell(row.sign).cell(row.size).cell(static_cast<std::uint64_t>(row.count.n)).cell(row.count.mean)
                .cell(row.count.std_error).end_row();
    }
    return agg;
}

}  // namespace spinmarket
