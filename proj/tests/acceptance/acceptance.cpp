// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only (exit status reflects it)

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "spinmarket/clusters.hpp"
#include "spinmarket/experiments.hpp"
#include "spinmarket/glauber.hpp"
#include "spinmarket/observables.hpp"
#include "spinmarket/persistence.hpp"
#include "spinmarket/powerlaw.hpp"

using namespace spinmarket;
namespace fs = std::filesystem;

namespace {

// Tolerances and protocol sizes
constexpr int kSide = 100;
constexpr int kCiSide = 64;

constexpr double kExponentLo = 1.6, kExponentHi = 2.2;
constexpr std::int64_t kExpTherm = 25'000, kExpSweeps = 100'000, kExpEvery = 1'000;

constexpr double kHotLargestMax = 0.10;
constexpr std::int64_t kHotTherm = 25'000, kHotSweeps = 100'000, kHotEvery = 1'000;

constexpr std::int64_t kCiTotal = 200'000, kCiTherm = 25'000;
constexpr double kHotMsf = 0.75, kHotMsfTol = 0.10, kMsfRise = 0.15;
constexpr std::size_t kSmoothWindow = 10'000;

constexpr std::size_t kReplicas = 8;
constexpr std::int64_t kStpTherm = 25'000, kStpSweeps = 16'000, kStpEvery = 1'000;
constexpr double kStpOrderedMin = 0.9, kStpCriticalLo = 0.1, kStpCriticalHi = 0.8, kStpHotMax = 0.5;

constexpr double kKurtosisMin = 1.0, kVolAcfMin = 0.05, kRawAcfMax = 0.05;
constexpr std::size_t kMaxLag = 20;

constexpr double kQuiescenceRatio = 0.1;

constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kUnchangedFraction = 0.684, kUnchangedTol = 0.01;

constexpr double kMinAttemptsPerSecond = 1e7;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig regime(double t, double alpha, std::int64_t therm, std::int64_t sweeps, std::int64_t every,
                 std::uint64_t seed = 1) {
    RunConfig c;
    c.params.side = kSide;
    c.params.temperature = t;
    c.params.minority_coupling = alpha;
    c.params.seed = seed;
    c.therm_sweeps = therm;
    c.run_sweeps = sweeps;
    c.snapshot_every = every;
    c.checkpoint_every = 0;
    return c;
}

RunConfig ci_anneal(double alpha, std::uint64_t seed = 1) {
    ModelParams p;
    p.side = kCiSide;
    p.minority_coupling = alpha;
    p.seed = seed;
    AnnealSchedule s;
    s.total_sweeps = kCiTotal;
    s.therm_sweeps = kCiTherm;
    RunConfig c = anneal_config(p, s);
    c.snapshot_every = 0;
    c.checkpoint_every = 0;
    return c;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    bool pass = true;
    std::string detail;
    for (double alpha : {4.0, 0.0}) {
        const RunConfig c = regime(2.2, alpha, kExpTherm, kExpSweeps, kExpEvery);
        const RunOutput out = execute_run(c, nullptr, nullptr, true);
        ClusterStats pooled;
        std::size_t frames = 0;
        for (const auto& lab : label_frames(out.snapshots, Execution::Parallel)) {
            if (lab.source_step() == 0) continue;  // first frame is the thermalized start
            pooled.merge(size_distribution(lab));
            ++frames;
        }
        const PowerLawFit fit = fit_power_law(pooled, SignSelect::Both, kDefaultXmin);
        const bool ok = frames >= 100 && fit.exponent >= kExponentLo && fit.exponent <= kExponentHi;
        pass &= ok;
        detail += "alpha=" + fmt("%g", alpha) + ": exponent " + fmt("%.3f", fit.exponent) + " +/- " +
                  fmt("%.3f", fit.std_error) + " (n_tail " + std::to_string(fit.n_tail) + ", " +
                  std::to_string(frames) + " frames); ";
    }
    return {pass, detail + "band [1.6, 2.2]"};
}

Outcome criterion2() {
    const RunConfig c = regime(10.0, 4.0, kHotTherm, kHotSweeps, kHotEvery);
    const RunOutput out = execute_run(c, nullptr, nullptr, true);
    std::vector<double> fractions;
    for (const auto& lab : label_frames(out.snapshots, Execution::Parallel)) {
        if (lab.source_step() == 0) continue;
        std::uint32_t largest = 0;
        for (std::int8_t s : {std::int8_t{1}, std::int8_t{-1}})
            if (const auto cl = largest_cluster(lab, s)) largest = std::max(largest, cl->size);
        fractions.push_back(static_cast<double>(largest) / static_cast<double>(lab.sites()));
    }
    std::sort(fractions.begin(), fractions.end());
    const double median = fractions[fractions.size() / 2];
    const double worst = fractions.back();
    const auto over = std::count_if(fractions.begin(), fractions.end(), [](double f) { return f > kHotLargestMax; });
    return {fractions.size() >= 100 && worst <= kHotLargestMax,
            std::to_string(fractions.size()) + " frames; largest cluster median " + fmt("%.3f", median) +
                " of P, max " + fmt("%.3f", worst) + ", frames above 0.10: " + std::to_string(over)};
}

Outcome criterion3() {
    const RunOutput out = execute_run(ci_anneal(0.0));
    const RunSeries hot = out.series.segment(4.0, 10.0 + 1e-9);
    const double hot_msf = mean(hot.msf_values());
    const auto msfs = out.series.msf_values();
    const auto smooth = moving_average(msfs, kSmoothWindow);
    const double hot_end = smooth[kSmoothWindow - 1];
    const double cold_end = smooth.back();
    const bool ok = std::abs(hot_msf - kHotMsf) <= kHotMsfTol && cold_end - hot_end > kMsfRise;
    return {ok, "hot-segment mean MSF " + fmt("%.4f", hot_msf) + " (target 0.75 +/- 0.10); smoothed MSF " +
                    fmt("%.4f", hot_end) + " -> " + fmt("%.4f", cold_end) + " (rise " +
                    fmt("%.4f", cold_end - hot_end) + ", need > 0.15)"};
}

Outcome criterion4() {
    std::map<double, double> stp;
    std::string per_t;
    for (double t : {0.5, 2.2, 10.0}) {
        RunConfig c = regime(t, 4.0, kStpTherm, kStpSweeps, kStpEvery);
        const auto reps = ensemble_run(c, kReplicas, Execution::Parallel);
        std::vector<double> per_replica;
        for (const auto& r : reps) {
            std::vector<double> v;
            for (const auto& pt : r.analysis.stp)
                if (pt.mode == StpMode::LargestOnlyPerSign && pt.step > 0) v.push_back(pt.both.combined);
            per_replica.push_back(mean(v));
        }
        stp[t] = mean(per_replica);
        per_t += " T=" + fmt("%g", t) + ":";
        for (double v : per_replica) per_t += " " + fmt("%.2f", v);
    }
    const bool ok = stp[0.5] > kStpOrderedMin && stp[2.2] >= kStpCriticalLo && stp[2.2] <= kStpCriticalHi &&
                    stp[10.0] < kStpHotMax && stp[0.5] > stp[2.2] && stp[2.2] > stp[10.0];
    return {ok, "mean largest-cluster STP over 8 replicas (dt = 1000 sweeps): T=0.5 " + fmt("%.3f", stp[0.5]) +
                    ", T=2.2 " + fmt("%.3f", stp[2.2]) + ", T=10 " + fmt("%.3f", stp[10.0]) + "; per replica" + per_t};
}

Outcome criterion5() {
    const auto reps = parallel_map(
        kReplicas, Execution::Parallel,
        [](std::size_t r) {
            RunConfig c = replica_config(ci_anneal(4.0), r);
            return execute_run(c).series.segment(-1.0, kCriticalTemperatureRounded).returns();
        },
        "replica");
    std::vector<double> kurt, vol1, raw_max;
    std::vector<std::vector<double>> raw(kMaxLag + 1);
    for (const auto& ret : reps) {
        kurt.push_back(excess_kurtosis(ret));
        vol1.push_back(volatility_clustering(ret, 1)[1]);
        const auto rho = autocorrelation(ret, kMaxLag);
        for (std::size_t l = 2; l <= kMaxLag; ++l) raw[l].push_back(rho[l]);
    }
    double worst = 0.0;
    std::size_t worst_lag = 2;
    for (std::size_t l = 2; l <= kMaxLag; ++l) {
        const double m = std::abs(mean(raw[l]));
        if (m > worst) worst = m, worst_lag = l;
    }
    double single_worst = 0.0;
    for (std::size_t l = 2; l <= kMaxLag; ++l)
        for (double v : raw[l]) single_worst = std::max(single_worst, std::abs(v));
    std::string rho2;
    for (double v : raw[2]) rho2 += " " + fmt("%.3f", v);
    const double k = mean(kurt), v1 = mean(vol1);
    const bool ok = k > kKurtosisMin && v1 > kVolAcfMin && worst < kRawAcfMax;
    return {ok, "cold segment, mean of 8 replicas: excess kurtosis " + fmt("%.2f", k) + ", |R| acf(1) " +
                    fmt("%.3f", v1) + ", max |acf_R(l)| for l in [2,20] " + fmt("%.4f", worst) + " at l=" +
                    std::to_string(worst_lag) + " (largest single-replica value " + fmt("%.4f", single_worst) + "); per-replica acf_R(2):" + rho2};
}

Outcome criterion6() {
    auto cold_var = [](double alpha) {
        return variance(execute_run(ci_anneal(alpha)).series.segment(-1.0, 1.0).returns());
    };
    const double v0 = cold_var(0.0), v4 = cold_var(4.0);
    return {v0 < kQuiescenceRatio * v4,
            "var(R | T<1): alpha=0 " + fmt("%.3g", v0) + ", alpha=4 " + fmt("%.3g", v4) + ", ratio " + fmt("%.3g", v0 / v4)};
}

Outcome criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> failed;

    {  // labeling vs flood fill
        Rng pick(2024);
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 1000 && ok; ++seed) {
            const int n = 2 + static_cast<int>(pick.below(15));
            const auto l = oracle::random_lattice(n, seed, 0.2 + 0.6 * pick.uniform());
            const auto lab = label_clusters(l);
            std::vector<std::set<int>> sets;
            for (const auto& c : lab.clusters()) {
                const auto m = lab.members(c.id);
                sets.emplace_back(m.begin(), m.end());
            }
            ok = oracle::partition(sets) == oracle::partition(oracle::flood_fill(oracle::to_grid(l)));
        }
        if (!ok) failed.push_back("labeling");
    }
    {  // matching vs exhaustive intersection
        Rng pick(99);
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 300 && ok; ++seed) {
            const int n = 2 + static_cast<int>(pick.below(11));
            const auto a = label_clusters(oracle::random_lattice(n, seed));
            const auto b = label_clusters(oracle::random_lattice(n, seed + 10'000));
            for (const auto& m : match_clusters(a, b)) {
                const auto ma = a.members(m.id_before);
                const std::set<std::uint32_t> ca(ma.begin(), ma.end());
                std::uint32_t best = 0;
                for (const auto& d : b.clusters()) {
                    if (d.sign != m.sign) continue;
                    std::uint32_t overlap = 0;
                    for (auto s : b.members(d.id)) overlap += static_cast<std::uint32_t>(ca.count(s));
                    best = std::max(best, overlap);
                }
                ok &= m.n_max == best;
            }
        }
        if (!ok) failed.push_back("matching");
    }
    {  // MSF identity
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 500; ++seed) {
            const auto a = oracle::random_lattice(20, seed), b = oracle::random_lattice(20, seed + 1);
            std::size_t diff = 0;
            for (std::size_t i = 0; i < a.sites(); ++i) diff += a.spin(i) != b.spin(i);
            ok &= msf(a, b) == static_cast<double>(a.sites() - diff) / static_cast<double>(a.sites());
        }
        if (!ok) failed.push_back("msf");
    }
    {  // flip probability grid
        bool ok = true;
        for (double beta : {1e-9, 1e-3, 0.1, 0.5, 1.0, 10.0, 1e3}) {
            double prev = -1.0;
            for (double h = -12.0; h <= 12.0; h += 0.25) {
                const double p = flip_probability(h, beta);
                ok &= p + flip_probability(-h, beta) == 1.0 && p >= prev;
                prev = p;
            }
        }
        if (!ok) failed.push_back("flip probability");
    }
    double unchanged = 0.0;
    {  // infinite temperature
        ModelParams p;
        p.side = 64;
        p.temperature = 1e9;
        p.minority_coupling = 0.0;
        Rng rng(21);
        auto l = new_lattice(p, InitState::Random, rng);
        for (int s = 0; s < 100; ++s) {
            const auto prev = l;
            sweep(l, p, rng);
            unchanged += msf(prev, l) / 100.0;
        }
        if (std::abs(unchanged - kUnchangedFraction) > kUnchangedTol) failed.push_back("unchanged fraction");
    }
    {  // MLE recovery
        bool ok = true;
        std::uint64_t seed = 11;
        for (double g : {1.5, 2.0, 2.5}) {
            const auto fit = fit_power_law(oracle::zeta_sample(g, 5, 100'000, seed++), 5);
            ok &= std::abs(fit.exponent - g) < 3.0 * fit.std_error;
        }
        if (!ok) failed.push_back("power-law MLE");
    }
    const double elapsed = seconds_since(t0);
    std::string detail = "6 oracle suites in " + fmt("%.1f", elapsed) + " s; unchanged fraction " + fmt("%.4f", unchanged);
    for (const auto& f : failed) detail += "; FAILED " + f;
    return {failed.empty() && elapsed < kOracleBudgetSeconds, detail};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int shell(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd = std::string(SPINMARKET_CLI_PATH) + " " + args + " >" + stdout_file.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path workdir() {
    const fs::path p = fs::temp_directory_path() / "spinmarket_acceptance";
    fs::create_directories(p);
    return p;
}

Outcome criterion8() {
    const fs::path out = workdir() / "bench.txt";
    if (shell("bench --size 100 --steps 3000", out) != 0) return {false, "bench command failed: " + slurp(out)};
    const std::string text = slurp(out);
    const auto pos = text.find("attempts_per_second=");
    if (pos == std::string::npos) return {false, "no rate in bench output"};
    const double rate = std::stod(text.substr(pos + 20));
    return {rate >= kMinAttemptsPerSecond, "100x100 sweep rate " + fmt("%.3g", rate) + " attempts/s (need >= 1e7)"};
}

Outcome criterion9() {
    const fs::path root = workdir() / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"simulate", "simulate --size 32 --temp 2.2 --alpha 4 --steps 2000 --therm 500 --snapshot-every 100 --seed 7"},
        {"anneal", "anneal --size 24 --steps 6000 --therm 1000 --snapshot-every 500 --seed 7"},
        {"ensemble", "ensemble --replicas 3 --size 16 --steps 600 --therm 100 --snapshot-every 100 --seed 7"},
    };
    std::size_t compared = 0;
    std::vector<std::string> differing;
    for (const auto& [name, args] : commands) {
        for (const char* run : {"a", "b"}) {
            const fs::path dir = root / name / run;
            if (shell(args + " --out " + dir.string(), root / "log.txt") != 0)
                return {false, name + " failed: " + slurp(root / "log.txt")};
        }
        // re-analysis must not change anything either
        if (name != "ensemble") shell("analyze " + (root / name / "b").string(), root / "log.txt");
        for (const auto& e : fs::recursive_directory_iterator(root / name / "a")) {
            if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
            const fs::path rel = fs::relative(e.path(), root / name / "a");
            ++compared;
            if (slurp(e.path()) != slurp(root / name / "b" / rel)) differing.push_back(name + "/" + rel.string());
        }
    }
    std::string detail = std::to_string(compared) + " CSV files compared across re-runs";
    for (const auto& d : differing) detail += "; differs: " + d;
    return {differing.empty() && compared > 0, detail};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {"critical cluster-size exponent", criterion1},
    {"hot-regime fragmentation", criterion2},
    {"MSF hot plateau and growth on cooling", criterion3},
    {"STP regime ordering", criterion4},
    {"stylized facts at alpha=4", criterion5},
    {"alpha=0 quiescence", criterion6},
    {"oracle suites", criterion7},
    {"performance bar", criterion8},
    {"determinism", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) selected.push_back(std::atoi(argv[++i]));
        else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
            return 2;
        }
    }
    if (selected.empty())
        for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) selected.push_back(n);

    bool all = true;
    for (int n : selected) {
        if (n < 1 || n > static_cast<int>(kCriteria.size())) {
            std::fprintf(stderr, "no criterion %d\n", n);
            return 2;
        }
        const auto& [name, fn] = kCriteria[static_cast<std::size_t>(n - 1)];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("criterion %d [%s] %s (%.0f s): %s\n", n, o.pass ? "PASS" : "FAIL", name, seconds_since(t0),
                    o.detail.c_str());
        std::fflush(stdout);
        all &= o.pass;
    }
    return all ? 0 : 1;
}
