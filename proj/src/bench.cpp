#include "mfcbf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "mfcbf/error.hpp"
#include "mfcbf/log_io.hpp"
#include "mfcbf/sim.hpp"

namespace mfcbf {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return NAN;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ScenarioConfig sized(const ScenarioConfig& tmpl, int n, ScenarioMode mode) {
    ScenarioConfig cfg = tmpl;
    cfg.mode = mode;
    cfg.swarm_count = n;
    cfg.horizon = tmpl.bench.steps * tmpl.dt;
    cfg.output.record_timing = true;
    if (cfg.pairwise) {
        auto& ib = cfg.pairwise->individual;
        ib.erase(std::remove_if(ib.begin(), ib.end(), [n](const SphereBarrier& b) { return b.agent >= n; }),
                 ib.end());
    }
    return cfg;
}

}  // namespace

std::vector<BenchRow> benchmark(const ScenarioConfig& tmpl, const std::vector<int>& sizes) {
    std::vector<std::string> issues;
    if (tmpl.swarm_placement.kind != PlacementConfig::Kind::box)
        issues.push_back("swarm.placement: benchmark needs a box placement to resize the swarm");
    if (!tmpl.kernel || !tmpl.epsilon) issues.push_back("kernel/epsilon: benchmark runs the mean-field filter");
    if (!tmpl.pairwise) issues.push_back("pairwise: benchmark runs the pairwise baseline");
    if (sizes.empty()) issues.push_back("sizes: at least one swarm size required");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) issues.push_back("sizes: every n must be >= 1");
        if (i > 0 && sizes[i] < sizes[i - 1]) issues.push_back("sizes: must be sorted ascending");
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    const ScenarioMode mf_mode =
        tmpl.mode == ScenarioMode::baseline_pairwise ? ScenarioMode::avoidance : tmpl.mode;

    std::vector<BenchRow> out;
    for (int n : sizes) {
        BenchRow row;
        row.n = n;
        row.baseline_rows = static_cast<long long>(n) * (n - 1) / 2;
        row.baseline_rows_ordered = static_cast<long long>(n) * (n - 1);

        const TrajectoryLog mf = run_scenario(sized(tmpl, n, mf_mode));
        if (mf.aborted) throw NumericalError("mean-field benchmark run (n=" + std::to_string(n) +
                                             ") aborted: " + *mf.aborted);
        std::vector<double> ms, iters;
        int rows_seen = 0;
        for (const auto& r : mf.records) {
            ms.push_back(r.solve_ms);
            iters.push_back(r.report.iterations);
            rows_seen = std::max(rows_seen, r.constraint_rows);
        }
        row.mf_rows = rows_seen;
        row.mf_step_ms = median(ms);
        row.mf_solve_iters = median(iters);

        RunOptions ro;
        ro.wall_budget_s = tmpl.bench.baseline_time_budget_s;
        const TrajectoryLog base = run_scenario(sized(tmpl, n, ScenarioMode::baseline_pairwise), ro);
        ms.clear();
        iters.clear();
        for (const auto& r : base.records) {
            ms.push_back(r.solve_ms);
            iters.push_back(r.report.iterations);
            row.baseline_rows = r.constraint_rows;
        }
        if (base.aborted) {
            // The failed solve still cost its time; count it as a lower bound.
            ms.push_back(base.aborted_step_ms);
            iters.push_back(base.aborted_step_iterations);
        }
        row.baseline_step_ms = median(ms);
        row.baseline_solve_iters = median(iters);
        row.baseline_timeout = base.timed_out;
        row.baseline_aborted = base.aborted.has_value();
        out.push_back(row);
    }
    return out;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "n,mf_rows,baseline_rows,mf_step_ms,baseline_step_ms,mf_solve_iters,"
           "baseline_solve_iters,baseline_rows_ordered,baseline_timeout,baseline_aborted\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.mf_rows << ',' << r.baseline_rows << ',' << format_double(r.mf_step_ms)
            << ',' << format_double(r.baseline_step_ms) << ',' << format_double(r.mf_solve_iters)
            << ',' << format_double(r.baseline_solve_iters) << ',' << r.baseline_rows_ordered << ','
            << (r.baseline_timeout ? 1 : 0) << ','
            << (r.baseline_aborted ? 1 : 0) << '\n';
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace mfcbf
