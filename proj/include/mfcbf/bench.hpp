#pragma once

#include <string>
#include <vector>

#include "mfcbf/scenario.hpp"

namespace mfcbf {

struct BenchRow {
    int n = 0;
    int mf_rows = 0;
    long long baseline_rows = 0;          // unordered pairs
    long long baseline_rows_ordered = 0;  // n(n-1), the ordered-pair count
    double mf_step_ms = 0.0;              // medians over the recorded steps
    double baseline_step_ms = 0.0;
    double mf_solve_iters = 0.0;
    double baseline_solve_iters = 0.0;
    bool baseline_timeout = false;  // stopped by the wall budget
    bool baseline_aborted = false;  // stopped by a solver failure
};

/// Runs the mean-field filter and the pairwise baseline on the same template
/// with the swarm size replaced by each n, for `tmpl.bench.steps` steps each.
/// The template needs a box swarm placement, kernel + epsilon, and a pairwise block.
std::vector<BenchRow> benchmark(const ScenarioConfig& tmpl, const std::vector<int>& sizes);

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

}  // namespace mfcbf
