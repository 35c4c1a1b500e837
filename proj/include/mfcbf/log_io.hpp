#pragma once

#include <string>
#include <vector>

#include "mfcbf/sim.hpp"

namespace mfcbf {

/// Writes trajectory.csv, barrier.csv and scenario.json (config echo) into `dir`,
/// creating it if needed. Floats use 17 significant digits.
void write_log(const TrajectoryLog& log, const std::string& dir);

/// One line of trajectory.csv.
struct TrajectoryRow {
    int step = 0;
    double time = 0.0;
    std::string kind;  // "swarm" or "adversary"
    int agent_id = 0;
    std::vector<double> state;
    std::vector<double> control;  // empty for adversary rows
};

/// One line of barrier.csv.
struct BarrierRow {
    int step = 0;
    double time = 0.0;
    double h_value = 0.0;
    double residual = 0.0;
    std::string status;
    double lambda = 0.0;
    double solve_ms = 0.0;
};

std::vector<TrajectoryRow> read_trajectory_csv(const std::string& path);
std::vector<BarrierRow> read_barrier_csv(const std::string& path);

/// "%.17g"; non-finite values as inf/-inf/nan.
std::string format_double(double v);

}  // namespace mfcbf
