#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfcbf/adversary.hpp"
#include "mfcbf/qp.hpp"
#include "mfcbf/scenario.hpp"
#include "mfcbf/swarm_state.hpp"

namespace mfcbf {

struct StepRecord {
    int step = 0;
    double time = 0.0;
    Eigen::MatrixXd agents;     // state at the start of the step
    Eigen::MatrixXd adversary;
    Eigen::MatrixXd controls;   // applied over [time, time + dt)
    double h_value = 0.0;       // MF: H; baseline: smallest pairwise/individual h
    double residual = 0.0;      // MF: dH/ds + alpha(H); baseline: smallest row slack
    int constraint_rows = 0;
    QpReport report;
    double solve_ms = 0.0;      // assembly + solve wall time
};

struct TrajectoryLog {
    ScenarioConfig config;
    std::vector<StepRecord> records;
    SwarmState final_state;
    double final_h = 0.0;
    std::optional<std::string> aborted;  // reason, when the run stopped early
    double aborted_step_ms = 0.0;        // wall time spent in the failing step
    int aborted_step_iterations = 0;     // solver iterations spent in the failing step
    bool timed_out = false;
};

struct RunOptions {
    /// Stop (and flag timed_out) once the run has used this much wall time.
    std::optional<double> wall_budget_s;
};

/// Initial swarm/adversary placement drawn from the config seed.
SwarmState initial_state(const ScenarioConfig& cfg);

/// q* for every agent at the given state.
Eigen::MatrixXd nominal_controls(const ScenarioConfig& cfg, const SwarmState& state);

/// Closed loop: measures -> constraint(s) -> QP -> Euler step -> adversary
/// transport -> record, for ceil(T/dt) steps. Deterministic for a fixed config.
/// Numerical failures end the run early with `aborted` set; records up to the
/// failing step are kept.
TrajectoryLog run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

}  // namespace mfcbf
