#include "doctest.h"

#include <string>

#include "mfcbf/error.hpp"
#include "mfcbf/scenario.hpp"
#include "mfcbf/sim.hpp"

using namespace mfcbf;

namespace {

ScenarioConfig avoid_cfg(const std::string& adversary_state, const std::string& velocity,
                         const std::string& extra = "", const std::string& epsilon = "0.3") {
    return parse_scenario(R"({
      "mode": "avoidance", "seed": 3,
      "dynamics": {"model": "double_integrator", "spatial_dim": 2},
      "horizon": 0.5, "dt": 0.01,
      "kernel": {"family": "gaussian", "bandwidth": 1.0},
      "epsilon": )" + epsilon + "," + extra + R"(
      "swarm": {"count": 6, "placement": {"kind": "box", "lower": [-1, -1], "upper": [1, 1]}},
      "adversary": {"placement": {"kind": "explicit", "states": [)" + adversary_state + R"(]},
                    "field": {"kind": "constant_velocity", "velocity": )" + velocity + R"(}}
    })");
}

}  // namespace

TEST_CASE("far adversary leaves the swarm alone") {
    const TrajectoryLog log = run_scenario(avoid_cfg("[50, 0]", "[0, 0]"));
    REQUIRE(log.records.size() == 50);
    CHECK_FALSE(log.aborted);
    for (const auto& r : log.records) {
        CHECK(r.report.status == QpStatus::nominal_safe);
        CHECK(r.controls.norm() == 0.0);
        CHECK(r.agents == log.records.front().agents);
        CHECK(r.constraint_rows == 1);
        // Conservation: nothing moves, H stays put.
        CHECK(std::abs(r.h_value - log.records.front().h_value) <= 1e-14);
    }
    CHECK(log.final_state.agents == log.records.front().agents);
    for (std::size_t k = 1; k < log.records.size(); ++k) {
        CHECK(log.records[k].time > log.records[k - 1].time);
        CHECK(log.records[k].time == doctest::Approx(0.01 * k).epsilon(1e-12));
    }
    CHECK(log.final_state.time == doctest::Approx(0.5));
}

TEST_CASE("approaching adversary is filtered and nominal passes when safe") {
    const ScenarioConfig cfg =
        avoid_cfg("[-2, 0]", "[1, 0]", R"("nominal": {"kind": "constant", "value": [0.1, 0]},)", "0.65");
    const TrajectoryLog log = run_scenario(cfg);
    int projected = 0;
    Eigen::MatrixXd nominal = Eigen::MatrixXd::Zero(2, 6);
    nominal.row(0).setConstant(0.1);
    for (const auto& r : log.records) {
        if (r.report.status == QpStatus::nominal_safe) CHECK(r.controls == nominal);
        if (r.report.status == QpStatus::projected) {
            ++projected;
            CHECK(r.residual >= -1e-9);
        }
    }
    CHECK(projected > 0);
}

TEST_CASE("identical configs give identical logs") {
    const ScenarioConfig cfg = avoid_cfg("[-2, 0]", "[1, 0]", "", "0.65");
    const TrajectoryLog a = run_scenario(cfg), b = run_scenario(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].agents == b.records[k].agents);
        CHECK(a.records[k].controls == b.records[k].controls);
        CHECK(a.records[k].h_value == b.records[k].h_value);
    }
}

TEST_CASE("initial placement") {
    ScenarioConfig cfg = parse_scenario(R"({
      "mode": "avoidance", "seed": 9,
      "dynamics": {"model": "double_integrator", "spatial_dim": 3},
      "horizon": 1.0, "kernel": {"family": "gaussian", "bandwidth": 1.0}, "epsilon": 0.3,
      "swarm": {"count": 10, "placement": {"kind": "box", "lower": [0, 1, 2], "upper": [1, 2, 3]}},
      "adversary": {"placement": {"kind": "through_swarm_centroid", "pass_time": 2.0},
                    "field": {"kind": "constant_velocity", "velocity": [1, -1, 0]}}
    })");
    const SwarmState s = initial_state(cfg);
    for (int i = 0; i < 10; ++i) {
        CHECK(s.agents(0, i) >= 0.0);
        CHECK(s.agents(0, i) <= 1.0);
        CHECK(s.agents(2, i) >= 2.0);
        CHECK(s.agents.col(i).tail(3).norm() == 0.0);
    }
    const Eigen::Vector3d centroid = s.agents.topRows(3).rowwise().mean();
    const Eigen::Vector3d expect = centroid - Eigen::Vector3d(2, -2, 0);
    CHECK((s.adversary.col(0).head(3) - expect).norm() <= 1e-12);
    CHECK((s.adversary.col(0).tail(3) - Eigen::Vector3d(1, -1, 0)).norm() == 0.0);
    cfg.seed = 10;
    CHECK(initial_state(cfg).agents != s.agents);
}

TEST_CASE("attract nominal") {
    const ScenarioConfig cfg = avoid_cfg(
        "[50, 0]", "[0, 0]", R"("nominal": {"kind": "attract", "target": [1, 2], "gain": 2, "damping": 0.5},)");
    SwarmState s = initial_state(cfg);
    s.agents.col(0) << 0, 0, 1, 0;
    const Eigen::MatrixXd q = nominal_controls(cfg, s);
    CHECK(q(0, 0) == doctest::Approx(2 * 1 - 0.5));
    CHECK(q(1, 0) == doctest::Approx(2 * 2));
}

TEST_CASE("solver failure aborts and keeps earlier records") {
    ScenarioConfig cfg = parse_scenario(R"({
      "mode": "baseline_pairwise",
      "dynamics": {"model": "single_integrator", "spatial_dim": 1},
      "horizon": 0.01, "dt": 0.001,
      "nominal": {"kind": "constant", "value": [0]},
      "swarm": {"placement": {"kind": "explicit", "states": [[0], [0.5], [1.0]]}},
      "adversary": {"placement": {"kind": "explicit", "states": [[9]]},
                    "field": {"kind": "constant_velocity", "velocity": [-30]}},
      "pairwise": {"safe_distance": 0.1, "individual_barriers": [{"agent": 1, "center": [8], "radius": 0.1}]},
      "solver": {"qp_max_iterations": 2}
    })");
    const TrajectoryLog ok = run_scenario(cfg);
    CHECK_FALSE(ok.aborted);
    CHECK(ok.records.front().report.status == QpStatus::nominal_safe);
    CHECK(ok.records.front().constraint_rows == 3);
    CHECK(ok.final_h == doctest::Approx(0.25 - 0.01));

    cfg.nominal.value = {0.0};
    cfg.swarm_placement.states = {{0.0}, {0.05}, {1.0}};
    const TrajectoryLog bad = run_scenario(cfg);
    REQUIRE(bad.aborted);
    CHECK(bad.records.empty());
    CHECK(bad.aborted->find("step 0") != std::string::npos);
    CHECK(bad.aborted_step_iterations == 2);
}

TEST_CASE("wall budget stops the run") {
    RunOptions o;
    o.wall_budget_s = 0.0;
    const TrajectoryLog log = run_scenario(avoid_cfg("[50, 0]", "[0, 0]"), o);
    CHECK(log.timed_out);
    CHECK(log.records.size() < 50);
}
