#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "mfcbf/barrier.hpp"
#include "mfcbf/error.hpp"
#include "mfcbf/log_io.hpp"
#include "mfcbf/scenario.hpp"

using namespace mfcbf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mfcbf_test_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

ScenarioConfig cfg(int steps, int n) {
    ScenarioConfig c = parse_scenario(R"({
      "mode": "avoidance", "seed": 5,
      "dynamics": {"model": "double_integrator", "spatial_dim": 2},
      "horizon": 1, "dt": 0.01,
      "kernel": {"family": "gaussian", "bandwidth": 1.0}, "epsilon": 0.2,
      "control_box": {"lower": [-2, -2], "upper": [2, 2]},
      "swarm": {"count": 1, "placement": {"kind": "box", "lower": [-1, -1], "upper": [1, 1]}},
      "adversary": {"placement": {"kind": "explicit", "states": [[-2, 0]]},
                    "field": {"kind": "constant_velocity", "velocity": [3, 0]}},
      "output": {"record_timing": false}
    })");
    c.horizon = steps * c.dt;
    c.swarm_count = n;
    return c;
}

}  // namespace

TEST_CASE("one step, one agent, one adversary") {
    const fs::path dir = scratch("one");
    write_log(run_scenario(cfg(1, 1)), dir.string());
    const auto t = lines(dir / "trajectory.csv");
    REQUIRE(t.size() == 3);
    CHECK(t[0] == "step,time,kind,agent_id,x0,x1,x2,x3,u0,u1");
    CHECK(t[2].substr(0, 16) == "0,0,adversary,0,");
    CHECK(t[2].substr(t[2].size() - 2) == ",,");
    const auto b = lines(dir / "barrier.csv");
    REQUIRE(b.size() == 2);
    CHECK(b[0] == "step,time,h_value,residual,status,lambda,solve_ms");
    CHECK(fs::exists(dir / "scenario.json"));
}

TEST_CASE("logs round-trip and agree with recomputed barrier values") {
    const fs::path dir = scratch("roundtrip");
    const ScenarioConfig c = cfg(60, 5);
    const TrajectoryLog log = run_scenario(c);
    write_log(log, dir.string());
    const auto traj = read_trajectory_csv((dir / "trajectory.csv").string());
    const auto bar = read_barrier_csv((dir / "barrier.csv").string());
    REQUIRE(bar.size() == log.records.size());
    REQUIRE(traj.size() == log.records.size() * 6);

    for (std::size_t k = 0; k < log.records.size(); ++k) {
        const StepRecord& r = log.records[k];
        CHECK(bar[k].h_value == r.h_value);
        CHECK(bar[k].residual == r.residual);
        CHECK(bar[k].status == to_string(r.report.status));
        CHECK(bar[k].solve_ms == 0.0);
        Eigen::MatrixXd agents(4, 5), adv(4, 1);
        for (int j = 0; j < 6; ++j) {
            const TrajectoryRow& row = traj[k * 6 + j];
            CHECK(row.step == static_cast<int>(k));
            const Eigen::Map<const Eigen::VectorXd> x(row.state.data(), 4);
            if (row.kind == "swarm") {
                agents.col(row.agent_id) = x;
                CHECK(row.control[0] == r.controls(0, row.agent_id));
                CHECK(row.control[1] == r.controls(1, row.agent_id));
            } else {
                adv.col(row.agent_id) = x;
                CHECK(row.control.empty());
            }
        }
        CHECK(agents == r.agents);
        const double h = barrier_value(c.barrier(), r.time, EmpiricalMeasure(agents), EmpiricalMeasure(adv));
        CHECK(std::abs(h - bar[k].h_value) <= 1e-12);
    }

    // Writing the same log again reproduces the files byte for byte.
    const fs::path dir2 = scratch("roundtrip2");
    write_log(log, dir2.string());
    CHECK(lines(dir / "trajectory.csv") == lines(dir2 / "trajectory.csv"));
    CHECK(parse_scenario([&] {
              std::ifstream in(dir / "scenario.json");
              return std::string(std::istreambuf_iterator<char>(in), {});
          }()) == c);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("unwritable destination") {
    const fs::path file = scratch("blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_AS(write_log(run_scenario(cfg(1, 1)), (file / "sub").string()), IoError);
    CHECK_THROWS_AS(read_barrier_csv("/nonexistent/barrier.csv"), IoError);
}
