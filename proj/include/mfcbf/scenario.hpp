#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfcbf/adversary.hpp"
#include "mfcbf/barrier.hpp"
#include "mfcbf/baseline.hpp"
#include "mfcbf/dynamics.hpp"
#include "mfcbf/kernel.hpp"

namespace mfcbf {

enum class ScenarioMode { avoidance, tracking, baseline_pairwise };

struct KernelConfig {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 0.0;
    Observation observation = Observation::full_state;

    bool operator==(const KernelConfig&) const = default;
};

struct AlphaConfig {
    ClassKFamily family = ClassKFamily::linear;
    double gamma = 1.0;

    bool operator==(const AlphaConfig&) const = default;
};

/// Nominal (pre-planned) control q*.
struct NominalConfig {
    enum class Kind { zero, constant, attract };

    Kind kind = Kind::zero;
    std::vector<double> value;   // constant
    std::vector<double> target;  // attract: q*_i = gain (target - p_i) - damping v_i
    double gain = 0.0;
    double damping = 0.0;

    bool operator==(const NominalConfig&) const = default;
};

struct PlacementConfig {
    enum class Kind { box, explicit_states, through_swarm_centroid };

    Kind kind = Kind::box;
    std::vector<double> lower;                // box, spatial_dim entries
    std::vector<double> upper;
    std::vector<std::vector<double>> states;  // explicit: positions or full states
    double pass_time = 0.0;                   // through_swarm_centroid

    bool operator==(const PlacementConfig&) const = default;
};

struct SolverConfig {
    double bisection_tolerance = 1e-10;
    int bisection_max_iterations = 200;
    double qp_tolerance = 1e-8;
    int qp_max_iterations = 50000;

    bool operator==(const SolverConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    bool record_timing = true;

    bool operator==(const OutputConfig&) const = default;
};

struct BenchConfig {
    int steps = 20;
    double baseline_time_budget_s = 120.0;

    bool operator==(const BenchConfig&) const = default;
};

struct PairwiseConfig {
    double safe_distance = 0.0;
    std::vector<SphereBarrier> individual;

    bool operator==(const PairwiseConfig&) const = default;
};

/// Fully validated scenario. Vectors are plain std::vector so that configs
/// compare by value; +/-inf box bounds are written as null in JSON.
struct ScenarioConfig {
    ScenarioMode mode = ScenarioMode::avoidance;
    std::uint64_t seed = 0;
    DynamicsModel model = DynamicsModel::double_integrator;
    int spatial_dim = 3;
    double horizon = 0.0;
    double dt = 1e-2;

    std::optional<KernelConfig> kernel;
    std::optional<double> epsilon;
    AlphaConfig alpha;
    std::vector<double> box_lower;  // empty: unbounded
    std::vector<double> box_upper;
    NominalConfig nominal;

    int swarm_count = 0;
    PlacementConfig swarm_placement;

    int adversary_count = 1;
    PlacementConfig adversary_placement;
    AdversaryField field;
    AdversaryIntegrator adversary_integrator = AdversaryIntegrator::rk4;

    std::optional<PairwiseConfig> pairwise;
    SolverConfig solver;
    OutputConfig output;
    BenchConfig bench;

    bool operator==(const ScenarioConfig&) const = default;

    DynamicsSpec dynamics() const { return {model, spatial_dim}; }
    /// ceil(T / dt), robust to T being a float multiple of dt.
    int step_count() const;
    ControlBox control_box() const;
    /// Requires kernel and epsilon; tracking for tracking mode, avoidance otherwise.
    BarrierSpec barrier() const;
    PairwiseSpec pairwise_spec() const;
};

/// Parses and validates a JSON scenario. Throws ValidationError listing every
/// problem (syntax errors carry line/column, schema errors a key path).
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario(const std::string& path);

/// Re-parseable JSON echo of a config.
std::string scenario_to_json(const ScenarioConfig& cfg);

/// Re-runs the semantic checks on a programmatically built config.
void validate_scenario(const ScenarioConfig& cfg);

const char* to_string(ScenarioMode mode) noexcept;

}  // namespace mfcbf
