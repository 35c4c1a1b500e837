#include "mfcbf/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfcbf/error.hpp"

namespace mfcbf {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename E>
struct EnumName {
    E value;
    const char* name;
};

constexpr EnumName<ScenarioMode> kModes[] = {{ScenarioMode::avoidance, "avoidance"},
                                             {ScenarioMode::tracking, "tracking"},
                                             {ScenarioMode::baseline_pairwise, "baseline_pairwise"}};
constexpr EnumName<DynamicsModel> kModels[] = {
    {DynamicsModel::single_integrator, "single_integrator"},
    {DynamicsModel::double_integrator, "double_integrator"}};
constexpr EnumName<KernelFamily> kKernels[] = {
    {KernelFamily::gaussian, "gaussian"},
    {KernelFamily::inverse_multiquadric, "inverse_multiquadric"}};
constexpr EnumName<Observation> kObservations[] = {{Observation::full_state, "full_state"},
                                                   {Observation::position_only, "position_only"}};
constexpr EnumName<ClassKFamily> kAlphas[] = {{ClassKFamily::linear, "linear"},
                                              {ClassKFamily::cubic, "cubic"}};
constexpr EnumName<NominalConfig::Kind> kNominals[] = {{NominalConfig::Kind::zero, "zero"},
                                                       {NominalConfig::Kind::constant, "constant"},
                                                       {NominalConfig::Kind::attract, "attract"}};
constexpr EnumName<PlacementConfig::Kind> kPlacements[] = {
    {PlacementConfig::Kind::box, "box"},
    {PlacementConfig::Kind::explicit_states, "explicit"},
    {PlacementConfig::Kind::through_swarm_centroid, "through_swarm_centroid"}};
constexpr EnumName<AdversaryField::Kind> kFields[] = {
    {AdversaryField::Kind::constant_velocity, "constant_velocity"},
    {AdversaryField::Kind::waypoint_path, "waypoint_path"}};
constexpr EnumName<AdversaryIntegrator> kIntegrators[] = {{AdversaryIntegrator::rk4, "rk4"},
                                                          {AdversaryIntegrator::euler, "euler"}};

template <typename E, std::size_t N>
const char* name_of(const EnumName<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Structural reader: every accessor records a problem and carries on, so the
// caller gets the complete list at the end.
class Reader {
public:
    explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

    void issue(const std::string& path, const std::string& what) {
        issues_.push_back(path + ": " + what);
    }

    bool object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        issue(path.empty() ? "<root>" : path, "expected an object");
        return false;
    }

    void allow_only(const json& obj, const std::string& path,
                    std::initializer_list<const char*> keys) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool known = false;
            for (const char* k : keys) known = known || it.key() == k;
            if (!known) issue(join(path, it.key()), "unknown key");
        }
    }

    const json* find(const json& obj, const char* key, const std::string& path, bool required) {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) issue(join(path, key), "required key is missing");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& obj, const char* key, const std::string& path,
                                 bool required) {
        const json* v = find(obj, key, path, required);
        if (!v) return std::nullopt;
        if (!v->is_number()) {
            issue(join(path, key), "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<long long> integer(const json& obj, const char* key, const std::string& path,
                                     bool required) {
        const json* v = find(obj, key, path, required);
        if (!v) return std::nullopt;
        if (!v->is_number_integer()) {
            issue(join(path, key), "expected an integer");
            return std::nullopt;
        }
        return v->get<long long>();
    }

    std::optional<bool> boolean(const json& obj, const char* key, const std::string& path) {
        const json* v = find(obj, key, path, false);
        if (!v) return std::nullopt;
        if (!v->is_boolean()) {
            issue(join(path, key), "expected true or false");
            return std::nullopt;
        }
        return v->get<bool>();
    }

    std::optional<std::string> string(const json& obj, const char* key, const std::string& path,
                                      bool required) {
        const json* v = find(obj, key, path, required);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            issue(join(path, key), "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    template <typename E, std::size_t N>
    std::optional<E> choice(const json& obj, const char* key, const std::string& path,
                            bool required, const EnumName<E> (&table)[N]) {
        auto s = string(obj, key, path, required);
        if (!s) return std::nullopt;
        for (const auto& e : table)
            if (*s == e.name) return e.value;
        std::string allowed;
        for (const auto& e : table) allowed += std::string(allowed.empty() ? "" : ", ") + e.name;
        issue(join(path, key), "unknown value \"" + *s + "\" (allowed: " + allowed + ")");
        return std::nullopt;
    }

    // Array of numbers; null entries map to `null_as` when allowed.
    std::optional<std::vector<double>> vector(const json& v, const std::string& path,
                                              std::optional<double> null_as = std::nullopt) {
        if (!v.is_array()) {
            issue(path, "expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& e = v[i];
            if (e.is_number()) {
                out.push_back(e.get<double>());
            } else if (e.is_null() && null_as) {
                out.push_back(*null_as);
            } else {
                issue(path + "[" + std::to_string(i) + "]",
                      null_as ? "expected a number or null" : "expected a number");
                return std::nullopt;
            }
        }
        return out;
    }

    std::optional<std::vector<double>> vector(const json& obj, const char* key,
                                              const std::string& path, bool required,
                                              std::optional<double> null_as = std::nullopt) {
        const json* v = find(obj, key, path, required);
        if (!v) return std::nullopt;
        return vector(*v, join(path, key), null_as);
    }

private:
    std::vector<std::string>& issues_;
};

PlacementConfig read_placement(Reader& r, const json& j, const std::string& path) {
    PlacementConfig p;
    if (!r.object(j, path)) return p;
    r.allow_only(j, path, {"kind", "lower", "upper", "states", "pass_time"});
    if (auto k = r.choice(j, "kind", path, true, kPlacements)) p.kind = *k;
    switch (p.kind) {
        case PlacementConfig::Kind::box:
            if (auto v = r.vector(j, "lower", path, true)) p.lower = *v;
            if (auto v = r.vector(j, "upper", path, true)) p.upper = *v;
            break;
        case PlacementConfig::Kind::explicit_states:
            if (const json* s = r.find(j, "states", path, true)) {
                if (!s->is_array()) {
                    r.issue(join(path, "states"), "expected an array of state arrays");
                } else {
                    for (std::size_t i = 0; i < s->size(); ++i)
                        if (auto v = r.vector((*s)[i], join(path, "states") + "[" +
                                                           std::to_string(i) + "]"))
                            p.states.push_back(*v);
                }
            }
            break;
        case PlacementConfig::Kind::through_swarm_centroid:
            if (auto v = r.number(j, "pass_time", path, true)) p.pass_time = *v;
            break;
    }
    return p;
}

AdversaryField read_field(Reader& r, const json& j, const std::string& path) {
    AdversaryField f;
    if (!r.object(j, path)) return f;
    r.allow_only(j, path, {"kind", "velocity", "knots"});
    if (auto k = r.choice(j, "kind", path, true, kFields)) f.kind = *k;
    if (f.kind == AdversaryField::Kind::constant_velocity) {
        if (auto v = r.vector(j, "velocity", path, true)) f.velocity = *v;
    } else if (const json* knots = r.find(j, "knots", path, true)) {
        const std::string kp = join(path, "knots");
        if (!knots->is_array()) {
            r.issue(kp, "expected an array of {time, position}");
        } else {
            for (std::size_t i = 0; i < knots->size(); ++i) {
                const std::string ip = kp + "[" + std::to_string(i) + "]";
                const json& kj = (*knots)[i];
                if (!r.object(kj, ip)) continue;
                r.allow_only(kj, ip, {"time", "position"});
                WaypointKnot knot;
                if (auto t = r.number(kj, "time", ip, true)) knot.time = *t;
                if (auto v = r.vector(kj, "position", ip, true)) knot.position = *v;
                f.knots.push_back(std::move(knot));
            }
        }
    }
    return f;
}

void check_vector_size(std::vector<std::string>& issues, const std::string& path,
                       const std::vector<double>& v, std::size_t expected) {
    if (v.size() != expected)
        issues.push_back(path + ": expected " + std::to_string(expected) + " entries, got " +
                         std::to_string(v.size()));
}

void check_finite(std::vector<std::string>& issues, const std::string& path,
                  const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) {
            issues.push_back(path + ": entries must be finite");
            return;
        }
}

void check_placement(std::vector<std::string>& issues, const std::string& path,
                     const PlacementConfig& p, int count, const ScenarioConfig& cfg,
                     bool is_swarm) {
    const std::size_t d = static_cast<std::size_t>(cfg.spatial_dim);
    const std::size_t sd = static_cast<std::size_t>(cfg.dynamics().state_dim());
    switch (p.kind) {
        case PlacementConfig::Kind::box:
            check_vector_size(issues, path + ".lower", p.lower, d);
            check_vector_size(issues, path + ".upper", p.upper, d);
            check_finite(issues, path + ".lower", p.lower);
            check_finite(issues, path + ".upper", p.upper);
            if (p.lower.size() == p.upper.size())
                for (std::size_t c = 0; c < p.lower.size(); ++c)
                    if (p.lower[c] > p.upper[c]) {
                        issues.push_back(path + ": lower exceeds upper in component " +
                                         std::to_string(c));
                        break;
                    }
            break;
        case PlacementConfig::Kind::explicit_states:
            if (static_cast<int>(p.states.size()) != count)
                issues.push_back(path + ".states: " + std::to_string(p.states.size()) +
                                 " states listed for a count of " + std::to_string(count));
            for (std::size_t i = 0; i < p.states.size(); ++i) {
                const auto& s = p.states[i];
                const std::string sp = path + ".states[" + std::to_string(i) + "]";
                const bool full_ok = is_swarm && s.size() == sd;
                if (s.size() != d && !full_ok)
                    issues.push_back(sp + ": expected " + std::to_string(d) +
                                     (is_swarm && sd != d ? " or " + std::to_string(sd) : "") +
                                     " entries, got " + std::to_string(s.size()));
                check_finite(issues, sp, s);
            }
            break;
        case PlacementConfig::Kind::through_swarm_centroid:
            if (is_swarm)
                issues.push_back(path + ".kind: through_swarm_centroid only applies to the adversary");
            if (!std::isfinite(p.pass_time))
                issues.push_back(path + ".pass_time: must be finite");
            break;
    }
}

void collect_semantic_issues(const ScenarioConfig& cfg, std::vector<std::string>& issues) {
    const bool mf = cfg.mode != ScenarioMode::baseline_pairwise;
    if (cfg.spatial_dim < 1) {
        issues.push_back("dynamics.spatial_dim: must be >= 1");
        return;
    }
    const std::size_t d = static_cast<std::size_t>(cfg.spatial_dim);
    const std::size_t sd = static_cast<std::size_t>(cfg.dynamics().state_dim());
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        issues.push_back("horizon: must be positive and finite");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        issues.push_back("dt: must be positive and finite");
    else if (cfg.horizon > 0.0 && cfg.dt > cfg.horizon)
        issues.push_back("dt: must not exceed the horizon");

    if (mf && !cfg.kernel) issues.push_back("kernel: required for mean-field modes");
    if (cfg.kernel && !(cfg.kernel->bandwidth > 0.0 && std::isfinite(cfg.kernel->bandwidth)))
        issues.push_back("kernel.bandwidth: must be positive and finite");
    if (mf && !cfg.epsilon) issues.push_back("epsilon: required for mean-field modes");
    if (cfg.epsilon && !(*cfg.epsilon > 0.0 && std::isfinite(*cfg.epsilon)))
        issues.push_back("epsilon: must be positive and finite");
    if (!(cfg.alpha.gamma > 0.0) || !std::isfinite(cfg.alpha.gamma))
        issues.push_back("alpha.gamma: must be positive and finite");

    if (!cfg.box_lower.empty() || !cfg.box_upper.empty()) {
        check_vector_size(issues, "control_box.lower", cfg.box_lower, d);
        check_vector_size(issues, "control_box.upper", cfg.box_upper, d);
        if (cfg.box_lower.size() == d && cfg.box_upper.size() == d)
            for (std::size_t c = 0; c < d; ++c)
                if (cfg.box_lower[c] > cfg.box_upper[c]) {
                    issues.push_back("control_box: lower exceeds upper in component " +
                                     std::to_string(c));
                    break;
                }
    }

    switch (cfg.nominal.kind) {
        case NominalConfig::Kind::zero:
            break;
        case NominalConfig::Kind::constant:
            check_vector_size(issues, "nominal.value", cfg.nominal.value, d);
            check_finite(issues, "nominal.value", cfg.nominal.value);
            break;
        case NominalConfig::Kind::attract:
            check_vector_size(issues, "nominal.target", cfg.nominal.target, d);
            check_finite(issues, "nominal.target", cfg.nominal.target);
            if (!(cfg.nominal.gain >= 0.0) || !std::isfinite(cfg.nominal.gain))
                issues.push_back("nominal.gain: must be nonnegative and finite");
            if (!(cfg.nominal.damping >= 0.0) || !std::isfinite(cfg.nominal.damping))
                issues.push_back("nominal.damping: must be nonnegative and finite");
            break;
    }

    if (cfg.swarm_count < 1) issues.push_back("swarm.count: must be >= 1");
    check_placement(issues, "swarm.placement", cfg.swarm_placement, cfg.swarm_count, cfg, true);
    if (cfg.adversary_count < 1) issues.push_back("adversary.count: must be >= 1");
    check_placement(issues, "adversary.placement", cfg.adversary_placement, cfg.adversary_count,
                    cfg, false);

    if (cfg.field.kind == AdversaryField::Kind::constant_velocity) {
        check_vector_size(issues, "adversary.field.velocity", cfg.field.velocity, d);
        check_finite(issues, "adversary.field.velocity", cfg.field.velocity);
    } else {
        if (cfg.field.knots.size() < 2)
            issues.push_back("adversary.field.knots: at least two knots required");
        for (std::size_t i = 0; i < cfg.field.knots.size(); ++i) {
            const auto& k = cfg.field.knots[i];
            const std::string kp = "adversary.field.knots[" + std::to_string(i) + "]";
            check_vector_size(issues, kp + ".position", k.position, d);
            check_finite(issues, kp + ".position", k.position);
            if (!std::isfinite(k.time)) issues.push_back(kp + ".time: must be finite");
            if (i > 0 && !(k.time > cfg.field.knots[i - 1].time))
                issues.push_back(kp + ".time: knot times must be strictly increasing");
        }
    }

    if (cfg.mode == ScenarioMode::baseline_pairwise && !cfg.pairwise)
        issues.push_back("pairwise: required for baseline_pairwise mode");
    if (cfg.pairwise) {
        if (!(cfg.pairwise->safe_distance > 0.0) || !std::isfinite(cfg.pairwise->safe_distance))
            issues.push_back("pairwise.safe_distance: must be positive and finite");
        for (std::size_t i = 0; i < cfg.pairwise->individual.size(); ++i) {
            const auto& b = cfg.pairwise->individual[i];
            const std::string bp = "pairwise.individual_barriers[" + std::to_string(i) + "]";
            if (b.agent < 0 || b.agent >= cfg.swarm_count)
                issues.push_back(bp + ".agent: out of range");
            if (static_cast<std::size_t>(b.center.size()) != sd)
                issues.push_back(bp + ".center: expected " + std::to_string(sd) + " entries");
            if (!(b.radius > 0.0) || !std::isfinite(b.radius))
                issues.push_back(bp + ".radius: must be positive");
        }
    }

    if (!(cfg.solver.bisection_tolerance > 0.0))
        issues.push_back("solver.bisection_tolerance: must be positive");
    if (cfg.solver.bisection_max_iterations < 1)
        issues.push_back("solver.bisection_max_iterations: must be >= 1");
    if (!(cfg.solver.qp_tolerance > 0.0)) issues.push_back("solver.qp_tolerance: must be positive");
    if (cfg.solver.qp_max_iterations < 1)
        issues.push_back("solver.qp_max_iterations: must be >= 1");
    if (cfg.output.dir.empty()) issues.push_back("output.dir: must not be empty");
    if (cfg.bench.steps < 1) issues.push_back("bench.steps: must be >= 1");
    if (!(cfg.bench.baseline_time_budget_s > 0.0))
        issues.push_back("bench.baseline_time_budget_s: must be positive");
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json_strict(std::string_view text) {
    std::vector<std::set<std::string>> open;
    std::vector<std::string> duplicates;
    const json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
        switch (ev) {
            case json::parse_event_t::object_start:
                open.emplace_back();
                break;
            case json::parse_event_t::key:
                if (!open.back().insert(parsed.get<std::string>()).second)
                    duplicates.push_back("duplicate key \"" + parsed.get<std::string>() + "\"");
                break;
            case json::parse_event_t::object_end:
                open.pop_back();
                break;
            default:
                break;
        }
        return true;
    };
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), cb);
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        throw ValidationError({"syntax error at " + line_column(text, byte) + ": " + e.what()});
    }
    if (!duplicates.empty()) throw ValidationError(std::move(duplicates));
    return doc;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json bounds_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number_or_null(x));
    return a;
}

json placement_json(const PlacementConfig& p) {
    json j{{"kind", name_of(kPlacements, p.kind)}};
    switch (p.kind) {
        case PlacementConfig::Kind::box:
            j["lower"] = p.lower;
            j["upper"] = p.upper;
            break;
        case PlacementConfig::Kind::explicit_states:
            j["states"] = p.states;
            break;
        case PlacementConfig::Kind::through_swarm_centroid:
            j["pass_time"] = p.pass_time;
            break;
    }
    return j;
}

}  // namespace

const char* to_string(ScenarioMode mode) noexcept { return name_of(kModes, mode); }

int ScenarioConfig::step_count() const {
    const double ratio = horizon / dt;
    return static_cast<int>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
}

ControlBox ScenarioConfig::control_box() const {
    if (box_lower.empty()) return ControlBox::unbounded(spatial_dim);
    return ControlBox(Eigen::Map<const Eigen::VectorXd>(box_lower.data(), spatial_dim),
                      Eigen::Map<const Eigen::VectorXd>(box_upper.data(), spatial_dim));
}

BarrierSpec ScenarioConfig::barrier() const {
    if (!kernel || !epsilon) throw InvalidArgument("scenario has no mean-field barrier configured");
    const KernelSpec k(kernel->family, kernel->bandwidth, kernel->observation, spatial_dim);
    return BarrierSpec(mode == ScenarioMode::tracking ? BarrierMode::tracking : BarrierMode::avoidance,
                       *epsilon, ClassKSpec(alpha.family, alpha.gamma), k);
}

PairwiseSpec ScenarioConfig::pairwise_spec() const {
    if (!pairwise) throw InvalidArgument("scenario has no pairwise barrier configured");
    return PairwiseSpec(pairwise->safe_distance, ClassKSpec(alpha.family, alpha.gamma),
                        pairwise->individual);
}

void validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> issues;
    collect_semantic_issues(cfg, issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

ScenarioConfig parse_scenario(std::string_view text) {
    const json doc = parse_json_strict(text);
    std::vector<std::string> issues;
    Reader r(issues);
    ScenarioConfig cfg;
    if (!r.object(doc, "")) throw ValidationError(std::move(issues));

    r.allow_only(doc, "", {"mode", "seed", "dynamics", "horizon", "dt", "kernel", "epsilon",
                           "alpha", "control_box", "nominal", "swarm", "adversary", "pairwise",
                           "solver", "output", "bench"});
    if (auto v = r.choice(doc, "mode", "", true, kModes)) cfg.mode = *v;
    if (auto v = r.integer(doc, "seed", "", false)) {
        if (*v < 0) r.issue("seed", "must be nonnegative");
        else cfg.seed = static_cast<std::uint64_t>(*v);
    }

    if (const json* dj = r.find(doc, "dynamics", "", true); dj && r.object(*dj, "dynamics")) {
        r.allow_only(*dj, "dynamics", {"model", "spatial_dim"});
        if (auto v = r.choice(*dj, "model", "dynamics", true, kModels)) cfg.model = *v;
        if (auto v = r.integer(*dj, "spatial_dim", "dynamics", true)) cfg.spatial_dim = static_cast<int>(*v);
    }
    if (auto v = r.number(doc, "horizon", "", true)) cfg.horizon = *v;
    cfg.dt = cfg.mode == ScenarioMode::tracking ? 2e-3 : 1e-2;
    if (auto v = r.number(doc, "dt", "", false)) cfg.dt = *v;

    if (const json* kj = r.find(doc, "kernel", "", false); kj && r.object(*kj, "kernel")) {
        r.allow_only(*kj, "kernel", {"family", "bandwidth", "observation"});
        KernelConfig k;
        if (auto v = r.choice(*kj, "family", "kernel", false, kKernels)) k.family = *v;
        if (auto v = r.number(*kj, "bandwidth", "kernel", true)) k.bandwidth = *v;
        else k.bandwidth = std::numeric_limits<double>::quiet_NaN();
        if (auto v = r.choice(*kj, "observation", "kernel", false, kObservations)) k.observation = *v;
        cfg.kernel = k;
    }
    if (auto v = r.number(doc, "epsilon", "", false)) cfg.epsilon = *v;

    if (const json* aj = r.find(doc, "alpha", "", false); aj && r.object(*aj, "alpha")) {
        r.allow_only(*aj, "alpha", {"family", "gamma"});
        if (auto v = r.choice(*aj, "family", "alpha", false, kAlphas)) cfg.alpha.family = *v;
        if (auto v = r.number(*aj, "gamma", "alpha", false)) cfg.alpha.gamma = *v;
    }

    if (const json* bj = r.find(doc, "control_box", "", false); bj && r.object(*bj, "control_box")) {
        r.allow_only(*bj, "control_box", {"lower", "upper"});
        if (auto v = r.vector(*bj, "lower", "control_box", true, -kInf)) cfg.box_lower = *v;
        if (auto v = r.vector(*bj, "upper", "control_box", true, kInf)) cfg.box_upper = *v;
    }

    if (const json* nj = r.find(doc, "nominal", "", false); nj && r.object(*nj, "nominal")) {
        r.allow_only(*nj, "nominal", {"kind", "value", "target", "gain", "damping"});
        if (auto v = r.choice(*nj, "kind", "nominal", true, kNominals)) cfg.nominal.kind = *v;
        if (cfg.nominal.kind == NominalConfig::Kind::constant) {
            if (auto v = r.vector(*nj, "value", "nominal", true)) cfg.nominal.value = *v;
        } else if (cfg.nominal.kind == NominalConfig::Kind::attract) {
            if (auto v = r.vector(*nj, "target", "nominal", true)) cfg.nominal.target = *v;
            if (auto v = r.number(*nj, "gain", "nominal", true)) cfg.nominal.gain = *v;
            if (auto v = r.number(*nj, "damping", "nominal", false)) cfg.nominal.damping = *v;
        }
    }

    if (const json* sj = r.find(doc, "swarm", "", true); sj && r.object(*sj, "swarm")) {
        r.allow_only(*sj, "swarm", {"count", "placement"});
        if (const json* pj = r.find(*sj, "placement", "swarm", true))
            cfg.swarm_placement = read_placement(r, *pj, "swarm.placement");
        if (auto v = r.integer(*sj, "count", "swarm",
                               cfg.swarm_placement.kind != PlacementConfig::Kind::explicit_states))
            cfg.swarm_count = static_cast<int>(*v);
        else if (cfg.swarm_placement.kind == PlacementConfig::Kind::explicit_states)
            cfg.swarm_count = static_cast<int>(cfg.swarm_placement.states.size());
    }

    if (const json* aj = r.find(doc, "adversary", "", true); aj && r.object(*aj, "adversary")) {
        r.allow_only(*aj, "adversary", {"count", "placement", "field", "integrator"});
        if (const json* pj = r.find(*aj, "placement", "adversary", true))
            cfg.adversary_placement = read_placement(r, *pj, "adversary.placement");
        if (auto v = r.integer(*aj, "count", "adversary", false))
            cfg.adversary_count = static_cast<int>(*v);
        else if (cfg.adversary_placement.kind == PlacementConfig::Kind::explicit_states)
            cfg.adversary_count = static_cast<int>(cfg.adversary_placement.states.size());
        if (const json* fj = r.find(*aj, "field", "adversary", true))
            cfg.field = read_field(r, *fj, "adversary.field");
        if (auto v = r.choice(*aj, "integrator", "adversary", false, kIntegrators))
            cfg.adversary_integrator = *v;
    }

    if (const json* pj = r.find(doc, "pairwise", "", false); pj && r.object(*pj, "pairwise")) {
        r.allow_only(*pj, "pairwise", {"safe_distance", "individual_barriers"});
        PairwiseConfig pw;
        if (auto v = r.number(*pj, "safe_distance", "pairwise", true)) pw.safe_distance = *v;
        if (const json* ib = r.find(*pj, "individual_barriers", "pairwise", false)) {
            if (!ib->is_array()) {
                r.issue("pairwise.individual_barriers", "expected an array");
            } else {
                for (std::size_t i = 0; i < ib->size(); ++i) {
                    const std::string bp = "pairwise.individual_barriers[" + std::to_string(i) + "]";
                    const json& bj = (*ib)[i];
                    if (!r.object(bj, bp)) continue;
                    r.allow_only(bj, bp, {"agent", "center", "radius"});
                    SphereBarrier b;
                    if (auto v = r.integer(bj, "agent", bp, true)) b.agent = static_cast<int>(*v);
                    if (auto v = r.vector(bj, "center", bp, true))
                        b.center = Eigen::Map<const Eigen::VectorXd>(v->data(),
                                                                     static_cast<Eigen::Index>(v->size()));
                    if (auto v = r.number(bj, "radius", bp, true)) b.radius = *v;
                    pw.individual.push_back(std::move(b));
                }
            }
        }
        cfg.pairwise = std::move(pw);
    }

    if (const json* sj = r.find(doc, "solver", "", false); sj && r.object(*sj, "solver")) {
        r.allow_only(*sj, "solver", {"bisection_tolerance", "bisection_max_iterations",
                                     "qp_tolerance", "qp_max_iterations"});
        if (auto v = r.number(*sj, "bisection_tolerance", "solver", false)) cfg.solver.bisection_tolerance = *v;
        if (auto v = r.integer(*sj, "bisection_max_iterations", "solver", false))
            cfg.solver.bisection_max_iterations = static_cast<int>(*v);
        if (auto v = r.number(*sj, "qp_tolerance", "solver", false)) cfg.solver.qp_tolerance = *v;
        if (auto v = r.integer(*sj, "qp_max_iterations", "solver", false))
            cfg.solver.qp_max_iterations = static_cast<int>(*v);
    }

    if (const json* oj = r.find(doc, "output", "", false); oj && r.object(*oj, "output")) {
        r.allow_only(*oj, "output", {"dir", "record_timing"});
        if (auto v = r.string(*oj, "dir", "output", false)) cfg.output.dir = *v;
        if (auto v = r.boolean(*oj, "record_timing", "output")) cfg.output.record_timing = *v;
    }

    if (const json* bj = r.find(doc, "bench", "", false); bj && r.object(*bj, "bench")) {
        r.allow_only(*bj, "bench", {"steps", "baseline_time_budget_s"});
        if (auto v = r.integer(*bj, "steps", "bench", false)) cfg.bench.steps = static_cast<int>(*v);
        if (auto v = r.number(*bj, "baseline_time_budget_s", "bench", false))
            cfg.bench.baseline_time_budget_s = *v;
    }

    collect_semantic_issues(cfg, issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["mode"] = to_string(cfg.mode);
    j["seed"] = cfg.seed;
    j["dynamics"] = {{"model", name_of(kModels, cfg.model)}, {"spatial_dim", cfg.spatial_dim}};
    j["horizon"] = cfg.horizon;
    j["dt"] = cfg.dt;
    if (cfg.kernel)
        j["kernel"] = {{"family", name_of(kKernels, cfg.kernel->family)},
                       {"bandwidth", cfg.kernel->bandwidth},
                       {"observation", name_of(kObservations, cfg.kernel->observation)}};
    if (cfg.epsilon) j["epsilon"] = *cfg.epsilon;
    j["alpha"] = {{"family", name_of(kAlphas, cfg.alpha.family)}, {"gamma", cfg.alpha.gamma}};
    if (!cfg.box_lower.empty())
        j["control_box"] = {{"lower", bounds_json(cfg.box_lower)}, {"upper", bounds_json(cfg.box_upper)}};

    json nom{{"kind", name_of(kNominals, cfg.nominal.kind)}};
    if (cfg.nominal.kind == NominalConfig::Kind::constant) nom["value"] = cfg.nominal.value;
    if (cfg.nominal.kind == NominalConfig::Kind::attract) {
        nom["target"] = cfg.nominal.target;
        nom["gain"] = cfg.nominal.gain;
        nom["damping"] = cfg.nominal.damping;
    }
    j["nominal"] = nom;

    j["swarm"] = {{"count", cfg.swarm_count}, {"placement", placement_json(cfg.swarm_placement)}};
    json field{{"kind", name_of(kFields, cfg.field.kind)}};
    if (cfg.field.kind == AdversaryField::Kind::constant_velocity) {
        field["velocity"] = cfg.field.velocity;
    } else {
        field["knots"] = json::array();
        for (const auto& k : cfg.field.knots)
            field["knots"].push_back({{"time", k.time}, {"position", k.position}});
    }
    j["adversary"] = {{"count", cfg.adversary_count},
                      {"placement", placement_json(cfg.adversary_placement)},
                      {"field", field},
                      {"integrator", name_of(kIntegrators, cfg.adversary_integrator)}};
    if (cfg.pairwise) {
        json pw{{"safe_distance", cfg.pairwise->safe_distance}};
        json ib = json::array();
        for (const auto& b : cfg.pairwise->individual)
            ib.push_back({{"agent", b.agent},
                          {"center", std::vector<double>(b.center.data(), b.center.data() + b.center.size())},
                          {"radius", b.radius}});
        pw["individual_barriers"] = ib;
        j["pairwise"] = pw;
    }
    j["solver"] = {{"bisection_tolerance", cfg.solver.bisection_tolerance},
                   {"bisection_max_iterations", cfg.solver.bisection_max_iterations},
                   {"qp_tolerance", cfg.solver.qp_tolerance},
                   {"qp_max_iterations", cfg.solver.qp_max_iterations}};
    j["output"] = {{"dir", cfg.output.dir}, {"record_timing", cfg.output.record_timing}};
    j["bench"] = {{"steps", cfg.bench.steps},
                  {"baseline_time_budget_s", cfg.bench.baseline_time_budget_s}};
    return j.dump(2) + "\n";
}

}  // namespace mfcbf
