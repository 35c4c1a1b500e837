#include "mfcbf/sim.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "mfcbf/barrier.hpp"
#include "mfcbf/baseline.hpp"
#include "mfcbf/error.hpp"
#include "mfcbf/measure.hpp"

namespace mfcbf {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd place(const PlacementConfig& p, int count, const DynamicsSpec& dyn,
                      std::mt19937_64& rng) {
    const int d = dyn.spatial_dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dyn.state_dim(), count);
    switch (p.kind) {
        case PlacementConfig::Kind::box: {
            for (int i = 0; i < count; ++i)
                for (int c = 0; c < d; ++c) {
                    std::uniform_real_distribution<double> u(p.lower[c], p.upper[c]);
                    out(c, i) = u(rng);
                }
            break;
        }
        case PlacementConfig::Kind::explicit_states:
            for (int i = 0; i < count; ++i) {
                const Eigen::VectorXd s = to_eigen(p.states[i]);
                out.col(i).head(s.size()) = s;
            }
            break;
        case PlacementConfig::Kind::through_swarm_centroid:
            break;  // needs the swarm, resolved by the caller
    }
    return out;
}

Eigen::MatrixXd adversary_state_velocities(const AdversaryField& field, const DynamicsSpec& dyn,
                                           double s, const Eigen::MatrixXd& adversary) {
    Eigen::MatrixXd v(adversary.rows(), adversary.cols());
    for (Eigen::Index j = 0; j < adversary.cols(); ++j)
        v.col(j) = adversary_velocity(field, dyn, s, adversary.col(j));
    return v;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SwarmState initial_state(const ScenarioConfig& cfg) {
    const DynamicsSpec dyn = cfg.dynamics();
    const int d = dyn.spatial_dim();
    std::mt19937_64 rng(cfg.seed);

    SwarmState st;
    st.time = 0.0;
    st.agents = place(cfg.swarm_placement, cfg.swarm_count, dyn, rng);
    st.adversary = place(cfg.adversary_placement, cfg.adversary_count, dyn, rng);
    if (cfg.adversary_placement.kind == PlacementConfig::Kind::through_swarm_centroid) {
        const Eigen::VectorXd centroid = st.agents.topRows(d).rowwise().mean();
        const Eigen::VectorXd start =
            centroid - cfg.field.displacement(0.0, cfg.adversary_placement.pass_time);
        st.adversary.topRows(d).colwise() = start;
    }
    if (dyn.model() == DynamicsModel::double_integrator)
        st.adversary.bottomRows(d).colwise() = cfg.field.spatial_velocity(0.0);
    return st;
}

Eigen::MatrixXd nominal_controls(const ScenarioConfig& cfg, const SwarmState& state) {
    const int d = cfg.spatial_dim;
    const Eigen::Index n = state.agents.cols();
    switch (cfg.nominal.kind) {
        case NominalConfig::Kind::zero:
            return Eigen::MatrixXd::Zero(d, n);
        case NominalConfig::Kind::constant:
            return to_eigen(cfg.nominal.value).replicate(1, n);
        case NominalConfig::Kind::attract: {
            Eigen::MatrixXd q = cfg.nominal.gain *
                                ((-state.agents.topRows(d)).colwise() + to_eigen(cfg.nominal.target));
            if (cfg.model == DynamicsModel::double_integrator)
                q -= cfg.nominal.damping * state.agents.bottomRows(d);
            return q;
        }
    }
    return Eigen::MatrixXd::Zero(d, n);
}

TrajectoryLog run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
    validate_scenario(cfg);
    const DynamicsSpec dyn = cfg.dynamics();
    const ControlBox box = cfg.control_box();
    const bool mean_field = cfg.mode != ScenarioMode::baseline_pairwise;
    const int steps = cfg.step_count();

    AdversaryField field = cfg.field;
    field.horizon = steps * cfg.dt;

    std::optional<BarrierSpec> barrier;
    if (mean_field) barrier = cfg.barrier();
    std::optional<PairwiseSpec> pairwise;
    if (!mean_field) pairwise = cfg.pairwise_spec();

    const ProjectionOptions popts{cfg.solver.bisection_tolerance, cfg.solver.bisection_max_iterations};
    DenseQpOptions qopts;
    qopts.tolerance = cfg.solver.qp_tolerance;
    qopts.max_iterations = cfg.solver.qp_max_iterations;

    TrajectoryLog log;
    log.config = cfg;
    log.records.reserve(static_cast<std::size_t>(steps));
    const auto run_start = std::chrono::steady_clock::now();

    SwarmState state = initial_state(cfg);
    int k = 0;
    auto t0 = std::chrono::steady_clock::now();
    try {
        for (; k < steps; ++k) {
            const double s = k * cfg.dt;
            state.time = s;
            if (opts.wall_budget_s && elapsed_ms(run_start) > 1e3 * *opts.wall_budget_s) {
                log.timed_out = true;
                break;
            }

            StepRecord rec;
            rec.step = k;
            rec.time = s;
            rec.agents = state.agents;
            rec.adversary = state.adversary;
            const Eigen::MatrixXd q_nom = nominal_controls(cfg, state);

            t0 = std::chrono::steady_clock::now();
            if (mean_field) {
                const EmpiricalMeasure rho(state.agents);
                const EmpiricalMeasure target(state.adversary);
                const Eigen::MatrixXd v_target =
                    adversary_state_velocities(field, dyn, s, state.adversary);
                const ConstraintRow row = assemble_constraint(*barrier, dyn, s, rho, target, v_target);
                QpSolution sol = project_halfspace_box(q_nom, row, box, popts);
                rec.solve_ms = elapsed_ms(t0);
                rec.controls = std::move(sol.controls);
                rec.report = sol.report;
                rec.h_value = row.h_value;
                rec.residual = dh_ds_analytic(row, rec.controls) + row.alpha_value;
                rec.constraint_rows = 1;
            } else {
                const PairwiseRows rows = pairwise_constraints(*pairwise, dyn, s, state.agents);
                QpSolution sol = solve_dense_qp(Eigen::VectorXd::Ones(state.agents.cols()), q_nom,
                                                rows.rows, box, qopts);
                rec.solve_ms = elapsed_ms(t0);
                rec.controls = std::move(sol.controls);
                rec.report = sol.report;
                const Eigen::Index nr = rows.rows.matrix.rows();
                rec.constraint_rows = static_cast<int>(nr - static_cast<Eigen::Index>(pairwise->individual().size()));
                if (nr > 0) {
                    const Eigen::Map<const Eigen::VectorXd> q(rec.controls.data(), rec.controls.size());
                    rec.h_value = rows.h_values.minCoeff();
                    rec.residual = (rows.rows.matrix * q - rows.rows.lower_bounds).minCoeff();
                } else {
                    rec.h_value = std::numeric_limits<double>::infinity();
                    rec.residual = std::numeric_limits<double>::infinity();
                }
            }
            if (!cfg.output.record_timing) rec.solve_ms = 0.0;

            SwarmState next = step(dyn, state, rec.controls, cfg.dt);
            transport_adversary(field, dyn, cfg.adversary_integrator, s, cfg.dt, next.adversary);
            if (!next.adversary.allFinite())
                throw NumericalError("adversary state became non-finite at step " + std::to_string(k));
            log.records.push_back(std::move(rec));
            state = std::move(next);
        }
    } catch (const QpNotConverged& e) {
        log.aborted = "step " + std::to_string(k) + ": " + e.what();
        log.aborted_step_ms = elapsed_ms(t0);
        log.aborted_step_iterations = e.iterations();
    } catch (const Error& e) {
        log.aborted = "step " + std::to_string(k) + ": " + e.what();
        log.aborted_step_ms = elapsed_ms(t0);
    }
    state.time = k * cfg.dt;
    log.final_state = state;
    if (mean_field && !log.aborted)
        log.final_h = barrier_value(*barrier, state.time, EmpiricalMeasure(state.agents),
                                    EmpiricalMeasure(state.adversary));
    if (!mean_field && !log.aborted) {
        const PairwiseRows rows = pairwise_constraints(*pairwise, dyn, state.time, state.agents);
        log.final_h = rows.h_values.size() > 0 ? rows.h_values.minCoeff()
                                               : std::numeric_limits<double>::infinity();
    }
    return log;
}

}  // namespace mfcbf
