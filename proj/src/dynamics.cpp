#include "mfcbf/dynamics.hpp"

#include <cmath>
#include <string>

#include "mfcbf/error.hpp"

namespace mfcbf {

DynamicsSpec::DynamicsSpec(DynamicsModel model, int spatial_dim)
    : model_(model), spatial_dim_(spatial_dim) {
    if (spatial_dim < 1) throw InvalidArgument("spatial_dim must be >= 1");
}

int DynamicsSpec::state_dim() const noexcept {
    return model_ == DynamicsModel::double_integrator ? 2 * spatial_dim_ : spatial_dim_;
}

namespace {

void check_state(const DynamicsSpec& dyn, Eigen::Index size) {
    if (size != dyn.state_dim())
        throw DimensionError("state has dimension " + std::to_string(size) + ", model expects " +
                             std::to_string(dyn.state_dim()));
}

void check_control(const DynamicsSpec& dyn, Eigen::Index size) {
    if (size != dyn.control_dim())
        throw DimensionError("control has dimension " + std::to_string(size) +
                             ", model expects " + std::to_string(dyn.control_dim()));
}

}  // namespace

Eigen::VectorXd drift(const DynamicsSpec& dyn, double, const Eigen::Ref<const Eigen::VectorXd>& x) {
    check_state(dyn, x.size());
    Eigen::VectorXd a = Eigen::VectorXd::Zero(x.size());
    if (dyn.model() == DynamicsModel::double_integrator) {
        const int d = dyn.spatial_dim();
        a.head(d) = x.tail(d);
    }
    return a;
}

Eigen::MatrixXd control_matrix(const DynamicsSpec& dyn, double,
                               const Eigen::Ref<const Eigen::VectorXd>& x) {
    check_state(dyn, x.size());
    const int d = dyn.spatial_dim();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dyn.state_dim(), d);
    b.bottomRows(d).setIdentity();
    return b;
}

Eigen::VectorXd apply_control(const DynamicsSpec& dyn, double,
                              const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& u) {
    check_state(dyn, x.size());
    check_control(dyn, u.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    out.tail(dyn.spatial_dim()) = u;
    return out;
}

Eigen::VectorXd apply_control_transpose(const DynamicsSpec& dyn, double,
                                        const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& a) {
    check_state(dyn, x.size());
    check_state(dyn, a.size());
    return a.tail(dyn.spatial_dim());
}

Eigen::VectorXd velocity(const DynamicsSpec& dyn, double s,
                         const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& u) {
    return drift(dyn, s, x) + apply_control(dyn, s, x, u);
}

SwarmState step(const DynamicsSpec& dyn, const SwarmState& state,
                const Eigen::Ref<const Eigen::MatrixXd>& controls, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
    const auto& x = state.agents;
    if (x.rows() != dyn.state_dim())
        throw DimensionError("agent states have dimension " + std::to_string(x.rows()) +
                             ", model expects " + std::to_string(dyn.state_dim()));
    if (controls.rows() != dyn.control_dim() || controls.cols() != x.cols())
        throw DimensionError("expected " + std::to_string(x.cols()) + " controls of dimension " +
                             std::to_string(dyn.control_dim()));
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        if (!x.col(i).allFinite())
            throw NumericalError("agent " + std::to_string(i) + " has a non-finite state");
        if (!controls.col(i).allFinite())
            throw NumericalError("agent " + std::to_string(i) + " has a non-finite control");
    }

    SwarmState next;
    next.time = state.time + dt;
    next.adversary = state.adversary;
    next.agents.resize(x.rows(), x.cols());
    const int d = dyn.spatial_dim();
    if (dyn.model() == DynamicsModel::single_integrator) {
        next.agents = x + dt * controls;
    } else {
        next.agents.topRows(d) = x.topRows(d) + dt * x.bottomRows(d);
        next.agents.bottomRows(d) = x.bottomRows(d) + dt * controls;
    }
    return next;
}

}  // namespace mfcbf
