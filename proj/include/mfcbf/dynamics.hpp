#pragma once

#include <Eigen/Dense>

#include "mfcbf/swarm_state.hpp"

namespace mfcbf {

enum class DynamicsModel {
    single_integrator,  // x = p in R^d,      u = velocity
    double_integrator,  // x = (p, v) in R^2d, u = acceleration
};

/// Control-affine agent dynamics f(s, x, u) = A(s, x) + B(s, x) u.
class DynamicsSpec {
public:
    DynamicsSpec(DynamicsModel model, int spatial_dim);

    DynamicsModel model() const noexcept { return model_; }
    int spatial_dim() const noexcept { return spatial_dim_; }
    int state_dim() const noexcept;
    int control_dim() const noexcept { return spatial_dim_; }

    bool operator==(const DynamicsSpec&) const = default;

private:
    DynamicsModel model_;
    int spatial_dim_;
};

/// A(s, x).
Eigen::VectorXd drift(const DynamicsSpec& dyn, double s, const Eigen::Ref<const Eigen::VectorXd>& x);

/// B(s, x) as a dense state_dim x control_dim matrix.
Eigen::MatrixXd control_matrix(const DynamicsSpec& dyn, double s,
                               const Eigen::Ref<const Eigen::VectorXd>& x);

/// B(s, x) u without forming B.
Eigen::VectorXd apply_control(const DynamicsSpec& dyn, double s,
                              const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& u);

/// B(s, x)^T a for a state-space covector a.
Eigen::VectorXd apply_control_transpose(const DynamicsSpec& dyn, double s,
                                        const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& a);

/// f(s, x, u).
Eigen::VectorXd velocity(const DynamicsSpec& dyn, double s,
                         const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& u);

/// One explicit Euler step with zero-order-hold controls (control_dim x n).
/// Advances the controlled agents and the clock; adversary columns are copied
/// through untouched.
SwarmState step(const DynamicsSpec& dyn, const SwarmState& state,
                const Eigen::Ref<const Eigen::MatrixXd>& controls, double dt);

}  // namespace mfcbf
